#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "indicial/cutoff.hpp"
#include "indicial/ode_core.hpp"
#include "indicial/series.hpp"

#include "json.hpp"

namespace indicial {

/**
 * Boundary expansion u = sum c_i t^i + sum c_{i,j} t^{i+gamma} (log t)^j
 * through order k, with the log triangle 0 <= j <= i - int_part.
 */
struct Expansion {
    int k = 0;
    int int_part = 0;
    BoundaryFunction gamma;
    std::vector<BoundaryFunction> c_int;               // c_0 .. c_k
    std::map<std::pair<int, int>, BoundaryFunction> c_log; // (i,j) -> c_{i,j}
    bool small_index_mode = false;
    double block_residual = 0.0; // measured round-trip residual of the solved blocks
    double data_fit_error = 0.0; // certified error of the c_{[m],0} node fit

    Series to_series() const;
    Expansion truncated(int kk) const; // keep all blocks with i <= kk
    double evaluate(double x, double t) const;
    double max_log_coeff_norm(int j_min) const; // max over (i, j >= j_min) of sup|c_{i,j}|

    nlohmann::json to_json() const;
};

struct ExpandOptions {
    int taylor_order = -1;       // <0: auto (k + 4)
    double budget_tol = 1e-8;    // measured block-residual budget per order
    bool small_index_mode = false; // report S6-style dual remainder ledger
};

/**
 * The order-by-order recursion: Taylor coefficients of F give
 * c_i = a_i / ((i - m_lower)(i - m_upper)); the generalized-power blocks of
 * F, produced by feeding the partial expansion back through assemble_F,
 * are solved by the triangular log system; c_{[m],0} comes from matching
 * the quadrature bracket at t = r. `probe` supplies the full solution
 * series for the bracket integrals whenever the operator couples u into F.
 */
Expansion expand(const ModelODE& ode, const OperatorSpec& op, const Series& f,
                 const BoundaryFunction& data_at_r, int k, const Series* probe = nullptr,
                 const ExpandOptions& opts = {});

enum class ExampleMode { NonIntegerConstant, IntegerConstant, Varying };

struct Manufactured {
    Series u;
    Series f;
    std::map<std::pair<int, int>, BoundaryFunction> psis; // (order offset, log power)
    int s_int_part = 0;
    BoundaryFunction s; // the positive root used
};

/**
 * Example-style manufactured solutions: u = sum psi_{i,j} t^{s+i} (log t)^j
 * with the psi blocks chosen successively so f = L u has vanishing order
 * s + m + 1. Requires P(s) = 0 and P(s+1), ..., P(s+m) nonvanishing on the
 * grid.
 */
Manufactured construct_example(const OperatorSpec& op, ExampleMode mode, const BoundaryFunction& s,
                               const BoundaryFunction& psi0, int m);

/**
 * Gilbarg-Hoermander style extension: w(x,t) = sum_{i >= vanish_below}
 * values_i(x) t^i / i! * eta(t/r), so d_t^i w(.,0) = values_i.
 */
class TaylorExtension {
public:
    TaylorExtension() = default;
    TaylorExtension(std::vector<BoundaryFunction> derivs_at_0, int vanish_below, double r);

    double eval(double x, double t) const;
    double dt(double x, double t, int order) const; // analytic eta jets, no differencing
    bool trivially_zero() const { return coeffs_.empty(); }
    double r() const { return r_; }

private:
    std::vector<BoundaryFunction> coeffs_; // values_i / i!
    double r_ = 1.0;
};

TaylorExtension extend_taylor(const std::vector<BoundaryFunction>& derivs_at_0, int vanish_below,
                              double r);

struct DecompositionVW {
    TaylorExtension v;
    std::vector<TaylorExtension> w; // w^{(0)} .. w^{(k - int_part)}
    BoundaryFunction gamma;
    double reconstruct(double x, double t) const;
};

DecompositionVW decompose_vw(const Expansion& e, double r);

struct BorelEntry {
    int i = 0;
    int j = 0;
    double lambda = 1.0;
    double norm_est = 0.0; // estimated C^{i-1} norm of c_{i,j} eta(lambda t) t^i
    double bound = 0.0;    // the 2^{-i} target it was driven under
};

struct BorelResult {
    std::vector<BorelEntry> ledger;
    int int_part = 0;
    double r = 1.0;
    std::map<std::pair<int, int>, std::pair<double, BoundaryFunction>> terms; // (i,j) -> (lambda, c)

    double w_j(int j, double x, double t) const; // partial sum of w^{(j)}
    double tail_norm(int k) const;               // sum of ledger entries with j > k - int_part
};

/**
 * Cutoff summation: for each admissible (i,j) the scale lambda_{i,j} is
 * doubled from 1 until the estimated C^{i-1} norm of c_{i,j} eta(lambda t) t^i
 * on G_{r_{i,j}} drops below 2^{-i}.
 */
BorelResult borel_sum(const std::function<BoundaryFunction(int, int)>& coeff_fn, int int_part,
                      int i_max, double r);

} // namespace indicial
