#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "indicial/characteristic.hpp"
#include "indicial/series.hpp"

namespace indicial {

/**
 * The model degenerate ODE t^2 u_tt + p(x) t u_t + q(x) u = F on G_r,
 * with t^{m_lower} and t^{m_upper} as homogeneous solutions.
 */
struct ModelODE {
    BoundaryFunction p, q;
    BoundaryFunction m_lower, m_upper, gamma;
    int int_part = 0;
    bool resonant = false;
    double r = 1.0;
    std::vector<double> grid; // validation nodes

    // Reduced characteristic polynomial Ptilde(mu) = (mu-m_lower)(mu-m_upper)
    // = mu^2 + (p-1) mu + q, as a BoundaryFunction for polynomial mu(x).
    BoundaryFunction p_tilde(const BoundaryFunction& mu) const;
    BoundaryFunction p_tilde_prime(const BoundaryFunction& mu) const;

    // t^2 d_tt + p t d_t + q applied by series calculus.
    Series apply(const Series& u) const;
};

ModelODE model_ode_from(const CharacteristicData& cd, double r);

/**
 * F = (1/a_nn)(f - t^2 a_xx u_xx - 2 t^2 a_xt u_xt - t b_x u_x)
 *     - (b_n/a_nn - p) t u_t - (c/a_nn - q) u,
 * with 1/a_nn replaced by its Taylor polynomial in t through
 * t^{taylor_order} (remainder monitored inside taylor_inverse).
 */
Series assemble_F(const OperatorSpec& op, const ModelODE& ode, const Series& f, const Series& u,
                  int taylor_order);

/**
 * Solve M v = rhs for one generalized-power block. rhs_by_log[j] is the
 * coefficient of t^mu (log t)^j with mu = i + g*gamma. Non-resonant blocks
 * give the lower-triangular system produced by
 *   M[t^mu (log t)^j] = Pt(mu) t^mu (log t)^j + j Pt'(mu) t^mu (log t)^{j-1}
 *                       + j(j-1) t^mu (log t)^{j-2};
 * the resonant block (mu == m_upper constant integer, pure power rhs)
 * returns (a / Pt'(m_upper)) t^{m_upper} log t.
 */
std::vector<Term> solve_block(const ModelODE& ode, int i, int g,
                              const std::vector<BoundaryFunction>& rhs_by_log);
std::vector<Term> solve_term(const ModelODE& ode, const Term& rhs);

/**
 * Lemma-4.2 style quadrature solve at fixed x:
 * u(t) = [data r^{-mu} + r^{ml-mu}/(mu-ml) I_0r(ml)] t^{mu}
 *        - t^{ml}/(mu-ml) I_0t(ml) - t^{mu}/(mu-ml) I_tr(mu),
 * where I integrals carry kernels s^{-1-m} against F. The 0-based integrals
 * use the substitution s = t rho so the endpoint power is explicit.
 */
std::vector<double> solve_quadrature(const ModelODE& ode,
                                     const std::function<double(double, double)>& F,
                                     const BoundaryFunction& data_at_r, double x,
                                     std::span<const double> t_points);

struct ResidualReport {
    double max_abs = 0.0;
    double l2 = 0.0;
    int samples = 0;
};

// Residual of L u - f (series route) over a probe grid with t >= t_floor.
ResidualReport verify_residual(const OperatorSpec& op, const Series& u, const Series& f,
                               double t_floor = 1e-6);
ResidualReport verify_residual(const ModelODE& ode, const Series& u, const Series& f,
                               double t_floor = 1e-6);

} // namespace indicial
