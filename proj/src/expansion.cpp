#include "indicial/expansion.hpp"

#include <cmath>

#include "indicial/characteristic.hpp"
#include "indicial/errors.hpp"
#include "indicial/quadrature.hpp"

namespace indicial {

Series Expansion::to_series() const {
    Series s(gamma);
    for (int i = 0; i < static_cast<int>(c_int.size()); ++i) s.add_term(i, 0, 0, c_int[i]);
    for (const auto& [ij, c] : c_log) s.add_term(ij.first, 1, ij.second, c);
    return s;
}

Expansion Expansion::truncated(int kk) const {
    Expansion e = *this;
    e.k = kk;
    if (static_cast<int>(e.c_int.size()) > kk + 1) e.c_int.resize(kk + 1);
    for (auto it = e.c_log.begin(); it != e.c_log.end();)
        it = it->first.first > kk ? e.c_log.erase(it) : std::next(it);
    return e;
}

double Expansion::evaluate(double x, double t) const { return to_series().evaluate(x, t); }

double Expansion::max_log_coeff_norm(int j_min) const {
    double m = 0.0;
    for (const auto& [ij, c] : c_log)
        if (ij.second >= j_min) m = std::max(m, c.sup_norm());
    return m;
}

nlohmann::json Expansion::to_json() const {
    nlohmann::json j;
    j["basis"] = "chebyshev";
    j["k"] = k;
    j["int_part"] = int_part;
    j["gamma"] = gamma.cheb();
    j["small_index_mode"] = small_index_mode;
    j["block_residual"] = block_residual;
    j["data_fit_error"] = data_fit_error;
    j["c_int"] = nlohmann::json::array();
    for (const auto& c : c_int) j["c_int"].push_back(c.cheb());
    j["c_log"] = nlohmann::json::array();
    for (const auto& [ij, c] : c_log)
        j["c_log"].push_back({{"i", ij.first}, {"j", ij.second}, {"coeff", c.cheb()}});
    return j;
}

namespace {

// Max over the validation grid of |sum_j rhs_j(x) (log-power j column)|
// mismatch when the solved block is substituted back through M.
double block_roundtrip_residual(const ModelODE& ode, int i, int g,
                                const std::vector<BoundaryFunction>& rhs,
                                const std::vector<Term>& solved) {
    BoundaryFunction mu = BoundaryFunction::constant(static_cast<double>(i));
    if (g) mu += ode.gamma;
    const BoundaryFunction pt = ode.p_tilde(mu);
    const BoundaryFunction ptp = ode.p_tilde_prime(mu);
    const int J = static_cast<int>(rhs.size()) - 1;
    std::vector<BoundaryFunction> c(J + 3);
    for (const auto& term : solved)
        if (term.e.j <= J) c[term.e.j] = term.coeff;
    double worst = 0.0;
    for (int h = 0; h <= J; ++h) {
        BoundaryFunction back = pt * c[h] + ptp * c[h + 1] * static_cast<double>(h + 1) +
                                c[h + 2] * static_cast<double>((h + 2) * (h + 1));
        back -= rhs[h];
        for (double x : ode.grid) worst = std::max(worst, std::abs(back.eval(x)));
    }
    return worst;
}

// Chebyshev fit of per-node bracket values with an error estimate from the
// discarded coefficient tail.
std::pair<BoundaryFunction, double> fit_node_values(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    BoundaryFunction full = BoundaryFunction::from_node_values(values, n - 1);
    double scale = std::max(1.0, full.coeff_bound());
    // choose the smallest degree whose discarded tail is negligible
    const auto& c = full.cheb();
    int deg = static_cast<int>(c.size()) - 1;
    double tail = 0.0;
    while (deg > 0 && tail + std::abs(c[deg]) < 2e-13 * scale) {
        tail += std::abs(c[deg]);
        --deg;
    }
    std::vector<double> kept(c.begin(), c.begin() + deg + 1);
    return {BoundaryFunction{std::move(kept)}, tail};
}

} // namespace

Expansion expand(const ModelODE& ode, const OperatorSpec& op, const Series& f,
                 const BoundaryFunction& data_at_r, int k, const Series* probe,
                 const ExpandOptions& opts) {
    if (ode.resonant)
        throw resonance_error(
            "expand: m_upper is a constant integer; the resonant lattice is exercised through "
            "construct_example and solve_term, not the non-integer recursion");
    const int mbar = ode.int_part;
    if (k < mbar) throw config_error("expand: k must be at least [m_upper]");
    const int taylor_order = opts.taylor_order > 0 ? opts.taylor_order : std::max(k + 4, 24);

    // With x-independent normal-block coefficients, forcing, and data the
    // solution is x-independent and the tangential couplings vanish on it.
    auto bf_x_const = [](const BoundaryFunction& g) { return g.degree() <= 0; };
    auto bp_x_const = [&](const BivariatePoly& b) {
        for (int kk = 0; kk <= b.t_degree(); ++kk)
            if (!bf_x_const(b.coeff(kk))) return false;
        return true;
    };
    bool x_independent = bp_x_const(op.att) && bp_x_const(op.bt) && bp_x_const(op.c) &&
                         bf_x_const(data_at_r) && bf_x_const(ode.gamma);
    for (const auto& [fe, fc] : f.terms())
        x_independent = x_independent && bf_x_const(fc);

    const bool coupled = op.normal_block_t_dependent() ||
                         (op.has_tangential_coupling() && !x_independent);
    if (coupled && probe == nullptr)
        throw missing_probe_error(
            "expand: the operator feeds u back into F; supply the solution series probe for "
            "the c_{[m],0} quadrature bracket");

    Expansion e;
    e.k = k;
    e.int_part = mbar;
    e.gamma = ode.gamma;
    e.small_index_mode = opts.small_index_mode;
    e.c_int.resize(k + 1);

    Series u_partial(ode.gamma);
    std::vector<BoundaryFunction> a_int(k + 1);

    for (int order = 0; order <= k; ++order) {
        const Series F = assemble_F(op, ode, f, u_partial, taylor_order);

        // integer-power Taylor coefficient a_order of F
        a_int[order] = F.coeff(order, 0, 0);
        {
            auto solved = solve_block(ode, order, 0, {a_int[order]});
            const double res = block_roundtrip_residual(ode, order, 0, {a_int[order]}, solved);
            e.block_residual = std::max(e.block_residual, res);
            if (res > opts.budget_tol * std::max(1.0, a_int[order].coeff_bound()))
                throw smoothness_budget_error(
                    "expand: order " + std::to_string(order) +
                    " integer block round-trip residual " + std::to_string(res) +
                    " exceeds the accuracy budget");
            for (const auto& term : solved) {
                e.c_int[order] = term.coeff;
                u_partial.add_term(order, 0, 0, term.coeff);
            }
        }

        if (order == mbar) {
            // c_{[m],0} from the data bracket at t = r
            const Series* full = coupled ? probe : nullptr;
            const Series F_true =
                assemble_F(op, ode, f, full ? *full : Series(ode.gamma), taylor_order);
            for (int i = 0; i <= mbar; ++i) {
                BoundaryFunction diff = F_true.coeff(i, 0, 0) - a_int[i];
                if (diff.coeff_bound() > 1e-8 * std::max(1.0, a_int[i].coeff_bound()))
                    throw fit_error("expand: probe-based F disagrees with the recursion at "
                                    "order " + std::to_string(i));
            }
            const Series S = F_true.without_g0_upto(mbar);

            // bracket values on Chebyshev nodes so the coefficient fit is a
            // discrete-orthogonality truncation
            const auto nodes = chebyshev_nodes(64);
            std::vector<double> vals(nodes.size());
            for (size_t n = 0; n < nodes.size(); ++n) {
                const double x = nodes[n];
                const double ml = ode.m_lower.eval(x);
                const double mu = ode.m_upper.eval(x);
                const double r = ode.r;
                auto S_at = [&](double t) { return S.empty() ? 0.0 : S.evaluate(x, t); };
                double s_min_exp = 1e300; // lowest exponent of S at this node
                for (const auto& [se, sc] : S.terms())
                    s_min_exp = std::min(s_min_exp, se.i + se.g * ode.gamma.eval(x));
                const double I_low = std::pow(r, -ml) * adaptive_gl_power01(
                    [&](double rho) {
                        return rho <= 0.0 ? 0.0 : std::pow(rho, -1.0 - ml) * S_at(r * rho);
                    }, -1.0 - ml + std::min(s_min_exp, 4.0), 1e-13);
                const double I_up = std::pow(r, -mu) * adaptive_gl_power01(
                    [&](double rho) {
                        return rho <= 0.0 ? 0.0 : std::pow(rho, -1.0 - mu) * S_at(r * rho);
                    }, -1.0 - mu + std::min(s_min_exp, 4.0), 1e-13);
                double val = data_at_r.eval(x) * std::pow(r, -mu);
                for (int i = 0; i <= mbar; ++i) {
                    const double ai = a_int[i].eval(x);
                    val -= ai * std::pow(r, i - mu) / ((i - ml) * (i - mu));
                }
                val += std::pow(r, ml - mu) / (mu - ml) * I_low;
                val -= I_up / (mu - ml);
                vals[n] = val;
            }
            auto [c_m0, fit_err] = fit_node_values(vals);
            e.data_fit_error = fit_err;
            if (!c_m0.is_zero(Series::kPruneTol)) {
                e.c_log[{mbar, 0}] = c_m0;
                u_partial.add_term(mbar, 1, 0, c_m0);
            }
        } else if (order > mbar) {
            // generalized-power blocks a_{order, j}, j = 0..order-mbar
            const int jmax = order - mbar;
            for (const auto& [exp, c] : F.terms())
                if (exp.g == 1 && exp.i == order && exp.j > jmax)
                    throw smoothness_budget_error(
                        "expand: F block outside the log triangle at order " +
                        std::to_string(order));
            std::vector<BoundaryFunction> rhs(jmax + 1);
            bool any = false;
            for (int j = 0; j <= jmax; ++j) {
                rhs[j] = F.coeff(order, 1, j);
                any = any || !rhs[j].is_zero(Series::kPruneTol);
            }
            if (any) {
                auto solved = solve_block(ode, order, 1, rhs);
                const double res = block_roundtrip_residual(ode, order, 1, rhs, solved);
                e.block_residual = std::max(e.block_residual, res);
                double rhs_scale = 1.0;
                for (const auto& b : rhs) rhs_scale = std::max(rhs_scale, b.coeff_bound());
                if (res > opts.budget_tol * rhs_scale)
                    throw smoothness_budget_error(
                        "expand: order " + std::to_string(order) +
                        " log-block round-trip residual " + std::to_string(res) +
                        " exceeds the accuracy budget");
                for (const auto& term : solved) {
                    e.c_log[{order, term.e.j}] = term.coeff;
                    u_partial.add_term(order, 1, term.e.j, term.coeff);
                }
            }
        }
    }
    return e;
}

Manufactured construct_example(const OperatorSpec& op, ExampleMode mode, const BoundaryFunction& s,
                               const BoundaryFunction& psi0, int m) {
    const auto grid = chebyshev_nodes(64);

    // characteristic polynomial at mu = s + o, as exact polynomial arithmetic
    const BoundaryFunction att0 = op.att.coeff(0);
    const BoundaryFunction bt0 = op.bt.coeff(0);
    const BoundaryFunction c0 = op.c.coeff(0);
    auto char_at = [&](const BoundaryFunction& mu) {
        return att0 * mu * (mu - BoundaryFunction::constant(1.0)) + bt0 * mu + c0;
    };

    double scale = std::max({1.0, att0.coeff_bound(), c0.coeff_bound()});
    {
        const BoundaryFunction ps = char_at(s);
        for (double x : grid)
            if (std::abs(ps.eval(x)) > 1e-8 * scale)
                throw characteristic_collision_error(
                    "construct_example: s is not a characteristic root of the operator");
    }
    for (int o = 1; o <= m; ++o) {
        const BoundaryFunction po = char_at(s + BoundaryFunction::constant(o));
        for (double x : grid)
            if (std::abs(po.eval(x)) < 1e-8 * scale)
                throw characteristic_collision_error(
                    "construct_example: P(s+" + std::to_string(o) + ") vanishes at a node");
    }

    Manufactured out;
    out.s = s;
    const double s0 = s.eval(0.0);
    if (mode == ExampleMode::IntegerConstant) {
        if (std::abs(s0 - std::round(s0)) > 1e-12 || s.degree() > 0 || s0 < 1.0)
            throw config_error("integer mode requires a constant positive integer s");
        out.s_int_part = static_cast<int>(std::round(s0));
        out.u = Series(BoundaryFunction{});
        out.u.add_term(out.s_int_part, 0, 1, psi0);
        out.psis[{0, 0}] = psi0;
    } else {
        const int i0 = static_cast<int>(std::floor(s0));
        out.s_int_part = i0;
        BoundaryFunction gam = s - BoundaryFunction::constant(static_cast<double>(i0));
        for (double x : grid) {
            const double g = gam.eval(x);
            if (g < 1e-3 || g > 1.0 - 1e-3)
                throw near_integer_exponent_error("construct_example: s too close to an integer");
        }
        if (mode == ExampleMode::NonIntegerConstant && gam.degree() > 0)
            throw config_error("constant mode requires constant s");
        out.u = Series(gam);
        out.u.add_term(i0, 1, 0, psi0);
        out.psis[{0, 0}] = psi0;
    }

    out.f = op.apply(out.u);
    const int i0 = out.s_int_part;
    for (int o = 1; o <= m; ++o) {
        const BoundaryFunction po = char_at(s + BoundaryFunction::constant(o));
        if (mode == ExampleMode::IntegerConstant) {
            const BoundaryFunction b = out.f.coeff(i0 + o, 0, 1);
            if (b.is_zero(Series::kPruneTol)) continue;
            BoundaryFunction psi = -quotient(b, po);
            out.psis[{o, 0}] = psi;
            out.u.add_term(i0 + o, 0, 1, psi);
            out.f = op.apply(out.u);
        } else {
            for (int j = o; j >= 0; --j) {
                const BoundaryFunction b = out.f.coeff(i0 + o, 1, j);
                if (b.is_zero(Series::kPruneTol)) continue;
                BoundaryFunction psi = -quotient(b, po);
                out.psis[{o, j}] = psi;
                out.u.add_term(i0 + o, 1, j, psi);
                out.f = op.apply(out.u);
            }
        }
    }
    return out;
}

TaylorExtension::TaylorExtension(std::vector<BoundaryFunction> derivs_at_0, int vanish_below,
                                 double r)
    : r_(r) {
    coeffs_.resize(derivs_at_0.size());
    double fact = 1.0;
    for (size_t i = 0; i < derivs_at_0.size(); ++i) {
        if (i > 0) fact *= static_cast<double>(i);
        if (static_cast<int>(i) >= vanish_below) coeffs_[i] = derivs_at_0[i] * (1.0 / fact);
    }
    while (!coeffs_.empty() && coeffs_.back().is_zero(1e-300)) coeffs_.pop_back();
}

double TaylorExtension::eval(double x, double t) const {
    double poly = 0.0;
    for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i)
        poly = poly * t + coeffs_[i].eval(x);
    return poly * eta_scaled(t, r_);
}

double TaylorExtension::dt(double x, double t, int order) const {
    if (coeffs_.empty()) return 0.0;
    // Leibniz over (sum c_i t^i) * eta(t/r) with analytic eta derivatives
    auto eta = eta_jet(t / r_, order);
    double rp = 1.0;
    for (int p = 0; p <= order; ++p) {
        eta[p] /= rp;
        rp *= r_;
    }
    double out = 0.0;
    double binom = 1.0;
    for (int p = 0; p <= order; ++p) {
        if (p > 0) binom = binom * (order - p + 1) / p;
        const int d = order - p; // derivatives on the polynomial factor
        double poly = 0.0;
        for (int i = static_cast<int>(coeffs_.size()) - 1; i >= d; --i) {
            double fall = 1.0;
            for (int q = 0; q < d; ++q) fall *= (i - q);
            poly += coeffs_[i].eval(x) * fall * std::pow(t, i - d);
        }
        out += binom * poly * eta[p];
    }
    return out;
}

TaylorExtension extend_taylor(const std::vector<BoundaryFunction>& derivs_at_0, int vanish_below,
                              double r) {
    return TaylorExtension(derivs_at_0, vanish_below, r);
}

DecompositionVW decompose_vw(const Expansion& e, double r) {
    DecompositionVW d;
    d.gamma = e.gamma;
    std::vector<BoundaryFunction> v_derivs(e.c_int.size());
    double fact = 1.0;
    for (size_t i = 0; i < e.c_int.size(); ++i) {
        if (i > 0) fact *= static_cast<double>(i);
        v_derivs[i] = e.c_int[i] * fact;
    }
    d.v = extend_taylor(v_derivs, 0, r);

    const int jmax = e.k - e.int_part;
    for (int j = 0; j <= jmax; ++j) {
        std::vector<BoundaryFunction> w_derivs(e.k + 1);
        double f2 = 1.0;
        for (int i = 0; i <= e.k; ++i) {
            if (i > 0) f2 *= static_cast<double>(i);
            auto it = e.c_log.find({i, j});
            if (it != e.c_log.end() && i >= e.int_part + j) w_derivs[i] = it->second * f2;
        }
        d.w.push_back(extend_taylor(w_derivs, e.int_part + j, r));
    }
    return d;
}

double DecompositionVW::reconstruct(double x, double t) const {
    double out = v.eval(x, t);
    if (t > 0.0) {
        const double tg = std::pow(t, gamma.eval(x));
        const double lt = std::log(t);
        double lp = 1.0;
        for (const auto& wj : w) {
            out += wj.eval(x, t) * tg * lp;
            lp *= lt;
        }
    }
    return out;
}

namespace {

double falling(int i, int n) {
    double f = 1.0;
    for (int q = 0; q < n; ++q) f *= (i - q);
    return f;
}

// Estimated C^m norm of c(x) eta(lambda t) t^i on [-1,1] x [0, r_dom],
// sampled on the fixed 512-point grid over the domain. Sampled sup
// estimates are lower bounds; orders above 8 use the triangle-inequality
// bound of the Leibniz sum instead of its signed value.
double cutoff_term_norm(const BoundaryFunction& c, int i, double lambda, double r_dom, int m) {
    const double t_hi = r_dom;
    constexpr int kT = 512;
    constexpr int kSharpOrder = 8;

    std::vector<double> tmax(m + 1, 0.0);
    for (int n = 0; n <= kT; ++n) {
        const double t = t_hi * n / kT;
        const auto jet = eta_scaled_jet(t, lambda, m);
        for (int d = 0; d <= m; ++d) {
            double signed_sum = 0.0, abs_sum = 0.0;
            double binom = 1.0;
            for (int p = 0; p <= d; ++p) {
                if (p > 0) binom = binom * (d - p + 1) / p;
                const int dpoly = d - p;
                if (dpoly > i) continue;
                const double term = binom * jet[p] * falling(i, dpoly) * std::pow(t, i - dpoly);
                signed_sum += term;
                abs_sum += std::abs(term);
            }
            // sharp sampled value at low order, triangle-inequality bound beyond
            const double est = d <= kSharpOrder ? std::abs(signed_sum) : abs_sum;
            tmax[d] = std::max(tmax[d], est);
        }
    }
    std::vector<double> xmax(m + 1, 0.0);
    BoundaryFunction dc = c;
    for (int e = 0; e <= m; ++e) {
        xmax[e] = dc.sup_norm(129);
        dc = dc.derivative();
    }
    double norm = 0.0;
    for (int d = 0; d <= m; ++d)
        for (int e = 0; d + e <= m; ++e) norm = std::max(norm, tmax[d] * xmax[e]);
    return norm;
}

} // namespace

double BorelResult::w_j(int j, double x, double t) const {
    double out = 0.0;
    for (const auto& [ij, lc] : terms) {
        if (ij.second != j) continue;
        out += lc.second.eval(x) * eta_bump(lc.first * t) * std::pow(t, ij.first);
    }
    return out;
}

double BorelResult::tail_norm(int k) const {
    double s = 0.0;
    for (const auto& en : ledger)
        if (en.j > k - int_part) s += en.norm_est;
    return s;
}

BorelResult borel_sum(const std::function<BoundaryFunction(int, int)>& coeff_fn, int int_part,
                      int i_max, double r) {
    BorelResult res;
    res.int_part = int_part;
    res.r = r;
    for (int j = 0; int_part + j <= i_max; ++j) {
        for (int i = int_part + j; i <= i_max; ++i) {
            const BoundaryFunction c = coeff_fn(i, j);
            const double r_ij = (1.0 - std::pow(2.0, -(i + j + 1))) * r;
            const double bound = std::pow(2.0, -i);
            double lambda = 1.0;
            double est = 0.0;
            if (c.is_zero(Series::kPruneTol)) {
                est = 0.0;
            } else {
                while (true) {
                    est = cutoff_term_norm(c, i, lambda, r_ij, std::max(0, i - 1));
                    if (est <= bound) break;
                    lambda *= 2.0;
                    if (lambda > std::pow(2.0, 60))
                        throw non_convergent_term_error(
                            "borel_sum: lambda exceeded 2^60 at (i,j)=(" + std::to_string(i) +
                            "," + std::to_string(j) + ")");
                }
            }
            res.ledger.push_back({i, j, lambda, est, bound});
            res.terms[{i, j}] = {lambda, c};
        }
    }
    return res;
}

} // namespace indicial
