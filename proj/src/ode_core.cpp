#include "indicial/ode_core.hpp"

#include <cmath>

#include "indicial/errors.hpp"
#include "indicial/quadrature.hpp"

namespace indicial {

namespace {

constexpr double kResonanceThreshold = 1e-8;

double grid_min_abs(const BoundaryFunction& f, const std::vector<double>& grid) {
    double m = 1e300;
    for (double x : grid) m = std::min(m, std::abs(f.eval(x)));
    return m;
}

} // namespace

BoundaryFunction ModelODE::p_tilde(const BoundaryFunction& mu) const {
    return (mu - m_lower) * (mu - m_upper);
}

BoundaryFunction ModelODE::p_tilde_prime(const BoundaryFunction& mu) const {
    return mu * 2.0 - (m_lower + m_upper);
}

Series ModelODE::apply(const Series& u) const {
    const Series ut = series_diff_t(u);
    Series out = series_diff_t(ut).shifted_t(2);
    out = series_add(out, ut.shifted_t(1).scaled(p));
    out = series_add(out, u.scaled(q));
    return out;
}

ModelODE model_ode_from(const CharacteristicData& cd, double r) {
    ModelODE ode;
    auto [p, q] = p_q_from_roots(cd);
    ode.p = std::move(p);
    ode.q = std::move(q);
    ode.m_lower = cd.m_lower;
    ode.m_upper = cd.m_upper;
    ode.gamma = cd.gamma;
    ode.int_part = cd.int_part;
    ode.resonant = cd.resonant;
    ode.r = r;
    ode.grid = cd.grid.empty() ? chebyshev_nodes(64) : cd.grid;

    // (mu - m_lower)(mu - m_upper) == mu^2 + (p-1) mu + q pointwise.
    for (double x : ode.grid) {
        const double ml = ode.m_lower.eval(x), mu = ode.m_upper.eval(x);
        const double pv = ode.p.eval(x), qv = ode.q.eval(x);
        if (std::abs(pv - (1.0 - ml - mu)) > 1e-12 || std::abs(qv - ml * mu) > 1e-12)
            throw fit_error("ModelODE: p,q inconsistent with the characteristic roots");
    }
    return ode;
}

Series assemble_F(const OperatorSpec& op, const ModelODE& ode, const Series& f, const Series& u,
                  int taylor_order) {
    const BivariatePoly inv_ann = op.att.taylor_inverse(taylor_order, op.r);

    Series inner = f;
    if (!u.empty()) {
        const Series ux = series_diff_x(u);
        inner = series_add(inner, mul_bivariate(op.axx, series_diff_x(ux)).shifted_t(2).scaled(-1.0));
        inner = series_add(inner,
                           mul_bivariate(op.axt, series_diff_x(series_diff_t(u))).shifted_t(2).scaled(-2.0));
        inner = series_add(inner, mul_bivariate(op.bx, ux).shifted_t(1).scaled(-1.0));
    }
    Series F = mul_bivariate(inv_ann, inner);

    if (!u.empty()) {
        // (b_n/a_nn - p) and (c/a_nn - q) vanish at t = 0 by the definition
        // of p and q; their residual t^0 coefficients are rounding noise and
        // are zeroed explicitly (raising if they are not actually small).
        auto strip_order0 = [&](BivariatePoly b, const BoundaryFunction& limit, const char* name) {
            BivariatePoly d = b - BivariatePoly::from_bf(limit);
            const BoundaryFunction res0 = d.coeff(0);
            if (res0.coeff_bound() > 1e-9 * std::max(1.0, limit.coeff_bound()))
                throw fit_error(std::string("assemble_F: ") + name +
                                " does not match the operator trace at t=0");
            std::vector<BoundaryFunction> coeffs;
            for (int k = 1; k <= d.t_degree(); ++k) coeffs.push_back(d.coeff(k));
            return BivariatePoly{std::move(coeffs)}; // degree shifted down by one
        };
        const BivariatePoly bn_over = op.bt * inv_ann;
        const BivariatePoly c_over = op.c * inv_ann;
        const BivariatePoly db = strip_order0(bn_over, ode.p, "b_n/a_nn - p");
        const BivariatePoly dc = strip_order0(c_over, ode.q, "c/a_nn - q");
        // -(b_n/a_nn - p) t u_t = -(db * t) t u_t with db starting at t^0 of the shifted poly
        F = series_add(F, mul_bivariate(db, series_diff_t(u)).shifted_t(2).scaled(-1.0));
        F = series_add(F, mul_bivariate(dc, u).shifted_t(1).scaled(-1.0));
    }
    return F;
}

std::vector<Term> solve_block(const ModelODE& ode, int i, int g,
                              const std::vector<BoundaryFunction>& rhs_by_log) {
    if (rhs_by_log.empty()) return {};
    BoundaryFunction mu = BoundaryFunction::constant(static_cast<double>(i));
    if (g) mu += ode.gamma;

    const BoundaryFunction pt = ode.p_tilde(mu);
    const double pt_min = grid_min_abs(pt, ode.grid);

    if (pt_min < kResonanceThreshold) {
        const bool exact_resonance =
            ode.resonant && g == 0 && i == ode.int_part;
        if (!exact_resonance)
            throw resonance_error("solve_block: |Ptilde(mu)| < 1e-8 at some node for mu = " +
                                  std::to_string(i) + (g ? " + gamma" : "") +
                                  " declared non-resonant");
        if (rhs_by_log.size() > 1)
            throw unsupported_resonance_error(
                "resonant block with log power > 0 is not supported");
        // M[t^m log t] = Pt'(m) t^m at the resonant exponent
        const BoundaryFunction ptp = ode.p_tilde_prime(mu); // = m_upper - m_lower > 0
        return {Term{TermExponent{i, 0, 1}, quotient(rhs_by_log[0], ptp)}};
    }

    const BoundaryFunction ptp = ode.p_tilde_prime(mu);
    const int J = static_cast<int>(rhs_by_log.size()) - 1;
    std::vector<BoundaryFunction> c(J + 1);
    for (int h = J; h >= 0; --h) {
        BoundaryFunction rhs = rhs_by_log[h];
        if (h + 1 <= J) rhs -= ptp * c[h + 1] * static_cast<double>(h + 1);
        if (h + 2 <= J) rhs -= c[h + 2] * static_cast<double>((h + 2) * (h + 1));
        c[h] = quotient(rhs, pt);
    }
    std::vector<Term> out;
    for (int h = 0; h <= J; ++h)
        if (!c[h].is_zero(Series::kPruneTol)) out.push_back(Term{TermExponent{i, g, h}, c[h]});
    return out;
}

std::vector<Term> solve_term(const ModelODE& ode, const Term& rhs) {
    std::vector<BoundaryFunction> by_log(rhs.e.j + 1);
    by_log[rhs.e.j] = rhs.coeff;
    return solve_block(ode, rhs.e.i, rhs.e.g, by_log);
}

std::vector<double> solve_quadrature(const ModelODE& ode,
                                     const std::function<double(double, double)>& F,
                                     const BoundaryFunction& data_at_r, double x,
                                     std::span<const double> t_points) {
    const double ml = ode.m_lower.eval(x);
    const double mu = ode.m_upper.eval(x);
    const double r = ode.r;
    const double denom = mu - ml;

    // Integrability guard: F must decay faster than t^{m_upper} near 0.
    {
        double t_hi = r * 1e-3, t_lo = r * 1e-6;
        const double f_hi = std::abs(F(x, t_hi)), f_lo = std::abs(F(x, t_lo));
        if (f_hi > 1e-300 && f_lo > 1e-300) {
            const double slope = std::log(f_hi / f_lo) / std::log(t_hi / t_lo);
            if (slope <= mu + 1e-3)
                throw integrability_error(
                    "solve_quadrature: F decays like t^" + std::to_string(slope) +
                    " near 0, not integrable against s^{-1-m_upper} with m_upper = " +
                    std::to_string(mu));
        }
    }

    // I(m; 0, T) = int_0^T s^{-1-m} F ds = T^{-m} int_0^1 rho^{-1-m} F(T rho) drho,
    // endpoint power -1-m factored analytically through the substitution rule
    auto lower_integral = [&](double m, double T) {
        const double val = adaptive_gl_power01(
            [&](double rho) { return rho <= 0.0 ? 0.0 : std::pow(rho, -1.0 - m) * F(x, T * rho); },
            -1.0 - m, 1e-10);
        return std::pow(T, -m) * val;
    };
    const double I0r_ml = lower_integral(ml, r);

    std::vector<double> out;
    out.reserve(t_points.size());
    for (double t : t_points) {
        if (!(t > 0.0 && t <= r))
            throw eval_domain_error("solve_quadrature: t outside (0, r]");
        const double I0t_ml = lower_integral(ml, t);
        const double Itr_mu =
            adaptive_gl([&](double s) { return std::pow(s, -1.0 - mu) * F(x, s); }, t, r);
        const double bracket = data_at_r.eval(x) * std::pow(r, -mu) +
                               std::pow(r, ml - mu) / denom * I0r_ml;
        out.push_back(bracket * std::pow(t, mu) - std::pow(t, ml) / denom * I0t_ml -
                      std::pow(t, mu) / denom * Itr_mu);
    }
    return out;
}

namespace {

ResidualReport residual_of_series(const Series& res, double r, double t_floor) {
    ResidualReport rep;
    auto xs = chebyshev_nodes(17);
    double sumsq = 0.0;
    for (double x : xs) {
        for (int k = 0; k <= 24; ++k) {
            const double t = t_floor + (r - t_floor) * k / 24.0;
            const double v = res.evaluate(x, t);
            rep.max_abs = std::max(rep.max_abs, std::abs(v));
            sumsq += v * v;
            ++rep.samples;
        }
    }
    rep.l2 = std::sqrt(sumsq / rep.samples);
    return rep;
}

} // namespace

ResidualReport verify_residual(const OperatorSpec& op, const Series& u, const Series& f,
                               double t_floor) {
    Series res = series_add(op.apply(u), f.scaled(-1.0));
    return residual_of_series(res, op.r, t_floor);
}

ResidualReport verify_residual(const ModelODE& ode, const Series& u, const Series& f,
                               double t_floor) {
    Series res = series_add(ode.apply(u), f.scaled(-1.0));
    return residual_of_series(res, ode.r, t_floor);
}

} // namespace indicial
