#include "indicial/characteristic.hpp"

#include <algorithm>
#include <cmath>

#include "indicial/errors.hpp"

namespace indicial {

namespace {

// Roots of A mu^2 + b mu + C with A > 0, C < 0 (so two real roots of
// opposite signs), via the cancellation-free quadratic formula.
std::pair<double, double> stable_roots(double A, double b, double C) {
    const double disc = std::sqrt(b * b - 4.0 * A * C);
    const double qf = -0.5 * (b + (b >= 0.0 ? disc : -disc));
    double r1 = qf / A;
    double r2 = C / qf;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2}; // (negative, positive)
}

} // namespace

CharPolyCoeffs char_poly(const OperatorSpec& op, double x) {
    CharPolyCoeffs p;
    p.A = op.att.eval(x, 0.0);
    p.B = op.bt.eval(x, 0.0);
    p.C = op.c.eval(x, 0.0);
    if (p.A <= 0.0)
        throw ellipticity_error("char_poly: a_nn(x,0) <= 0 at x=" + std::to_string(x));
    if (p.C >= 0.0) throw sign_error("char_poly: c(x,0) >= 0 at x=" + std::to_string(x));
    return p;
}

double CharacteristicData::gamma_min() const {
    double m = 1.0;
    for (double x : grid) m = std::min(m, gamma.eval(x));
    return m;
}

double CharacteristicData::gamma_max() const {
    double m = 0.0;
    for (double x : grid) m = std::max(m, gamma.eval(x));
    return m;
}

CharacteristicData indicial_roots(const OperatorSpec& op, const std::vector<double>& grid) {
    constexpr double kFitTarget = 1e-10;
    constexpr double kFitRaise = 1e-8;
    constexpr double kGammaBand = 1e-3;
    constexpr double kResonantTol = 1e-9;

    std::vector<double> lo(grid.size()), up(grid.size());
    for (size_t k = 0; k < grid.size(); ++k) {
        const auto pc = char_poly(op, grid[k]);
        auto [m_lo, m_up] = stable_roots(pc.A, pc.B - pc.A, pc.C);
        if (!(m_lo < 0.0 && 0.0 < m_up))
            throw sign_error("indicial roots do not straddle zero at x=" +
                             std::to_string(grid[k]));
        lo[k] = m_lo;
        up[k] = m_up;
    }

    // Integer part must be constant across the grid.
    const int ip0 = static_cast<int>(std::floor(up[0]));
    bool resonant = true;
    for (double v : up) {
        if (std::abs(v - std::round(v)) > kResonantTol || std::abs(v - up[0]) > kResonantTol)
            resonant = false;
    }
    if (!resonant) {
        for (double v : up) {
            if (static_cast<int>(std::floor(v)) != ip0)
                throw varying_integer_part_error(
                    "[m_upper] varies across the validation grid (m_upper crosses an integer)");
            const double g = v - std::floor(v);
            if (g < kGammaBand || g > 1.0 - kGammaBand)
                throw near_integer_exponent_error(
                    "gamma = " + std::to_string(g) + " too close to an integer");
        }
    }

    // Polynomial surrogates of the roots. Per design, the fit degree is
    // capped at the t=0 coefficient degree plus two; beyond that the
    // operator is rejected rather than degrading downstream exactness.
    int coeff_deg = std::max({op.att.coeff(0).degree(), op.bt.coeff(0).degree(),
                              op.c.coeff(0).degree(), 0});
    const int cap = coeff_deg + 2;
    const int n = static_cast<int>(grid.size());

    auto certify = [&](const BoundaryFunction& fit, bool upper) {
        auto fine = chebyshev_nodes(4 * n);
        double err = 0.0;
        for (double x : fine) {
            const auto pc = char_poly(op, x);
            auto [m_lo, m_up] = stable_roots(pc.A, pc.B - pc.A, pc.C);
            err = std::max(err, std::abs(fit.eval(x) - (upper ? m_up : m_lo)));
        }
        return err;
    };

    CharacteristicData cd;
    cd.grid = grid;
    double best_up = 1e300, best_lo = 1e300;
    for (int deg = 0; deg <= cap; ++deg) {
        auto fit_up = BoundaryFunction::from_node_values(up, deg);
        auto fit_lo = BoundaryFunction::from_node_values(lo, deg);
        const double e_up = certify(fit_up, true);
        const double e_lo = certify(fit_lo, false);
        if (e_up < best_up) {
            cd.m_upper = fit_up;
            best_up = e_up;
        }
        if (e_lo < best_lo) {
            cd.m_lower = fit_lo;
            best_lo = e_lo;
        }
        if (best_up <= kFitTarget && best_lo <= kFitTarget) break;
    }
    cd.fit_error_upper = best_up;
    cd.fit_error_lower = best_lo;
    if (best_up > kFitRaise || best_lo > kFitRaise)
        throw fit_error("root fit error exceeds 1e-8 at degree cap " + std::to_string(cap) +
                        " (upper " + std::to_string(best_up) + ", lower " +
                        std::to_string(best_lo) + ")");

    cd.resonant = resonant;
    if (resonant) {
        cd.int_part = static_cast<int>(std::round(up[0]));
        cd.m_upper = BoundaryFunction::constant(static_cast<double>(cd.int_part));
        cd.gamma = BoundaryFunction{};
    } else {
        cd.int_part = ip0;
        cd.gamma = cd.m_upper - BoundaryFunction::constant(static_cast<double>(ip0));
    }

    // P(root) = 0 to 1e-10 at every validation node, on the stored fits.
    for (double x : grid) {
        const auto pc = char_poly(op, x);
        const double ru = pc.eval(cd.m_upper.eval(x));
        const double rl = pc.eval(cd.m_lower.eval(x));
        const double scale = std::max({1.0, std::abs(pc.A), std::abs(pc.C)});
        if (std::abs(ru) > 1e-10 * scale || std::abs(rl) > 1e-10 * scale)
            throw fit_error("P(root) residual above 1e-10 at x=" + std::to_string(x));
    }
    return cd;
}

std::pair<BoundaryFunction, BoundaryFunction> p_q_from_roots(const CharacteristicData& cd) {
    BoundaryFunction p = BoundaryFunction::constant(1.0) - (cd.m_lower + cd.m_upper);
    BoundaryFunction q = cd.m_lower * cd.m_upper;
    return {std::move(p), std::move(q)};
}

} // namespace indicial
