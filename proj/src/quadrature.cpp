#include "indicial/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "indicial/errors.hpp"

namespace indicial {

namespace {

constexpr int kN = 32;

struct GLRule {
    std::array<double, kN> x{};
    std::array<double, kN> w{};
};

// Nodes and weights of the 32-point rule on [-1,1] by Newton iteration on
// the Legendre recurrence.
GLRule build_rule() {
    GLRule r;
    const int m = (kN + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (kN + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < kN; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = kN * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[kN - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[kN - 1 - i] = r.w[i];
    }
    return r;
}

const GLRule& rule() {
    static const GLRule r = build_rule();
    return r;
}

double panel(const std::function<double(double)>& f, double a, double b) {
    const auto& r = rule();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kN; ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return s * half;
}

} // namespace

double adaptive_gl(const std::function<double(double)>& f, double a, double b, double rel_tol,
                   double abs_floor, int max_panels) {
    if (a == b) return 0.0;
    std::vector<std::pair<double, double>> stack{{a, b}};
    double total = 0.0;
    double settled = 0.0; // magnitude of accepted contributions, for the relative test
    int used = 0;
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        if (++used > max_panels)
            throw quadrature_error("adaptive_gl: panel budget exhausted (non-integrable or "
                                   "pathological integrand)");
        const double whole = panel(f, lo, hi);
        const double mid = 0.5 * (lo + hi);
        const double left = panel(f, lo, mid);
        const double right = panel(f, mid, hi);
        const double err = std::abs(left + right - whole);
        const double scale = std::max({std::abs(total) + std::abs(left + right), settled, abs_floor});
        if (err <= rel_tol * scale || (hi - lo) < 1e-15 * (std::abs(b - a))) {
            total += left + right;
            settled += std::abs(left) + std::abs(right);
        } else {
            stack.push_back({lo, mid});
            stack.push_back({mid, hi});
        }
    }
    return total;
}

double adaptive_gl_power01(const std::function<double(double)>& f, double beta_hint,
                           double rel_tol) {
    int k = 1;
    if (beta_hint < 1.0) {
        const double denom = std::max(1.0 + beta_hint, 1.0 / 64.0);
        k = std::min(64, std::max(1, static_cast<int>(std::ceil(2.0 / denom))));
    }
    if (k == 1) return adaptive_gl(f, 0.0, 1.0, rel_tol);
    return adaptive_gl(
        [&f, k](double sigma) {
            if (sigma <= 0.0) return 0.0;
            const double rho = std::pow(sigma, k);
            return f(rho) * k * std::pow(sigma, k - 1);
        },
        0.0, 1.0, rel_tol);
}

} // namespace indicial
