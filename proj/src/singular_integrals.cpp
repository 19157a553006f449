#include "indicial/singular_integrals.hpp"

#include <algorithm>
#include <cmath>

#include "indicial/errors.hpp"
#include "indicial/quadrature.hpp"

namespace indicial {

ProbeFn ProbeFn::power(double exponent, const std::function<double(double)>& profile) {
    return power_log(exponent, 0, profile);
}

ProbeFn ProbeFn::power_log(double exponent, int log_power,
                           const std::function<double(double)>& profile) {
    ProbeFn p;
    p.vanish_order = exponent;
    auto deriv = [exponent, log_power, profile](double x, double t, int nu) -> double {
        // d^nu/dt^nu [t^e (log t)^m]: expand the falling product termwise.
        // Represented as sum over how many derivatives hit the log factor.
        if (t <= 0.0) return 0.0;
        const double lt = std::log(t);
        // coefficients c_m of t^{e-nu} (log t)^m accumulated by repeated d/dt
        std::vector<double> c(log_power + 1, 0.0);
        c[log_power] = 1.0;
        double e = exponent;
        for (int step = 0; step < nu; ++step) {
            std::vector<double> nc(c.size(), 0.0);
            for (int m = 0; m < static_cast<int>(c.size()); ++m) {
                if (c[m] == 0.0) continue;
                nc[m] += c[m] * e;
                if (m > 0) nc[m - 1] += c[m] * m;
            }
            c = std::move(nc);
            e -= 1.0;
        }
        double poly = 0.0;
        for (int m = static_cast<int>(c.size()) - 1; m >= 0; --m) poly = poly * lt + c[m];
        return profile(x) * std::pow(t, e) * poly;
    };
    p.dt = deriv;
    p.f = [deriv](double x, double t) { return deriv(x, t, 0); };
    return p;
}

double op_lower(const ProbeFn& f, const BoundaryFunction& a, double x, double t, int nu) {
    const double ax = a.eval(x);
    if (ax <= 0.0) throw parameter_error("op_lower: a(x) <= 0");
    // d_t^nu F = int_0^1 rho^{nu + a - 1} d_t^nu f(x, t rho) drho
    const double beta = nu + ax - 1.0 + std::max(0.0, f.vanish_order - nu);
    return adaptive_gl_power01(
        [&](double rho) {
            if (rho <= 0.0) return 0.0;
            return std::pow(rho, nu + ax - 1.0) * f.dt(x, t * rho, nu);
        },
        beta, 1e-11);
}

double op_upper(const ProbeFn& f, const BoundaryFunction& a, double x, double t, int nu) {
    const double ax = a.eval(x);
    if (ax <= 0.0) throw parameter_error("op_upper: a(x) <= 0");
    if (f.vanish_order <= ax)
        throw integrability_error("op_upper: declared vanishing order " +
                                  std::to_string(f.vanish_order) + " does not exceed a(x) = " +
                                  std::to_string(ax));
    const double beta = nu - ax - 1.0 + std::max(0.0, f.vanish_order - nu);
    return adaptive_gl_power01(
        [&](double rho) {
            if (rho <= 0.0) return 0.0;
            return std::pow(rho, nu - ax - 1.0) * f.dt(x, t * rho, nu);
        },
        beta, 1e-11);
}

std::string upper_regime(const BoundaryFunction& a, double alpha, double k_declared) {
    double a_min = 1e300, a_max = -1e300;
    for (double x : chebyshev_nodes(33)) {
        const double v = a.eval(x);
        a_min = std::min(a_min, v);
        a_max = std::max(a_max, v);
    }
    const double frac = a_max - std::floor(a_max);
    const bool integer_a = frac < 1e-12 && (a_max - a_min) < 1e-12;
    if (integer_a) return k_declared >= std::floor(a_max) + 1.0 ? "A.6" : "A.5";
    if (k_declared >= std::floor(a_max) + 1.0) return "A.4";
    return alpha > frac ? "A.2" : "A.3";
}

namespace {

std::vector<std::size_t> stratified_indices(std::size_t n, std::size_t want) {
    std::vector<std::size_t> idx;
    if (n == 0) return idx;
    want = std::min(want, n);
    for (std::size_t k = 0; k < want; ++k)
        idx.push_back(k * (n - 1) / (want - 1 == 0 ? 1 : want - 1));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

} // namespace

double holder_seminorm_est(const GridFunction& g, double alpha, char direction) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw parameter_error("holder: alpha outside (0,1)");
    double best = 0.0;
    if (direction == 't') {
        if (g.nt() < 2) throw grid_error("holder: fewer than 2 t nodes");
        const auto ti = stratified_indices(g.nt(), 64);
        const auto xi = stratified_indices(g.nx(), 64);
        for (auto ix : xi) {
            for (size_t p = 0; p < ti.size(); ++p) {
                for (size_t q = p + 1; q < ti.size(); ++q) {
                    const double dt = g.t_nodes[ti[q]] - g.t_nodes[ti[p]];
                    best = std::max(best, std::abs(g.at(ix, ti[q]) - g.at(ix, ti[p])) /
                                              std::pow(dt, alpha));
                }
            }
            // near-boundary pairs against the smallest node (0+ proxy)
            const auto tb = stratified_indices(g.nt(), 512);
            for (auto it : tb) {
                if (it == 0) continue;
                const double dt = g.t_nodes[it] - g.t_nodes[0];
                best = std::max(best,
                                std::abs(g.at(ix, it) - g.at(ix, 0)) / std::pow(dt, alpha));
            }
        }
    } else if (direction == 'x') {
        if (g.nx() < 2) throw grid_error("holder: fewer than 2 x nodes");
        const auto xi = stratified_indices(g.nx(), 64);
        auto ti = stratified_indices(g.nt(), 64);
        ti.insert(ti.begin(), 0); // include the near-boundary slice
        for (auto it : ti) {
            for (size_t p = 0; p < xi.size(); ++p) {
                for (size_t q = p + 1; q < xi.size(); ++q) {
                    const double dx = g.x_nodes[xi[q]] - g.x_nodes[xi[p]];
                    if (dx <= 0.0) continue;
                    best = std::max(best, std::abs(g.at(xi[q], it) - g.at(xi[p], it)) /
                                              std::pow(dx, alpha));
                }
            }
        }
    } else {
        throw parameter_error("holder: direction must be 't' or 'x'");
    }
    return best;
}

DecayFit decay_rate_fit(const GridFunction& g, double t_lo, double t_hi) {
    std::vector<double> lx, ly;
    for (size_t j = 0; j < g.nt(); ++j) {
        const double t = g.t_nodes[j];
        if (t < t_lo || t > t_hi) continue;
        const double m = g.max_abs_at_t(j);
        if (m <= 0.0) continue;
        lx.push_back(std::log(t));
        ly.push_back(std::log(m));
    }
    if (lx.size() < 2) throw undefined_fit_error("decay_rate_fit: window has < 2 usable nodes");
    const int n = static_cast<int>(lx.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.n_points = n;
    return fit;
}

TransformReport power_log_multiply_check(const GridFunction& f, const BoundaryFunction& gamma,
                                         PowerLogMode mode, double eps, double window_lo,
                                         double window_hi) {
    TransformReport rep;
    rep.out = f;
    double gamma_max = 0.0;
    for (double x : f.x_nodes) gamma_max = std::max(gamma_max, gamma.eval(x));
    if (mode == PowerLogMode::MulPowNegGamma) {
        if (!f.vanish_order || *f.vanish_order <= gamma_max)
            throw eval_domain_error(
                "power_log_multiply_check: t^{-gamma} needs declared vanishing order above "
                "max gamma");
        rep.regime = "A.8";
    } else {
        rep.regime = mode == PowerLogMode::MulLog ? "A.7(i)" : "A.7(ii)";
    }
    for (size_t i = 0; i < f.nx(); ++i) {
        const double gx = gamma.eval(f.x_nodes[i]);
        for (size_t j = 0; j < f.nt(); ++j) {
            const double t = f.t_nodes[j];
            double w = f.at(i, j);
            switch (mode) {
            case PowerLogMode::MulPowNegGamma: w *= std::pow(t, -gx); break;
            case PowerLogMode::MulLog: w *= std::log(t); break;
            case PowerLogMode::DivLog: w /= std::log(t); break;
            }
            rep.out.at(i, j) = w;
        }
    }
    if (mode == PowerLogMode::MulPowNegGamma)
        rep.out.vanish_order = *f.vanish_order - gamma_max;
    else
        rep.out.vanish_order = f.vanish_order;
    rep.holder_x = holder_seminorm_est(rep.out, eps, 'x');
    rep.holder_t = holder_seminorm_est(rep.out, eps, 't');
    rep.fit = decay_rate_fit(rep.out, window_lo, window_hi);
    return rep;
}

} // namespace indicial
