#pragma once

#include <functional>
#include <string>

#include "indicial/boundary_function.hpp"
#include "indicial/grid_function.hpp"

namespace indicial {

/**
 * Continuous function on the half-strip with analytic t-derivatives,
 * used as integrand material for the singular-integral operators.
 * dt(x, t, 0) must agree with f(x, t). vanish_order declares the decay
 * |f| <= C t^{vanish_order} at the bottom.
 */
struct ProbeFn {
    std::function<double(double, double)> f;
    std::function<double(double, double, int)> dt;
    double vanish_order = 0.0;

    static ProbeFn power(double exponent, const std::function<double(double)>& profile);
    static ProbeFn power_log(double exponent, int log_power,
                             const std::function<double(double)>& profile);
};

/**
 * F(x,t) = t^{-a(x)} int_0^t s^{a(x)-1} f(x,s) ds, computed after the
 * substitution s = t rho as int_0^1 f(x, t rho) rho^{a(x)-1} drho.
 * nu applies d_t^nu by differentiating the integrand.
 */
double op_lower(const ProbeFn& f, const BoundaryFunction& a, double x, double t, int nu = 0);

/**
 * F(x,t) = t^{a(x)} int_0^t s^{-a(x)-1} f(x,s) ds
 *        = int_0^1 rho^{-a(x)-1} f(x, t rho) drho.
 * Requires the declared vanishing order of f to exceed max a.
 */
double op_upper(const ProbeFn& f, const BoundaryFunction& a, double x, double t, int nu = 0);

// Which integrability lemma regime applies for the upper operator.
std::string upper_regime(const BoundaryFunction& a, double alpha, double k_declared);

// Mixed Hoelder seminorm lower bound from sampled difference quotients.
double holder_seminorm_est(const GridFunction& g, double alpha, char direction /* 't' or 'x' */);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    int n_points = 0;
};

// Least-squares fit of log max_x |g(., t)| against log t over the window.
DecayFit decay_rate_fit(const GridFunction& g, double t_lo, double t_hi);

enum class PowerLogMode { MulPowNegGamma, MulLog, DivLog };

struct TransformReport {
    GridFunction out;
    double holder_x = 0.0;
    double holder_t = 0.0;
    DecayFit fit;
    std::string regime;
};

TransformReport power_log_multiply_check(const GridFunction& f, const BoundaryFunction& gamma,
                                         PowerLogMode mode, double eps, double window_lo,
                                         double window_hi);

} // namespace indicial
