#pragma once

#include <functional>

namespace indicial {

/**
 * Adaptive 32-point Gauss-Legendre quadrature with panel bisection.
 * Bisection grades automatically toward integrable endpoint behavior
 * (powers rho^beta with beta > -1). Relative tolerance is judged against
 * the accumulated integral plus abs_floor.
 */
double adaptive_gl(const std::function<double(double)>& f, double a, double b,
                   double rel_tol = 1e-10, double abs_floor = 1e-300, int max_panels = 200000);

/**
 * Integral over (0,1] of an integrand behaving like rho^{beta_hint} * smooth
 * near 0, with beta_hint > -1 known analytically. The substitution
 * rho = sigma^k removes the endpoint power before the adaptive rule runs,
 * so bisection never has to chase the singularity.
 */
double adaptive_gl_power01(const std::function<double(double)>& f, double beta_hint,
                           double rel_tol = 1e-12);

} // namespace indicial
