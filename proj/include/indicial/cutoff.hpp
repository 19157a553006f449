#pragma once

#include <vector>

namespace indicial {

/**
 * Smooth bump on [0, infinity): 1 on [0, 1/2], exp(1 - 1/(1-w^2)) with
 * w = 2z - 1 on (1/2, 1), 0 beyond 1. Derivatives vanish to all orders at
 * z = 1; the transition at z = 1/2 is C^1 with bounded higher one-sided
 * derivatives, which is what the norm ledger samples.
 */
double eta_bump(double z);

// Derivatives eta^(p)(z) for p = 0..order, computed in closed form by
// Taylor-mode arithmetic on the defining expression (never by differencing).
std::vector<double> eta_jet(double z, int order);

// Scaled cutoff eta(t/r) and the t-derivatives of eta(lambda t).
double eta_scaled(double t, double r);

// d^p/dt^p [eta(lambda t)] for p = 0..order.
std::vector<double> eta_scaled_jet(double t, double lambda, int order);

} // namespace indicial
