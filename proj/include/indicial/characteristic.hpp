#pragma once

#include <utility>
#include <vector>

#include "indicial/boundary_function.hpp"
#include "indicial/operator_spec.hpp"

namespace indicial {

// Quadratic coefficients of the characteristic polynomial at one boundary
// point: P(mu) = A mu^2 + (B - A) mu + C = mu(mu-1) a_tt + mu b_t + c at t=0.
struct CharPolyCoeffs {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double eval(double mu) const { return (A * mu + (B - A)) * mu + C; }
};

CharPolyCoeffs char_poly(const OperatorSpec& op, double x);

/**
 * Pointwise indicial roots fitted over the validation grid. m_upper and
 * m_lower are polynomial surrogates with certified max errors so that
 * D_x gamma stays exact under the recursion's repeated differentiation.
 */
struct CharacteristicData {
    BoundaryFunction m_lower;         // negative root
    BoundaryFunction m_upper;         // positive root
    BoundaryFunction gamma;           // m_upper - [m_upper]; zero in resonant mode
    int int_part = 0;                 // [m_upper], constant across the grid
    bool resonant = false;            // m_upper is a constant integer
    double fit_error_upper = 0.0;
    double fit_error_lower = 0.0;
    std::vector<double> grid;         // validation nodes

    double gamma_min() const;
    double gamma_max() const;
};

// Default validation grid: 64 Chebyshev nodes on [-1,1].
CharacteristicData indicial_roots(const OperatorSpec& op,
                                  const std::vector<double>& grid = chebyshev_nodes(64));

// p = 1 - (m_lower + m_upper), q = m_lower * m_upper, exact arithmetic on the fits.
std::pair<BoundaryFunction, BoundaryFunction> p_q_from_roots(const CharacteristicData& cd);

} // namespace indicial
