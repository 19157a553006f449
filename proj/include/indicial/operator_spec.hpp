#pragma once

#include <vector>

#include "indicial/bivariate.hpp"
#include "indicial/series.hpp"

#include "json.hpp"

namespace indicial {

/**
 * The degenerate operator L = t^2 a_ij d_ij + t b_i d_i + c on the closed
 * half-strip [-1,1] x [0,r], flat geometry, tangential dimension one.
 * Index convention: x is tangential, t is normal, so a_tt plays the role
 * of a_nn and b_t the role of b_n.
 */
struct OperatorSpec {
    BivariatePoly axx, axt, att;
    BivariatePoly bx, bt;
    BivariatePoly c;
    double r = 1.0;

    // Rejects operators violating ellipticity or c(x,0) < 0 on a grid.
    void validate() const;

    // True if L couples u tangentially or the normal-block coefficients
    // depend on t (then assembling F feeds u back into the right side).
    bool has_tangential_coupling() const;
    bool normal_block_t_dependent() const;

    // L applied to a series by exact calculus.
    Series apply(const Series& u) const;
    // Pointwise application to a C^2 function given by an evaluator with
    // derivatives (used for cross-checks against the series route).
    double apply_pointwise(const std::function<double(double, double)>& u,
                           double x, double t, double h = 1e-5) const;

    static OperatorSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

} // namespace indicial
