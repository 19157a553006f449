#pragma once

#include <functional>
#include <optional>

#include "indicial/grid_function.hpp"
#include "indicial/operator_spec.hpp"
#include "indicial/singular_integrals.hpp"

namespace indicial {

/**
 * Dirichlet problem L u = f on the half-strip with the degenerate bottom
 * condition u(x,0) = f(x,0)/c(x,0) imposed strongly and u(x,r) = top_data.
 */
struct BVPProblem {
    OperatorSpec op;
    std::function<double(double, double)> f;
    std::function<double(double)> top_data;
    enum class XBC { Periodic, Dirichlet } xbc = XBC::Periodic;
    std::function<double(double, double)> dirichlet_g; // used when xbc == Dirichlet
};

struct FDSolution {
    Mesh mesh;
    std::vector<double> v; // x-major over (mesh.nx() x mesh.nt())

    double at(std::size_t ix, std::size_t jt) const { return v[ix * mesh.nt() + jt]; }
    // Values as a GridFunction over the interior t nodes (t > 0).
    GridFunction interior() const;
    // Bilinear interpolation, linear in log t between interior rows.
    double interp(double x, double t) const;
};

// Second-order centered differences on the non-uniform tensor grid; the
// sparse system is eliminated directly.
FDSolution solve_bvp(const BVPProblem& p, const Mesh& m);

struct OracleCompareReport {
    GridFunction remainder;
    DecayFit fit_masked;   // fit over nodes above the discretization floor
    DecayFit fit_raw;      // fit over the full window
    double floor_level = 0.0;
    int masked_points = 0;
    bool discretization_limited = false;
};

/**
 * remainder = u_fd - eval on the mesh; the decay fit discards t rows whose
 * remainder is within a factor 10 of the estimated discretization error.
 * The floor comes from a half-resolution solve (or an exact solution when
 * provided).
 */
OracleCompareReport oracle_compare(const FDSolution& u_fd,
                                   const std::function<double(double, double)>& eval,
                                   double window_lo, double window_hi,
                                   const FDSolution* u_coarse = nullptr,
                                   const std::function<double(double, double)>* exact = nullptr);

struct GridResidualReport {
    double max_abs = 0.0;
    double l2 = 0.0;
    int samples = 0;
};

// L u - f on sampled grid data via the same centered stencils as the
// solver, over interior nodes with t >= t_floor.
GridResidualReport verify_residual_grid(const OperatorSpec& op, const GridFunction& u,
                                        const GridFunction& f, double t_floor = 1e-6);

} // namespace indicial
