#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace indicial {

/**
 * Sampled values on a tensor grid: x nodes in [-1,1] times graded t nodes
 * in (0, r]. Values are immutable after construction.
 */
struct GridFunction {
    std::vector<double> x_nodes;
    std::vector<double> t_nodes;
    std::vector<double> v; // x-major: v[ix * nt + it]
    std::optional<double> vanish_order;

    GridFunction() = default;
    GridFunction(std::vector<double> xs, std::vector<double> ts);

    static GridFunction sample(const std::function<double(double, double)>& f,
                               std::vector<double> xs, std::vector<double> ts);

    std::size_t nx() const { return x_nodes.size(); }
    std::size_t nt() const { return t_nodes.size(); }
    double& at(std::size_t ix, std::size_t it) { return v[ix * nt() + it]; }
    double at(std::size_t ix, std::size_t it) const { return v[ix * nt() + it]; }
    double max_abs_at_t(std::size_t it) const;
    double max_abs() const;
};

// Graded nodes t_j ~ r (j/n)^beta on (0, r], ascending, excluding t = 0.
std::vector<double> graded_t_nodes(int n, double r, double beta);

std::vector<double> uniform_nodes(int n, double a, double b);

/**
 * FD mesh: uniform x nodes, graded t nodes including the boundary row
 * t_0 = 0. The first interior node satisfies t_1 <= 1e-3 r and the local
 * ratio t_{j+1}/t_j stays <= 2 for j >= 1 (the leading power-law nodes are
 * replaced by a geometric tail where the pure power law would violate it).
 */
struct Mesh {
    std::vector<double> x_nodes; // ascending; for periodic meshes the right endpoint is omitted
    std::vector<double> t_nodes; // t_0 = 0 < t_1 < ... < t_N = r
    double beta = 2.0;
    bool x_periodic = false;

    static Mesh make(int nx, int nt, double r, double beta, bool x_periodic);
    std::size_t nx() const { return x_nodes.size(); }
    std::size_t nt() const { return t_nodes.size(); }
    double hx() const { return x_nodes[1] - x_nodes[0]; }
};

} // namespace indicial
