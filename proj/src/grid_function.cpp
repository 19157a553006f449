#include "indicial/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "indicial/errors.hpp"

namespace indicial {

GridFunction::GridFunction(std::vector<double> xs, std::vector<double> ts)
    : x_nodes(std::move(xs)), t_nodes(std::move(ts)), v(x_nodes.size() * t_nodes.size(), 0.0) {
    for (size_t j = 1; j < t_nodes.size(); ++j)
        if (!(t_nodes[j] > t_nodes[j - 1])) throw grid_error("t nodes not strictly increasing");
}

GridFunction GridFunction::sample(const std::function<double(double, double)>& f,
                                  std::vector<double> xs, std::vector<double> ts) {
    GridFunction g(std::move(xs), std::move(ts));
    for (size_t i = 0; i < g.nx(); ++i)
        for (size_t j = 0; j < g.nt(); ++j) g.at(i, j) = f(g.x_nodes[i], g.t_nodes[j]);
    return g;
}

double GridFunction::max_abs_at_t(std::size_t it) const {
    double m = 0.0;
    for (size_t i = 0; i < nx(); ++i) m = std::max(m, std::abs(at(i, it)));
    return m;
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double w : v) m = std::max(m, std::abs(w));
    return m;
}

std::vector<double> graded_t_nodes(int n, double r, double beta) {
    std::vector<double> t(n);
    for (int j = 1; j <= n; ++j) t[j - 1] = r * std::pow(static_cast<double>(j) / n, beta);
    return t;
}

std::vector<double> uniform_nodes(int n, double a, double b) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
    return x;
}

Mesh Mesh::make(int nx, int nt, double r, double beta, bool x_periodic) {
    if (nx < 4 || nt < 8) throw grid_error("mesh too coarse");
    Mesh m;
    m.beta = beta;
    m.x_periodic = x_periodic;
    const int nxe = x_periodic ? nx : nx + 1;
    m.x_nodes.resize(nxe);
    for (int i = 0; i < nxe; ++i)
        m.x_nodes[i] = -1.0 + 2.0 * i / nx;

    m.t_nodes.resize(nt + 1);
    m.t_nodes[0] = 0.0;
    for (int j = 1; j <= nt; ++j) m.t_nodes[j] = r * std::pow(static_cast<double>(j) / nt, beta);
    // The pure power law violates the ratio-2 cap for the first few nodes;
    // replace them by a geometric tail from the first compliant node.
    int j0 = 1;
    while (j0 + 1 <= nt &&
           m.t_nodes[j0 + 1] / m.t_nodes[j0] > 2.0)
        ++j0;
    for (int j = j0 - 1; j >= 1; --j) m.t_nodes[j] = m.t_nodes[j + 1] * 0.5;

    if (m.t_nodes[1] > 1e-3 * r) throw grid_error("mesh: t_1 exceeds 1e-3 r; raise nt or beta");
    for (int j = 1; j < nt; ++j)
        if (m.t_nodes[j + 1] / m.t_nodes[j] > 2.0 + 1e-12)
            throw grid_error("mesh: local ratio above 2");
    return m;
}

} // namespace indicial
