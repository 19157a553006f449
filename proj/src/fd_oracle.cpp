#include "indicial/fd_oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>

#include "indicial/errors.hpp"

namespace indicial {

GridFunction FDSolution::interior() const {
    std::vector<double> ts(mesh.t_nodes.begin() + 1, mesh.t_nodes.end());
    GridFunction g(mesh.x_nodes, ts);
    for (size_t i = 0; i < mesh.nx(); ++i)
        for (size_t j = 1; j < mesh.nt(); ++j) g.at(i, j - 1) = at(i, j);
    return g;
}

double FDSolution::interp(double x, double t) const {
    const auto& xs = mesh.x_nodes;
    const auto& ts = mesh.t_nodes;
    auto xit = std::upper_bound(xs.begin(), xs.end(), x);
    size_t i1 = std::min<size_t>(std::max<ptrdiff_t>(1, xit - xs.begin()), xs.size() - 1);
    auto tit = std::upper_bound(ts.begin(), ts.end(), t);
    size_t j1 = std::min<size_t>(std::max<ptrdiff_t>(1, tit - ts.begin()), ts.size() - 1);
    const size_t i0 = i1 - 1, j0 = j1 - 1;
    const double wx = (x - xs[i0]) / (xs[i1] - xs[i0]);
    double wt;
    if (ts[j0] > 0.0 && t > 0.0)
        wt = std::log(t / ts[j0]) / std::log(ts[j1] / ts[j0]);
    else
        wt = (t - ts[j0]) / (ts[j1] - ts[j0]);
    wt = std::clamp(wt, 0.0, 1.0);
    const double a = at(i0, j0) * (1 - wt) + at(i0, j1) * wt;
    const double b = at(i1, j0) * (1 - wt) + at(i1, j1) * wt;
    return a * (1 - wx) + b * wx;
}

FDSolution solve_bvp(const BVPProblem& p, const Mesh& m) {
    p.op.validate();
    const size_t nx = m.nx();
    const size_t nt = m.nt();
    const size_t N = nx * nt;
    const double hx = m.hx();
    const auto& ts = m.t_nodes;
    const auto& xs = m.x_nodes;

    auto idx = [&](size_t i, size_t j) { return i * nt + j; };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(N * 9);
    Eigen::VectorXd rhs(N);
    rhs.setZero();

    const bool periodic = p.xbc == BVPProblem::XBC::Periodic;

    for (size_t i = 0; i < nx; ++i) {
        const double x = xs[i];
        for (size_t j = 0; j < nt; ++j) {
            const double t = ts[j];
            const size_t row = idx(i, j);
            // bottom row: forced boundary value u = f/c
            if (j == 0) {
                trip.emplace_back(row, row, 1.0);
                rhs[row] = p.f(x, 0.0) / p.op.c.eval(x, 0.0);
                continue;
            }
            // top row
            if (j == nt - 1) {
                trip.emplace_back(row, row, 1.0);
                rhs[row] = p.top_data(x);
                continue;
            }
            // x-Dirichlet edges
            if (!periodic && (i == 0 || i == nx - 1)) {
                trip.emplace_back(row, row, 1.0);
                rhs[row] = p.dirichlet_g(x, t);
                continue;
            }
            const double hm = ts[j] - ts[j - 1];
            const double hp = ts[j + 1] - ts[j];
            const double axx = t * t * p.op.axx.eval(x, t);
            const double axt = 2.0 * t * t * p.op.axt.eval(x, t);
            const double att = t * t * p.op.att.eval(x, t);
            const double bx = t * p.op.bx.eval(x, t);
            const double bt = t * p.op.bt.eval(x, t);
            const double cc = p.op.c.eval(x, t);

            const size_t il = periodic ? (i + nx - 1) % nx : i - 1;
            const size_t ir = periodic ? (i + 1) % nx : i + 1;

            // t-direction stencils on the non-uniform spacing
            const double vtt_m = 2.0 / (hm * (hm + hp));
            const double vtt_0 = -2.0 / (hm * hp);
            const double vtt_p = 2.0 / (hp * (hm + hp));
            const double vt_m = -hp / (hm * (hm + hp));
            const double vt_0 = (hp - hm) / (hm * hp);
            const double vt_p = hm / (hp * (hm + hp));

            auto add = [&](size_t ii, size_t jj, double w) {
                if (w != 0.0) trip.emplace_back(row, idx(ii, jj), w);
            };
            // t^2 a_tt u_tt + t b_t u_t
            add(i, j - 1, att * vtt_m + bt * vt_m);
            add(i, j, att * vtt_0 + bt * vt_0 + cc);
            add(i, j + 1, att * vtt_p + bt * vt_p);
            // t^2 a_xx u_xx + t b_x u_x
            add(il, j, axx / (hx * hx) - bx / (2.0 * hx));
            add(i, j, -2.0 * axx / (hx * hx));
            add(ir, j, axx / (hx * hx) + bx / (2.0 * hx));
            // mixed 4-point cross
            const double cxt = axt / ((2.0 * hx) * (hm + hp));
            add(ir, j + 1, cxt);
            add(il, j + 1, -cxt);
            add(ir, j - 1, -cxt);
            add(il, j - 1, cxt);

            rhs[row] = p.f(x, t);
        }
    }

    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw solver_error("solve_bvp: sparse factorization failed (mesh " +
                           std::to_string(nx) + "x" + std::to_string(nt) + ")");
    Eigen::VectorXd sol = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw solver_error("solve_bvp: back-substitution failed");

    const double resid = (A * sol - rhs).cwiseAbs().maxCoeff();
    const double scale = rhs.cwiseAbs().maxCoeff() + 1.0;
    if (resid > 1e-8 * scale)
        throw convergence_error("solve_bvp: linear residual " + std::to_string(resid) +
                                " above tolerance");

    FDSolution out;
    out.mesh = m;
    out.v.assign(sol.data(), sol.data() + N);
    return out;
}

GridResidualReport verify_residual_grid(const OperatorSpec& op, const GridFunction& u,
                                        const GridFunction& f, double t_floor) {
    if (u.nx() < 3 || u.nt() < 3) throw grid_error("verify_residual_grid: grid too coarse");
    if (u.nx() != f.nx() || u.nt() != f.nt())
        throw grid_error("verify_residual_grid: incompatible grids");
    GridResidualReport rep;
    double sumsq = 0.0;
    for (size_t i = 1; i + 1 < u.nx(); ++i) {
        const double x = u.x_nodes[i];
        const double hxm = x - u.x_nodes[i - 1];
        const double hxp = u.x_nodes[i + 1] - x;
        for (size_t j = 1; j + 1 < u.nt(); ++j) {
            const double t = u.t_nodes[j];
            if (t < t_floor) continue;
            const double hm = t - u.t_nodes[j - 1];
            const double hp = u.t_nodes[j + 1] - t;
            const double ut = (-hp / (hm * (hm + hp))) * u.at(i, j - 1) +
                              ((hp - hm) / (hm * hp)) * u.at(i, j) +
                              (hm / (hp * (hm + hp))) * u.at(i, j + 1);
            const double utt = 2.0 / (hm * (hm + hp)) * u.at(i, j - 1) -
                               2.0 / (hm * hp) * u.at(i, j) +
                               2.0 / (hp * (hm + hp)) * u.at(i, j + 1);
            const double ux = (-hxp / (hxm * (hxm + hxp))) * u.at(i - 1, j) +
                              ((hxp - hxm) / (hxm * hxp)) * u.at(i, j) +
                              (hxm / (hxp * (hxm + hxp))) * u.at(i + 1, j);
            const double uxx = 2.0 / (hxm * (hxm + hxp)) * u.at(i - 1, j) -
                               2.0 / (hxm * hxp) * u.at(i, j) +
                               2.0 / (hxp * (hxm + hxp)) * u.at(i + 1, j);
            const double uxt = (u.at(i + 1, j + 1) - u.at(i - 1, j + 1) - u.at(i + 1, j - 1) +
                                u.at(i - 1, j - 1)) /
                               ((hxm + hxp) * (hm + hp));
            const double res =
                t * t * (op.axx.eval(x, t) * uxx + 2.0 * op.axt.eval(x, t) * uxt +
                         op.att.eval(x, t) * utt) +
                t * (op.bx.eval(x, t) * ux + op.bt.eval(x, t) * ut) +
                op.c.eval(x, t) * u.at(i, j) - f.at(i, j);
            rep.max_abs = std::max(rep.max_abs, std::abs(res));
            sumsq += res * res;
            ++rep.samples;
        }
    }
    rep.l2 = rep.samples ? std::sqrt(sumsq / rep.samples) : 0.0;
    return rep;
}

OracleCompareReport oracle_compare(const FDSolution& u_fd,
                                   const std::function<double(double, double)>& eval,
                                   double window_lo, double window_hi,
                                   const FDSolution* u_coarse,
                                   const std::function<double(double, double)>* exact) {
    const Mesh& m = u_fd.mesh;
    OracleCompareReport rep;
    std::vector<double> ts(m.t_nodes.begin() + 1, m.t_nodes.end());
    rep.remainder = GridFunction(m.x_nodes, ts);
    for (size_t i = 0; i < m.nx(); ++i)
        for (size_t j = 1; j < m.nt(); ++j)
            rep.remainder.at(i, j - 1) = u_fd.at(i, j) - eval(m.x_nodes[i], m.t_nodes[j]);

    // discretization floor per t row
    std::vector<double> floor_t(ts.size(), 0.0);
    if (exact != nullptr) {
        for (size_t j = 0; j < ts.size(); ++j) {
            double mx = 0.0;
            for (size_t i = 0; i < m.nx(); ++i)
                mx = std::max(mx, std::abs(u_fd.at(i, j + 1) - (*exact)(m.x_nodes[i], ts[j])));
            floor_t[j] = mx;
        }
    } else if (u_coarse != nullptr) {
        for (size_t j = 0; j < ts.size(); ++j) {
            double mx = 0.0;
            for (size_t i = 0; i < m.nx(); ++i)
                mx = std::max(mx, std::abs(u_fd.at(i, j + 1) -
                                           u_coarse->interp(m.x_nodes[i], ts[j])));
            floor_t[j] = mx;
        }
    }
    for (size_t j = 0; j < ts.size(); ++j)
        if (ts[j] >= window_lo && ts[j] <= window_hi)
            rep.floor_level = std::max(rep.floor_level, floor_t[j]);

    rep.fit_raw = decay_rate_fit(rep.remainder, window_lo, window_hi);

    // masked fit: keep rows clearly above the floor
    GridFunction masked = rep.remainder;
    int kept = 0;
    for (size_t j = 0; j < ts.size(); ++j) {
        const double rowmax = rep.remainder.max_abs_at_t(j);
        const bool keep = rowmax > 10.0 * floor_t[j];
        if (!keep)
            for (size_t i = 0; i < m.nx(); ++i) masked.at(i, j) = 0.0;
        else if (ts[j] >= window_lo && ts[j] <= window_hi)
            ++kept;
    }
    rep.masked_points = kept;
    if (kept >= 8) {
        rep.fit_masked = decay_rate_fit(masked, window_lo, window_hi);
        rep.discretization_limited = false;
    } else {
        rep.fit_masked = rep.fit_raw;
        rep.discretization_limited = true;
    }
    return rep;
}

} // namespace indicial
