#include "indicial/boundary_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "indicial/errors.hpp"

namespace indicial {

namespace {

// Discrete Chebyshev transform: values at the n first-kind nodes (ascending
// x) -> coefficients of the degree n-1 interpolant.
std::vector<double> transform(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    std::vector<double> c(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            // ascending node k corresponds to theta = pi (n-1-k+1/2)/n
            const double theta = std::numbers::pi * (n - k - 0.5) / n;
            acc += values[k] * std::cos(j * theta);
        }
        c[j] = 2.0 * acc / n;
    }
    c[0] *= 0.5;
    return c;
}

} // namespace

std::vector<double> chebyshev_nodes(int n) {
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k)
        x[k] = std::cos(std::numbers::pi * (n - k - 0.5) / n);
    return x;
}

BoundaryFunction::BoundaryFunction(std::vector<double> cheb_coeffs) : c_(std::move(cheb_coeffs)) {
    trim();
}

BoundaryFunction BoundaryFunction::constant(double c) {
    if (c == 0.0) return {};
    return BoundaryFunction{{c}};
}

BoundaryFunction BoundaryFunction::identity() { return BoundaryFunction{{0.0, 1.0}}; }

BoundaryFunction BoundaryFunction::from_monomial(const std::vector<double>& mono) {
    if (mono.empty()) return {};
    const int n = static_cast<int>(mono.size());
    auto nodes = chebyshev_nodes(n);
    std::vector<double> vals(n);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int j = n - 1; j >= 0; --j) acc = acc * nodes[k] + mono[j];
        vals[k] = acc;
    }
    return BoundaryFunction{transform(vals)};
}

BoundaryFunction BoundaryFunction::interpolate(const std::function<double(double)>& f, int degree) {
    const int n = degree + 1;
    auto nodes = chebyshev_nodes(n);
    std::vector<double> vals(n);
    for (int k = 0; k < n; ++k) vals[k] = f(nodes[k]);
    return BoundaryFunction{transform(vals)};
}

BoundaryFunction BoundaryFunction::from_node_values(const std::vector<double>& values, int degree) {
    auto c = transform(values);
    if (degree + 1 < static_cast<int>(c.size())) c.resize(degree + 1);
    return BoundaryFunction{std::move(c)};
}

double BoundaryFunction::eval(double x) const {
    if (c_.empty()) return 0.0;
    double b1 = 0.0, b2 = 0.0;
    for (int j = static_cast<int>(c_.size()) - 1; j >= 1; --j) {
        const double b0 = 2.0 * x * b1 - b2 + c_[j];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + c_[0];
}

BoundaryFunction BoundaryFunction::derivative() const {
    const int n = static_cast<int>(c_.size()) - 1;
    if (n <= 0) return {};
    std::vector<double> d(n, 0.0);
    // d_k = d_{k+2} + 2(k+1) c_{k+1}
    for (int k = n - 1; k >= 0; --k) {
        const double up = (k + 2 <= n - 1) ? d[k + 2] : 0.0;
        d[k] = up + 2.0 * (k + 1) * c_[k + 1];
    }
    d[0] *= 0.5;
    return BoundaryFunction{std::move(d)};
}

bool BoundaryFunction::is_zero(double tol) const { return coeff_bound() < tol; }

double BoundaryFunction::coeff_bound() const {
    double s = 0.0;
    for (double v : c_) s += std::abs(v);
    return s;
}

double BoundaryFunction::sup_norm(int samples) const {
    if (c_.empty()) return 0.0;
    double m = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double x = -1.0 + 2.0 * k / (samples - 1);
        m = std::max(m, std::abs(eval(x)));
    }
    return m;
}

std::vector<double> BoundaryFunction::to_monomial() const {
    const int n = static_cast<int>(c_.size());
    if (n == 0) return {};
    // T_{k+1} = 2 x T_k - T_{k-1}
    std::vector<double> tkm1{1.0}, tk{0.0, 1.0}, out(n, 0.0);
    out[0] = c_[0];
    for (int k = 1; k < n; ++k) {
        for (size_t j = 0; j < tk.size(); ++j) out[j] += c_[k] * tk[j];
        if (k + 1 < n) {
            std::vector<double> next(tk.size() + 1, 0.0);
            for (size_t j = 0; j < tk.size(); ++j) next[j + 1] += 2.0 * tk[j];
            for (size_t j = 0; j < tkm1.size(); ++j) next[j] -= tkm1[j];
            tkm1 = std::move(tk);
            tk = std::move(next);
        }
    }
    return out;
}

BoundaryFunction& BoundaryFunction::operator+=(const BoundaryFunction& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t j = 0; j < o.c_.size(); ++j) c_[j] += o.c_[j];
    trim();
    return *this;
}

BoundaryFunction& BoundaryFunction::operator-=(const BoundaryFunction& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t j = 0; j < o.c_.size(); ++j) c_[j] -= o.c_[j];
    trim();
    return *this;
}

BoundaryFunction& BoundaryFunction::operator*=(double s) {
    if (s == 0.0) {
        c_.clear();
        return *this;
    }
    for (double& v : c_) v *= s;
    return *this;
}

BoundaryFunction operator*(const BoundaryFunction& a, const BoundaryFunction& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    // T_i T_j = (T_{i+j} + T_{|i-j|}) / 2, exact in coefficients
    std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        for (size_t j = 0; j < b.c_.size(); ++j) {
            const double w = 0.5 * a.c_[i] * b.c_[j];
            r[i + j] += w;
            r[i > j ? i - j : j - i] += w;
        }
    }
    return BoundaryFunction{std::move(r)};
}

void BoundaryFunction::trim(double abs_tol) {
    double scale = 1.0;
    for (double v : c_) scale = std::max(scale, std::abs(v));
    const double tol = std::max(abs_tol, 5e-15 * scale);
    while (!c_.empty() && std::abs(c_.back()) < tol) c_.pop_back();
}

FitResult fit_function(const std::function<double(double)>& f, double target, int max_degree) {
    FitResult best;
    best.cert_error = std::numeric_limits<double>::infinity();
    int degree = 8;
    while (true) {
        auto cand = BoundaryFunction::interpolate(f, degree);
        // certify on a 4x refined node set plus the endpoints
        auto fine = chebyshev_nodes(4 * (degree + 1));
        fine.push_back(-1.0);
        fine.push_back(1.0);
        double err = 0.0;
        for (double x : fine) err = std::max(err, std::abs(cand.eval(x) - f(x)));
        if (err < best.cert_error) {
            best.fn = std::move(cand);
            best.cert_error = err;
        }
        if (best.cert_error <= target || degree >= max_degree) return best;
        degree = std::min(max_degree, degree + degree / 2 + 4);
    }
}

BoundaryFunction quotient(const BoundaryFunction& num, const BoundaryFunction& den,
                          double target, int max_degree) {
    if (num.is_zero()) return {};
    const double tol = target * std::max(1.0, num.coeff_bound());
    auto fit = fit_function([&](double x) {
        const double d = den.eval(x);
        if (d == 0.0) throw fit_error("quotient: denominator vanishes on [-1,1]");
        return num.eval(x) / d;
    }, tol, max_degree);
    if (fit.cert_error > tol)
        throw fit_error("quotient: certified fit error " + std::to_string(fit.cert_error) +
                        " exceeds target " + std::to_string(tol));
    return fit.fn;
}

} // namespace indicial
