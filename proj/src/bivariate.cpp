#include "indicial/bivariate.hpp"

#include <cmath>

#include "indicial/errors.hpp"

namespace indicial {

BivariatePoly::BivariatePoly(std::vector<BoundaryFunction> t_coeffs) : c_(std::move(t_coeffs)) {
    normalize();
}

BivariatePoly BivariatePoly::constant(double c) {
    if (c == 0.0) return {};
    return BivariatePoly{{BoundaryFunction::constant(c)}};
}

BivariatePoly BivariatePoly::from_bf(BoundaryFunction f) {
    return BivariatePoly{{std::move(f)}};
}

BivariatePoly BivariatePoly::from_monomial_rows(const std::vector<std::vector<double>>& rows) {
    std::vector<BoundaryFunction> c;
    c.reserve(rows.size());
    for (const auto& row : rows) c.push_back(BoundaryFunction::from_monomial(row));
    return BivariatePoly{std::move(c)};
}

double BivariatePoly::eval(double x, double t) const {
    double acc = 0.0;
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) acc = acc * t + c_[k].eval(x);
    return acc;
}

BivariatePoly BivariatePoly::diff_t() const {
    if (c_.size() <= 1) return {};
    std::vector<BoundaryFunction> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return BivariatePoly{std::move(d)};
}

BivariatePoly BivariatePoly::diff_x() const {
    std::vector<BoundaryFunction> d(c_.size());
    for (size_t k = 0; k < c_.size(); ++k) d[k] = c_[k].derivative();
    return BivariatePoly{std::move(d)};
}

const BoundaryFunction& BivariatePoly::coeff(int k) const {
    static const BoundaryFunction zero;
    if (k < 0 || k >= static_cast<int>(c_.size())) return zero;
    return c_[k];
}

bool BivariatePoly::is_zero(double tol) const { return coeff_bound() < tol; }

bool BivariatePoly::t_independent(double tol) const {
    for (size_t k = 1; k < c_.size(); ++k)
        if (c_[k].coeff_bound() >= tol) return false;
    return true;
}

double BivariatePoly::coeff_bound() const {
    double s = 0.0;
    for (const auto& f : c_) s += f.coeff_bound();
    return s;
}

BivariatePoly& BivariatePoly::operator+=(const BivariatePoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    normalize();
    return *this;
}

BivariatePoly& BivariatePoly::operator-=(const BivariatePoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    normalize();
    return *this;
}

BivariatePoly& BivariatePoly::operator*=(double s) {
    for (auto& f : c_) f *= s;
    normalize();
    return *this;
}

BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<BoundaryFunction> r(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return BivariatePoly{std::move(r)};
}

BivariatePoly BivariatePoly::taylor_inverse(int order, double r, double check_tol) const {
    if (c_.empty()) throw taylor_truncation_error("taylor_inverse of zero polynomial");
    std::vector<BoundaryFunction> inv(order + 1);
    const BoundaryFunction one = BoundaryFunction::constant(1.0);
    inv[0] = quotient(one, c_[0]);
    for (int k = 1; k <= order; ++k) {
        BoundaryFunction acc;
        for (int j = 1; j <= k; ++j) acc += coeff(j) * inv[k - j];
        inv[k] = -(inv[0] * acc);
    }
    BivariatePoly result{std::move(inv)};
    // remainder monitored on a probe grid
    double worst = 0.0;
    auto xs = chebyshev_nodes(17);
    for (double x : xs) {
        for (int jt = 0; jt <= 24; ++jt) {
            const double t = r * jt / 24.0;
            worst = std::max(worst, std::abs(eval(x, t) * result.eval(x, t) - 1.0));
        }
    }
    if (worst > check_tol) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3e", worst);
        throw taylor_truncation_error(std::string("taylor_inverse: remainder ") + buf +
                                      " exceeds tolerance; raise the truncation order");
    }
    return result;
}

void BivariatePoly::normalize() {
    while (!c_.empty() && c_.back().is_zero(1e-300)) c_.pop_back();
}

} // namespace indicial
