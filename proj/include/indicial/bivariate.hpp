#pragma once

#include <vector>

#include "indicial/boundary_function.hpp"

namespace indicial {

/**
 * Bivariate polynomial on the half-strip [-1,1] x [0,r], stored as
 * A(x,t) = sum_k A_k(x) t^k with BoundaryFunction coefficients A_k.
 */
class BivariatePoly {
public:
    BivariatePoly() = default;
    explicit BivariatePoly(std::vector<BoundaryFunction> t_coeffs);

    static BivariatePoly constant(double c);
    static BivariatePoly from_bf(BoundaryFunction f); // t-independent
    // rows[k] = monomial x-coefficients of the t^k term
    static BivariatePoly from_monomial_rows(const std::vector<std::vector<double>>& rows);

    double eval(double x, double t) const;
    BivariatePoly diff_t() const;
    BivariatePoly diff_x() const;

    int t_degree() const { return static_cast<int>(c_.size()) - 1; }
    const BoundaryFunction& coeff(int k) const; // zero BF beyond degree
    bool is_zero(double tol = 1e-13) const;
    bool t_independent(double tol = 1e-13) const;
    double coeff_bound() const;

    BivariatePoly& operator+=(const BivariatePoly& o);
    BivariatePoly& operator-=(const BivariatePoly& o);
    BivariatePoly& operator*=(double s);
    friend BivariatePoly operator+(BivariatePoly a, const BivariatePoly& b) { return a += b; }
    friend BivariatePoly operator-(BivariatePoly a, const BivariatePoly& b) { return a -= b; }
    friend BivariatePoly operator*(BivariatePoly a, double s) { return a *= s; }
    friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b);

    /**
     * Truncated Taylor series of 1/A about t = 0, through t^order.
     * The t^0 division is a certified fit; the truncation remainder is
     * monitored on a probe grid over [-1,1] x [0,r] and must satisfy
     * |A * inv - 1| <= check_tol there.
     */
    BivariatePoly taylor_inverse(int order, double r, double check_tol = 1e-10) const;

private:
    void normalize();
    std::vector<BoundaryFunction> c_;
};

} // namespace indicial
