#pragma once

#include <functional>
#include <vector>

namespace indicial {

/**
 * Polynomial in the tangential variable x' on [-1,1], stored as a
 * Chebyshev-T series. Addition, multiplication and differentiation are
 * exact coefficient operations; only division goes through an
 * interpolation fit with a certified max error (see quotient()).
 *
 * An empty coefficient vector is the zero polynomial.
 */
class BoundaryFunction {
public:
    BoundaryFunction() = default;
    explicit BoundaryFunction(std::vector<double> cheb_coeffs);

    static BoundaryFunction constant(double c);
    static BoundaryFunction identity(); // f(x) = x
    // Coefficients c0 + c1 x + c2 x^2 + ...
    static BoundaryFunction from_monomial(const std::vector<double>& mono);
    // Chebyshev interpolant of f at degree+1 first-kind nodes.
    static BoundaryFunction interpolate(const std::function<double(double)>& f, int degree);
    // Least-squares truncation to `degree` of data given at chebyshev_nodes(values.size()).
    static BoundaryFunction from_node_values(const std::vector<double>& values, int degree);

    double eval(double x) const; // Clenshaw recurrence
    BoundaryFunction derivative() const;

    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    bool is_zero(double tol = 1e-13) const;
    double coeff_bound() const;              // sum |c_j|, an upper bound for sup|f|
    double sup_norm(int samples = 257) const;
    const std::vector<double>& cheb() const { return c_; }
    std::vector<double> to_monomial() const; // for display; stable only at modest degree

    BoundaryFunction& operator+=(const BoundaryFunction& o);
    BoundaryFunction& operator-=(const BoundaryFunction& o);
    BoundaryFunction& operator*=(double s);
    friend BoundaryFunction operator+(BoundaryFunction a, const BoundaryFunction& b) { return a += b; }
    friend BoundaryFunction operator-(BoundaryFunction a, const BoundaryFunction& b) { return a -= b; }
    friend BoundaryFunction operator*(BoundaryFunction a, double s) { return a *= s; }
    friend BoundaryFunction operator*(double s, BoundaryFunction a) { return a *= s; }
    friend BoundaryFunction operator-(BoundaryFunction a) { return a *= -1.0; }
    friend BoundaryFunction operator*(const BoundaryFunction& a, const BoundaryFunction& b);

    void trim(double abs_tol = 0.0); // drop negligible trailing coefficients

private:
    std::vector<double> c_; // Chebyshev-T coefficients
};

// First-kind Chebyshev nodes cos(pi (k+1/2)/n), returned in ascending order.
std::vector<double> chebyshev_nodes(int n);

struct FitResult {
    BoundaryFunction fn;
    double cert_error = 0.0; // max |fn - f| over a refined certification grid
};

// Adaptive Chebyshev fit of an arbitrary function; the certified error is
// measured on a 4x-refined node set plus the endpoints.
FitResult fit_function(const std::function<double(double)>& f, double target, int max_degree);

// num/den as a certified polynomial fit; throws fit_error if the target
// cannot be met within max_degree. den must not vanish on [-1,1].
BoundaryFunction quotient(const BoundaryFunction& num, const BoundaryFunction& den,
                          double target = 1e-13, int max_degree = 96);

} // namespace indicial
