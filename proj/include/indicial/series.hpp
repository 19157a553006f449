#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "indicial/bivariate.hpp"
#include "indicial/boundary_function.hpp"

#include "json.hpp"

namespace indicial {

/**
 * Exponent of a generalized power term t^{i + g*gamma(x')} (log t)^j.
 * g is 0 or 1; products t^{2 gamma} are outside the representable lattice.
 * The ordering (i + g*gamma_min, j) reduces to lexicographic (i, g, j)
 * because gamma stays in (0,1).
 */
struct TermExponent {
    int i = 0;
    int g = 0;
    int j = 0;
    auto operator<=>(const TermExponent&) const = default;
};

struct Term {
    TermExponent e;
    BoundaryFunction coeff;
};

/**
 * Finite sum of Terms sharing one fractional exponent gamma(x').
 * Terms are kept sorted and merged; coefficients below the pruning
 * threshold are dropped.
 */
class Series {
public:
    Series() = default; // gamma == 0 (pure integer/log lattice)
    explicit Series(BoundaryFunction gamma);

    const BoundaryFunction& gamma() const { return gamma_; }
    const std::map<TermExponent, BoundaryFunction>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(int i, int g, int j, const BoundaryFunction& c);
    // Zero polynomial when the exponent is absent.
    const BoundaryFunction& coeff(int i, int g, int j) const;
    bool has_gamma_terms() const;
    int max_int_order() const; // largest i over stored terms, -1 if empty

    double evaluate(double x, double t) const;

    Series shifted_t(int k) const;     // multiply by t^k
    Series scaled(const BoundaryFunction& f) const;
    Series scaled(double s) const;
    // Drop the integer-power, log-free terms with i <= k (exact removal).
    Series without_g0_upto(int k) const;
    Series truncated_above(int max_i) const; // keep terms with e.i <= max_i

    nlohmann::json to_json() const;
    static Series from_json(const nlohmann::json& j);

    static constexpr double kPruneTol = 1e-13;

private:
    BoundaryFunction gamma_;
    std::map<TermExponent, BoundaryFunction> terms_;

    friend Series series_add(const Series& a, const Series& b);
    friend Series series_mul(const Series& a, const Series& b);
    friend Series series_diff_t(const Series& s);
    friend Series series_diff_x(const Series& s);
    friend Series mul_bivariate(const BivariatePoly& a, const Series& s);
};

Series series_add(const Series& a, const Series& b);
Series series_mul(const Series& a, const Series& b);
Series series_diff_t(const Series& s);
Series series_diff_x(const Series& s);
Series mul_bivariate(const BivariatePoly& a, const Series& s);

// Convenience: polynomial f(x,t) as a Series on the gamma lattice.
Series series_from_bivariate(const BivariatePoly& p, const BoundaryFunction& gamma);

} // namespace indicial
