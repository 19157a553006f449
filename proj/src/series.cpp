#include "indicial/series.hpp"

#include <algorithm>
#include <cmath>

#include "indicial/errors.hpp"

namespace indicial {

namespace {

bool same_gamma(const BoundaryFunction& a, const BoundaryFunction& b) {
    BoundaryFunction d = a - b;
    return d.coeff_bound() <= 1e-13 * std::max(1.0, a.coeff_bound());
}

// Neumaier compensated summation over values sorted by magnitude.
double stable_sum(std::vector<double>& vals) {
    std::sort(vals.begin(), vals.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    double s = 0.0, comp = 0.0;
    for (double v : vals) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v))
            comp += (s - t) + v;
        else
            comp += (v - t) + s;
        s = t;
    }
    return s + comp;
}

} // namespace

Series::Series(BoundaryFunction gamma) : gamma_(std::move(gamma)) {}

void Series::add_term(int i, int g, int j, const BoundaryFunction& c) {
    if (g < 0 || g > 1) throw unrepresentable_exponent_error("gamma_flag outside {0,1}");
    if (j < 0) throw unrepresentable_exponent_error("negative log power");
    if (c.is_zero(kPruneTol)) return;
    auto [it, inserted] = terms_.try_emplace(TermExponent{i, g, j}, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero(kPruneTol)) terms_.erase(it);
    }
}

const BoundaryFunction& Series::coeff(int i, int g, int j) const {
    static const BoundaryFunction zero;
    auto it = terms_.find(TermExponent{i, g, j});
    return it == terms_.end() ? zero : it->second;
}

bool Series::has_gamma_terms() const {
    for (const auto& [e, c] : terms_)
        if (e.g != 0) return true;
    return false;
}

int Series::max_int_order() const {
    int m = -1;
    for (const auto& [e, c] : terms_) m = std::max(m, e.i);
    return m;
}

double Series::evaluate(double x, double t) const {
    bool needs_positive_t = false;
    for (const auto& [e, c] : terms_)
        if (e.g != 0 || e.j != 0 || e.i < 0) needs_positive_t = true;
    if (t < 0.0 || (t == 0.0 && needs_positive_t))
        throw eval_domain_error("series evaluation requires t > 0 for log/fractional terms");
    const double gx = gamma_.eval(x);
    const double lt = t > 0.0 ? std::log(t) : 0.0;
    std::vector<double> vals;
    vals.reserve(terms_.size());
    for (const auto& [e, c] : terms_) {
        const double mu = e.i + e.g * gx;
        double v = c.eval(x);
        v *= (t == 0.0) ? (mu == 0.0 ? 1.0 : 0.0) : std::pow(t, mu);
        for (int p = 0; p < e.j; ++p) v *= lt;
        vals.push_back(v);
    }
    return stable_sum(vals);
}

Series Series::shifted_t(int k) const {
    Series out(gamma_);
    for (const auto& [e, c] : terms_) out.add_term(e.i + k, e.g, e.j, c);
    return out;
}

Series Series::scaled(const BoundaryFunction& f) const {
    Series out(gamma_);
    for (const auto& [e, c] : terms_) out.add_term(e.i, e.g, e.j, c * f);
    return out;
}

Series Series::scaled(double s) const {
    Series out(gamma_);
    for (const auto& [e, c] : terms_) out.add_term(e.i, e.g, e.j, c * s);
    return out;
}

Series Series::without_g0_upto(int k) const {
    Series out(gamma_);
    for (const auto& [e, c] : terms_) {
        if (e.g == 0 && e.j == 0 && e.i <= k) continue;
        out.add_term(e.i, e.g, e.j, c);
    }
    return out;
}

Series Series::truncated_above(int max_i) const {
    Series out(gamma_);
    for (const auto& [e, c] : terms_)
        if (e.i <= max_i) out.add_term(e.i, e.g, e.j, c);
    return out;
}

Series series_add(const Series& a, const Series& b) {
    if (!a.terms_.empty() && !b.terms_.empty() && !same_gamma(a.gamma_, b.gamma_))
        throw incompatible_series_error("series_add: mismatched gamma");
    Series out(a.terms_.empty() ? b.gamma_ : a.gamma_);
    for (const auto& [e, c] : a.terms_) out.add_term(e.i, e.g, e.j, c);
    for (const auto& [e, c] : b.terms_) out.add_term(e.i, e.g, e.j, c);
    return out;
}

Series series_mul(const Series& a, const Series& b) {
    if (!a.terms_.empty() && !b.terms_.empty() && !same_gamma(a.gamma_, b.gamma_))
        throw incompatible_series_error("series_mul: mismatched gamma");
    Series out(a.terms_.empty() ? b.gamma_ : a.gamma_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            if (ea.g + eb.g > 1)
                throw unrepresentable_exponent_error(
                    "series_mul: product would carry t^{2 gamma}, outside the lattice");
            out.add_term(ea.i + eb.i, ea.g + eb.g, ea.j + eb.j, ca * cb);
        }
    }
    return out;
}

Series series_diff_t(const Series& s) {
    Series out(s.gamma_);
    for (const auto& [e, c] : s.terms_) {
        // d/dt [c t^mu (log t)^j] = mu c t^{mu-1} (log t)^j + j c t^{mu-1} (log t)^{j-1}
        BoundaryFunction mu = BoundaryFunction::constant(static_cast<double>(e.i));
        if (e.g) mu += s.gamma_;
        out.add_term(e.i - 1, e.g, e.j, c * mu);
        if (e.j > 0) out.add_term(e.i - 1, e.g, e.j - 1, c * static_cast<double>(e.j));
    }
    return out;
}

Series series_diff_x(const Series& s) {
    Series out(s.gamma_);
    const BoundaryFunction dgamma = s.gamma_.derivative();
    for (const auto& [e, c] : s.terms_) {
        out.add_term(e.i, e.g, e.j, c.derivative());
        // D_x t^gamma = t^gamma log t D_x gamma raises the log power
        if (e.g && !dgamma.is_zero()) out.add_term(e.i, e.g, e.j + 1, c * dgamma);
    }
    return out;
}

Series mul_bivariate(const BivariatePoly& a, const Series& s) {
    Series out(s.gamma_);
    for (int k = 0; k <= a.t_degree(); ++k) {
        const BoundaryFunction& ak = a.coeff(k);
        if (ak.is_zero()) continue;
        for (const auto& [e, c] : s.terms_) out.add_term(e.i + k, e.g, e.j, c * ak);
    }
    return out;
}

Series series_from_bivariate(const BivariatePoly& p, const BoundaryFunction& gamma) {
    Series out(gamma);
    for (int k = 0; k <= p.t_degree(); ++k) out.add_term(k, 0, 0, p.coeff(k));
    return out;
}

nlohmann::json Series::to_json() const {
    nlohmann::json j;
    j["basis"] = "chebyshev";
    j["gamma"] = gamma_.cheb();
    j["terms"] = nlohmann::json::array();
    for (const auto& [e, c] : terms_)
        j["terms"].push_back({{"i", e.i}, {"g", e.g}, {"j", e.j}, {"coeff", c.cheb()}});
    return j;
}

Series Series::from_json(const nlohmann::json& j) {
    const std::string basis = j.value("basis", "monomial");
    auto make_bf = [&](const std::vector<double>& coeffs) {
        return basis == "chebyshev" ? BoundaryFunction(std::vector<double>(coeffs))
                                    : BoundaryFunction::from_monomial(coeffs);
    };
    Series out(make_bf(j.at("gamma").get<std::vector<double>>()));
    for (const auto& term : j.at("terms"))
        out.add_term(term.at("i").get<int>(), term.at("g").get<int>(), term.at("j").get<int>(),
                     make_bf(term.at("coeff").get<std::vector<double>>()));
    return out;
}

} // namespace indicial
