#include "indicial/cutoff.hpp"

#include <cmath>

namespace indicial {

namespace {

// Dense Taylor jet: d[k] = f^(k)(z0)/k!
struct Jet {
    std::vector<double> d;
    explicit Jet(int order) : d(order + 1, 0.0) {}
    int order() const { return static_cast<int>(d.size()) - 1; }
};

Jet jet_const(double c, int order) {
    Jet j(order);
    j.d[0] = c;
    return j;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet r(a.order());
    for (int k = 0; k <= a.order(); ++k) r.d[k] = a.d[k] - b.d[k];
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.order());
    for (int k = 0; k <= a.order(); ++k)
        for (int i = 0; i <= k; ++i) r.d[k] += a.d[i] * b.d[k - i];
    return r;
}

Jet reciprocal(const Jet& a) {
    Jet r(a.order());
    r.d[0] = 1.0 / a.d[0];
    for (int k = 1; k <= a.order(); ++k) {
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) acc += a.d[i] * r.d[k - i];
        r.d[k] = -acc * r.d[0];
    }
    return r;
}

Jet jexp(const Jet& a) {
    Jet r(a.order());
    r.d[0] = std::exp(a.d[0]);
    for (int k = 1; k <= a.order(); ++k) {
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) acc += i * a.d[i] * r.d[k - i];
        r.d[k] = acc / k;
    }
    return r;
}

} // namespace

double eta_bump(double z) {
    if (z <= 0.5) return 1.0;
    if (z >= 1.0) return 0.0;
    const double w = 2.0 * z - 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - w * w));
}

std::vector<double> eta_jet(double z, int order) {
    if (z <= 0.5 || z >= 1.0) {
        std::vector<double> out(order + 1, 0.0);
        out[0] = z <= 0.5 ? 1.0 : 0.0;
        return out;
    }
    // w(z) = 2z - 1 as a jet in z, then exp(1 - 1/(1 - w^2))
    Jet w = jet_const(2.0 * z - 1.0, order);
    if (order >= 1) w.d[1] = 2.0;
    const Jet one = jet_const(1.0, order);
    Jet inner = one - reciprocal(one - w * w);
    Jet eta = jexp(inner);
    std::vector<double> out(order + 1);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
        out[k] = eta.d[k] * fact;
        fact *= (k + 1);
    }
    return out;
}

double eta_scaled(double t, double r) { return eta_bump(t / r); }

std::vector<double> eta_scaled_jet(double t, double lambda, int order) {
    auto base = eta_jet(lambda * t, order);
    double pw = 1.0;
    for (int p = 0; p <= order; ++p) {
        base[p] *= pw;
        pw *= lambda;
    }
    return base;
}

} // namespace indicial
