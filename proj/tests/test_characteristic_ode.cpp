#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "indicial/characteristic.hpp"
#include "indicial/errors.hpp"
#include "indicial/ode_core.hpp"
#include "indicial/operator_spec.hpp"

using namespace indicial;

namespace {

BoundaryFunction bf(std::initializer_list<double> mono) {
    return BoundaryFunction::from_monomial(std::vector<double>(mono));
}

// Operator with prescribed indicial roots: a_nn = 1, b_n = 1 - (ml + mu),
// c = ml mu, identity tangential block by default.
OperatorSpec op_from_roots(const BoundaryFunction& ml, const BoundaryFunction& mu,
                           bool with_tangential = true, double r = 1.0) {
    OperatorSpec op;
    op.att = BivariatePoly::constant(1.0);
    op.bt = BivariatePoly::from_bf(BoundaryFunction::constant(1.0) - (ml + mu));
    op.c = BivariatePoly::from_bf(ml * mu);
    op.axx = BivariatePoly::constant(1.0);
    (void)with_tangential;
    op.r = r;
    op.validate();
    return op;
}

double coeff_gap(const Series& a, const Series& b) {
    Series d = series_add(a, b.scaled(-1.0));
    double worst = 0.0;
    for (const auto& [e, c] : d.terms()) worst = std::max(worst, c.sup_norm());
    return worst;
}

} // namespace

TEST_CASE("char_poly direct substitution") {
    auto op = op_from_roots(bf({-0.5}), bf({1.5}), false);
    auto pc = char_poly(op, 0.3);
    CHECK(pc.A == doctest::Approx(1.0));
    CHECK(pc.B == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(pc.C == doctest::Approx(-0.75));
    CHECK(pc.eval(1.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(pc.eval(0.0) == doctest::Approx(-0.75));

    auto op2 = op_from_roots(bf({-1.0}), bf({2.0}), false);
    auto pc2 = char_poly(op2, -0.4);
    CHECK(pc2.B - pc2.A == doctest::Approx(-1.0)); // P = mu^2 - mu - 2
    CHECK(pc2.C == doctest::Approx(-2.0));
}

TEST_CASE("char_poly error paths") {
    OperatorSpec op;
    op.att = BivariatePoly::constant(-1.0);
    op.bt = {};
    op.c = BivariatePoly::constant(-1.0);
    CHECK_THROWS_AS(char_poly(op, 0.0), ellipticity_error);

    OperatorSpec op2;
    op2.att = BivariatePoly::constant(1.0);
    op2.c = BivariatePoly::constant(0.5);
    CHECK_THROWS_AS(char_poly(op2, 0.0), sign_error);
}

TEST_CASE("indicial roots, constant and varying") {
    auto cd = indicial_roots(op_from_roots(bf({-0.5}), bf({1.5})));
    CHECK(cd.m_upper.eval(0.2) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(cd.m_lower.eval(-0.7) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(cd.int_part == 1);
    CHECK(!cd.resonant);
    CHECK(cd.gamma.eval(0.9) == doctest::Approx(0.5).epsilon(1e-12));

    // resonant: P = mu^2 - mu - 2 with roots 2 and -1
    auto cd2 = indicial_roots(op_from_roots(bf({-1.0}), bf({2.0})));
    CHECK(cd2.resonant);
    CHECK(cd2.int_part == 2);

    // varying root constructed from s(x) = 1.5 + 0.2 x
    auto cd3 = indicial_roots(op_from_roots(bf({-0.5}), bf({1.5, 0.2})));
    CHECK(cd3.m_upper.eval(0.5) == doctest::Approx(1.6).epsilon(1e-10));
    CHECK(cd3.gamma.eval(-0.5) == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(cd3.int_part == 1);
}

TEST_CASE("indicial roots reject out-of-scope exponents") {
    // m_upper crosses an integer on the strip
    CHECK_THROWS_AS(indicial_roots(op_from_roots(bf({-0.5}), bf({2.0, 0.3}))),
                    varying_integer_part_error);
    // gamma pinned too close to an integer
    CHECK_THROWS_AS(indicial_roots(op_from_roots(bf({-0.5}), bf({1.0 + 2e-4}))),
                    near_integer_exponent_error);
}

TEST_CASE("p and q from the roots") {
    auto cd = indicial_roots(op_from_roots(bf({-0.5}), bf({1.5})));
    auto [p, q] = p_q_from_roots(cd);
    CHECK(p.eval(0.1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q.eval(0.1) == doctest::Approx(-0.75).epsilon(1e-12));

    auto cd2 = indicial_roots(op_from_roots(bf({-1.0}), bf({2.0})));
    auto [p2, q2] = p_q_from_roots(cd2);
    CHECK(p2.eval(-0.3) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q2.eval(-0.3) == doctest::Approx(-2.0).epsilon(1e-12));

    auto cd3 = indicial_roots(op_from_roots(bf({-0.5}), bf({1.5, 0.2})));
    auto [p3, q3] = p_q_from_roots(cd3);
    CHECK(p3.eval(0.5) == doctest::Approx(-0.1).epsilon(1e-10)); // -0.2 x
    CHECK(q3.eval(0.5) == doctest::Approx(-0.8).epsilon(1e-10)); // -0.75 - 0.1 x
}

TEST_CASE("roots annihilate the model operator") {
    for (auto mu_spec : {bf({1.5}), bf({1.5, 0.2}), bf({2.3, -0.15})}) {
        auto cd = indicial_roots(op_from_roots(bf({-0.5, 0.1}), mu_spec));
        auto ode = model_ode_from(cd, 1.0);

        // t^{m_upper} lives on the series lattice
        Series hom(ode.gamma);
        hom.add_term(ode.int_part, 1, 0, BoundaryFunction::constant(1.0));
        auto rep = verify_residual(ode, hom, Series(ode.gamma), 0.05);
        CHECK(rep.max_abs < 1e-10);

        // t^{m_lower} checked through the exact characteristic identity
        for (double x : {-0.9, 0.0, 0.6}) {
            const double ml = ode.m_lower.eval(x);
            const double pt = (ml - ode.m_lower.eval(x)) * (ml - ode.m_upper.eval(x));
            for (double t : {0.05, 0.4, 0.9})
                CHECK(std::abs(pt * std::pow(t, ml)) < 1e-10);
        }

        // re-solving mu^2 + (p-1) mu + q = 0 recovers the roots
        for (double x : {-0.8, 0.3}) {
            const double pv = ode.p.eval(x), qv = ode.q.eval(x);
            const double disc = std::sqrt((pv - 1.0) * (pv - 1.0) - 4.0 * qv);
            const double up = (-(pv - 1.0) + disc) / 2.0;
            const double lo = (-(pv - 1.0) - disc) / 2.0;
            CHECK(std::abs(up - ode.m_upper.eval(x)) < 1e-10);
            CHECK(std::abs(lo - ode.m_lower.eval(x)) < 1e-10);
        }
    }
}

TEST_CASE("solve_term worked examples and round trips") {
    auto cd = indicial_roots(op_from_roots(bf({-0.5}), bf({1.5}), false));
    auto ode = model_ode_from(cd, 1.0);

    // rhs = t^2 -> 0.8 t^2
    Term rhs{TermExponent{2, 0, 0}, BoundaryFunction::constant(1.0)};
    auto sol = solve_term(ode, rhs);
    REQUIRE(sol.size() == 1);
    CHECK(sol[0].coeff.eval(0.0) == doctest::Approx(0.8).epsilon(1e-13));

    // resonant: roots -1, 2, rhs = t^2 -> (1/3) t^2 log t
    auto cd2 = indicial_roots(op_from_roots(bf({-1.0}), bf({2.0}), false));
    auto ode2 = model_ode_from(cd2, 1.0);
    auto sol2 = solve_term(ode2, rhs);
    REQUIRE(sol2.size() == 1);
    CHECK(sol2[0].e.j == 1);
    CHECK(sol2[0].e.i == 2);
    CHECK(sol2[0].coeff.eval(0.4) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

    // log cascade: rhs = t^{2.5} log t -> (1/3) t^{2.5} log t - (4/9) t^{2.5}
    Term rhs3{TermExponent{2, 1, 1}, BoundaryFunction::constant(1.0)};
    auto sol3 = solve_term(ode, rhs3);
    REQUIRE(sol3.size() == 2);
    CHECK(sol3[1].coeff.eval(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(sol3[0].coeff.eval(0.0) == doctest::Approx(-4.0 / 9.0).epsilon(1e-12));

    // round trip through the model operator: the definitive oracle
    for (const auto& [o, rhs_term] :
         std::vector<std::pair<const ModelODE*, Term>>{{&ode, rhs}, {&ode, rhs3}}) {
        Series u(o->gamma);
        for (const auto& term : solve_term(*o, rhs_term)) u.add_term(term.e.i, term.e.g, term.e.j, term.coeff);
        Series back = o->apply(u);
        Series want(o->gamma);
        want.add_term(rhs_term.e.i, rhs_term.e.g, rhs_term.e.j, rhs_term.coeff);
        CHECK(coeff_gap(back, want) < 1e-12);
    }
    {
        Series u(ode2.gamma);
        for (const auto& term : solve_term(ode2, rhs)) u.add_term(term.e.i, term.e.g, term.e.j, term.coeff);
        Series back = ode2.apply(u);
        Series want(ode2.gamma);
        want.add_term(2, 0, 0, BoundaryFunction::constant(1.0));
        CHECK(coeff_gap(back, want) < 1e-12);
    }
}

TEST_CASE("solve_term is linear and flags bad resonance") {
    auto cd = indicial_roots(op_from_roots(bf({-0.5}), bf({1.5, 0.2})));
    auto ode = model_ode_from(cd, 1.0);
    Term rhs{TermExponent{3, 1, 2}, bf({1.0, 0.5})};
    auto base = solve_term(ode, rhs);
    Term scaled_rhs{rhs.e, rhs.coeff * 3.25};
    auto scaled = solve_term(ode, scaled_rhs);
    REQUIRE(base.size() == scaled.size());
    for (size_t k = 0; k < base.size(); ++k) {
        BoundaryFunction d = base[k].coeff * 3.25 - scaled[k].coeff;
        CHECK(d.sup_norm() < 1e-13 * 3.25 * std::max(1.0, base[k].coeff.sup_norm()));
    }

    // mu = int_part + gamma hits m_upper -> resonance error in a non-resonant setup
    Term bad{TermExponent{cd.int_part, 1, 0}, BoundaryFunction::constant(1.0)};
    CHECK_THROWS_AS(solve_term(ode, bad), resonance_error);

    // resonant setup with a log-carrying block is unsupported
    auto cd2 = indicial_roots(op_from_roots(bf({-1.0}), bf({2.0}), false));
    auto ode2 = model_ode_from(cd2, 1.0);
    Term bad2{TermExponent{2, 0, 1}, BoundaryFunction::constant(1.0)};
    CHECK_THROWS_AS(solve_term(ode2, bad2), unsupported_resonance_error);
}

TEST_CASE("quadrature solve: homogeneous data propagation") {
    auto cd = indicial_roots(op_from_roots(bf({-0.5}), bf({1.5}), false));
    auto ode = model_ode_from(cd, 1.0);
    auto zero_F = [](double, double) { return 0.0; };

    std::vector<double> ts{0.05, 0.2, 0.5, 0.9};
    auto u1 = solve_quadrature(ode, zero_F, BoundaryFunction::constant(1.0), 0.0, ts);
    for (size_t k = 0; k < ts.size(); ++k)
        CHECK(u1[k] == doctest::Approx(std::pow(ts[k], 1.5)).epsilon(1e-12));

    const double r = 0.8;
    auto ode2 = ode;
    ode2.r = r;
    std::vector<double> ts2{0.05, 0.2, 0.5, 0.8};
    auto u2 = solve_quadrature(ode2, zero_F, BoundaryFunction::constant(1.0), 0.0, ts2);
    for (size_t k = 0; k < ts2.size(); ++k)
        CHECK(u2[k] == doctest::Approx(std::pow(ts2[k] / r, 1.5)).epsilon(1e-12));
}

TEST_CASE("quadrature and series solvers agree up to homogeneous modes") {
    auto cd = indicial_roots(op_from_roots(bf({-0.5}), bf({1.5}), false));
    auto ode = model_ode_from(cd, 1.0);
    auto F = [](double, double t) { return t * t; };
    std::vector<double> ts;
    for (double t = 0.05; t <= 1.0; t += 0.016) ts.push_back(t);
    auto u = solve_quadrature(ode, F, BoundaryFunction::constant(1.3), 0.0, ts);

    // with data matching the particular solution exactly, the quadrature
    // reproduces 0.8 t^2 pointwise
    auto u_match = solve_quadrature(ode, F, BoundaryFunction::constant(0.8), 0.0, ts);
    for (size_t k = 0; k < ts.size(); ++k)
        CHECK(std::abs(u_match[k] - 0.8 * ts[k] * ts[k]) < 1e-11);

    // least-squares fit of u - 0.8 t^2 onto span{t^{-1/2}, t^{3/2}}
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0, norm = 0;
    for (size_t k = 0; k < ts.size(); ++k) {
        const double p1 = std::pow(ts[k], -0.5), p2 = std::pow(ts[k], 1.5);
        const double y = u[k] - 0.8 * ts[k] * ts[k];
        a11 += p1 * p1;
        a12 += p1 * p2;
        a22 += p2 * p2;
        b1 += p1 * y;
        b2 += p2 * y;
        norm += y * y;
    }
    const double det = a11 * a22 - a12 * a12;
    const double c1 = (b1 * a22 - b2 * a12) / det;
    const double c2 = (a11 * b2 - a12 * b1) / det;
    double misfit = 0.0;
    for (size_t k = 0; k < ts.size(); ++k) {
        const double y = u[k] - 0.8 * ts[k] * ts[k] - c1 * std::pow(ts[k], -0.5) -
                         c2 * std::pow(ts[k], 1.5);
        misfit += y * y;
    }
    CHECK(std::sqrt(misfit / std::max(norm, 1e-30)) < 1e-6);
}

TEST_CASE("quadrature flags non-integrable forcing") {
    auto cd = indicial_roots(op_from_roots(bf({-0.5}), bf({1.5}), false));
    auto ode = model_ode_from(cd, 1.0);
    auto slow = [](double, double t) { return std::pow(t, 0.5); }; // decays slower than t^{1.5}
    std::vector<double> ts{0.5};
    CHECK_THROWS_AS(solve_quadrature(ode, slow, BoundaryFunction::constant(0.0), 0.0, ts),
                    integrability_error);
}

TEST_CASE("assemble_F on the pure model operator") {
    auto op = op_from_roots(bf({-0.5}), bf({1.5}), false);
    auto cd = indicial_roots(op);
    auto ode = model_ode_from(cd, 1.0);

    Series u(ode.gamma);
    u.add_term(1, 1, 0, BoundaryFunction::constant(1.0)); // t^{m_upper}
    auto F = assemble_F(op, ode, Series(ode.gamma), u, 8);
    CHECK(F.empty());
}

TEST_CASE("series application of the flat Example operator") {
    // L = t^2 (d_xx + d_tt) + c with c = -s(s-1), s = 1.5: L(psi t^s) = psi'' t^{s+2}
    auto op = op_from_roots(bf({-0.5}), bf({1.5}), true);
    auto psi = bf({1.0, 0.0, 1.0}); // 1 + x^2
    Series u(BoundaryFunction::constant(0.5));
    u.add_term(1, 1, 0, psi);
    Series f = op.apply(u);
    REQUIRE(f.size() == 1);
    CHECK(!f.coeff(3, 1, 0).is_zero());
    CHECK(f.coeff(3, 1, 0).eval(0.3) == doctest::Approx(2.0).epsilon(1e-12));

    // cross-check by pointwise finite-difference application of L
    auto ueval = [&](double x, double t) { return u.evaluate(x, t); };
    for (double x : {-0.5, 0.4}) {
        for (double t : {0.3, 0.7}) {
            CHECK(op.apply_pointwise(ueval, x, t) ==
                  doctest::Approx(f.evaluate(x, t)).epsilon(1e-5));
        }
    }

    // the assembled model right side vanishes: L u = f exactly
    auto cd = indicial_roots(op);
    auto ode = model_ode_from(cd, 1.0);
    auto F = assemble_F(op, ode, f, u, 8);
    Series mu_applied = ode.apply(u);
    CHECK(coeff_gap(F, mu_applied) < 1e-12);
}

TEST_CASE("varying gamma feeds log-squared blocks into F") {
    // pure tangential Laplacian block with varying gamma, u = t^gamma, f = 0
    auto op = op_from_roots(bf({-0.5}), bf({1.5, 0.2}), true);
    auto cd = indicial_roots(op);
    auto ode = model_ode_from(cd, 1.0);
    Series u(ode.gamma);
    u.add_term(0, 1, 0, bf({0.0, 1.0})); // psi = x so both log blocks appear
    auto F = assemble_F(op, ode, Series(ode.gamma), u, 8);
    CHECK(!F.coeff(2, 1, 2).is_zero(1e-14));
    CHECK(!F.coeff(2, 1, 1).is_zero(1e-14));
}

TEST_CASE("verify_residual round trips") {
    auto op = op_from_roots(bf({-0.5}), bf({1.5, 0.2}), true);
    auto cd = indicial_roots(op);
    auto ode = model_ode_from(cd, 1.0);

    Series hom(ode.gamma);
    hom.add_term(1, 1, 0, BoundaryFunction::constant(1.0));
    CHECK(verify_residual(ode, hom, Series(ode.gamma)).max_abs < 1e-10);

    // random polynomial u against its own assembled f
    Series u(ode.gamma);
    u.add_term(0, 0, 0, bf({0.3, -1.0}));
    u.add_term(2, 0, 0, bf({1.0, 0.5, 0.25}));
    u.add_term(3, 0, 0, bf({-0.7}));
    Series f = op.apply(u);
    CHECK(verify_residual(op, u, f).max_abs < 1e-9);
}
