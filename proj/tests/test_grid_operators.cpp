#include <doctest.h>

#include "hklab/operators.hpp"
#include "hklab/spectral.hpp"

using namespace hklab;

TEST_CASE("grid: 1D interval nodes without stagger") {
    const auto g = build_grid(DomainSpec::unit_box(1), 0.25, false);
    REQUIRE(g->n() == 3);
    std::vector<double> xs;
    for (const auto& p : g->pos) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    CHECK(xs[0] == doctest::Approx(0.25));
    CHECK(xs[1] == doctest::Approx(0.5));
    CHECK(xs[2] == doctest::Approx(0.75));
}

TEST_CASE("grid: unit square 3x3 lattice and resolution gate") {
    const auto g = build_grid(DomainSpec::unit_box(2), 0.25, false);
    CHECK(g->n() == 9);
    CHECK_THROWS_AS(build_grid(DomainSpec::unit_box(2), 0.3, false), std::invalid_argument);
}

TEST_CASE("grid: ball node count approximates the volume") {
    const auto g = build_grid(DomainSpec::ball_domain(3, 1.0), 0.1, true);
    const double expected = (4.0 * M_PI / 3.0) / (0.1 * 0.1 * 0.1);
    CHECK(std::abs(g->n() - expected) <= 0.02 * expected);
    // staggered nodes avoid the origin and the boundary
    for (int i = 0; i < g->n(); ++i) {
        CHECK(g->normx[i] > 0);
        CHECK(g->dist[i] > 0);
    }
}

TEST_CASE("assemble: forms are exactly symmetric with positive measure") {
    const auto g = build_grid(DomainSpec::unit_box(2), 1.0 / 16, true);
    for (Family fam : {Family::laplace, Family::H}) {
        const auto op = assemble(g, fam);
        const SpMat diff = SpMat(op.A - SpMat(op.A.transpose()));
        CHECK(diff.coeffs().cwiseAbs().maxCoeff() == 0.0);
        CHECK(op.m.minCoeff() > 0);
    }
}

TEST_CASE("assemble: 1D Dirichlet Laplacian matches the classical spectrum") {
    const double h = 0.25;
    const auto g = build_grid(DomainSpec::unit_box(1), h, false);
    const auto op = assemble(g, Family::laplace);
    const auto sd = principal_eigenpair(op, 1e-12);
    CHECK(sd.lambda1 == doctest::Approx((2 / (h * h)) * (1 - std::cos(M_PI * h))).epsilon(1e-10));
}

TEST_CASE("assemble: H diagonal carries the boundary potential") {
    const auto g = build_grid(DomainSpec::unit_box(2), 1.0 / 8, true);
    const auto lap = assemble(g, Family::laplace);
    const auto H = assemble(g, Family::H);
    for (int i = 0; i < g->n(); ++i) {
        const double got = H.A.coeff(i, i) - lap.A.coeff(i, i);
        const double expect = -0.25 / sqr(g->dist[i]) * sqr(g->h);
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("assemble: weighted family with unit weight reduces to the Dirichlet stencil") {
    const auto g = build_grid(DomainSpec::unit_box(2), 1.0 / 12, true);
    const auto lap = assemble(g, Family::laplace);
    OperatorParams params;  // lambda = alpha = 0
    const auto lw = assemble(g, Family::Lweighted, params);
    const SpMat diff = SpMat(lap.A - lw.A);
    CHECK(diff.coeffs().cwiseAbs().maxCoeff() == 0.0);
    CHECK((lap.m - lw.m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assemble: parameter gates") {
    const auto g2 = build_grid(DomainSpec::unit_box(2), 1.0 / 12, true);
    CHECK_THROWS_AS(assemble(g2, Family::K), std::invalid_argument);  // needs N >= 3
    OperatorParams bad;
    bad.c = 0.3;  // > 1/4
    CHECK_THROWS_AS(assemble(g2, Family::Hc, bad), std::invalid_argument);
    OperatorParams badw;
    badw.weight.lambda = -2.5;  // <= -N
    CHECK_THROWS_AS(assemble(g2, Family::Lweighted, badw), std::invalid_argument);
}

TEST_CASE("assemble: form consistency at second order for smooth test data") {
    // smooth bump compactly supported away from the boundary
    auto bump = [](const Vec& p) {
        const double q = (p - Vec::Constant(2, 0.5)).squaredNorm() / (0.35 * 0.35);
        return q < 1 ? std::exp(-1.0 / (1.0 - q)) : 0.0;
    };
    auto energy_at = [&](double h) {
        const auto g = build_grid(DomainSpec::unit_box(2), h, true);
        const auto op = assemble(g, Family::laplace);
        Vec u(g->n());
        for (int i = 0; i < g->n(); ++i) u[i] = bump(g->pos[i]);
        return op.form(u);
    };
    const double e0 = energy_at(1.0 / 24), e1 = energy_at(1.0 / 48), e2 = energy_at(1.0 / 96);
    CHECK(std::abs(e0 - e1) / std::abs(e1 - e2) >= 2.5);  // Richardson rate ~ O(h^2)
}

TEST_CASE("assemble: potential spec bound is enforced for family E") {
    const auto g = build_grid(DomainSpec::unit_box(2), 1.0 / 12, true);
    OperatorParams params;
    PotentialSpec pot;
    pot.V1 = [&](const Vec& x) { return 0.5 / sqr(distance(g->domain, x)); };  // violates 1/4
    pot.V2 = [](const Vec&) { return 0.0; };
    pot.p = 2.0;
    params.potential = pot;
    CHECK_THROWS_AS(assemble(g, Family::E, params), std::invalid_argument);
    pot.V1 = [&](const Vec& x) { return 0.2 / sqr(distance(g->domain, x)); };
    params.potential = pot;
    const auto op = assemble(g, Family::E, params);
    CHECK(op.m.minCoeff() > 0);
}

TEST_CASE("ground-state transform: flux form kills constants exactly") {
    const auto g = build_grid(DomainSpec::unit_box(1), 1.0 / 64, true);
    const auto op = assemble(g, Family::H);
    const auto sd = principal_eigenpair(op, 1e-12);
    const auto tilde = ground_state_transform(op, sd);
    const Vec ones = Vec::Ones(tilde.n());
    CHECK((tilde.A * ones).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(tilde.form(ones) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(tilde.m.minCoeff() > 0);
}

TEST_CASE("ground-state transform: conjugated smallest eigenvalue is ~0") {
    const auto g = build_grid(DomainSpec::unit_box(1), 1.0 / 64, false);
    const auto op = assemble(g, Family::laplace);
    const auto sd = principal_eigenpair(op, 1e-12);
    // phi1 ~ sin(pi x) on the interval
    const auto tilde = ground_state_transform(op, sd);
    const auto sd2 = principal_eigenpair(tilde, 1e-10);
    CHECK(std::abs(sd2.lambda1) <= 1e-8);
}

TEST_CASE("ground-state transform: conjugation defect decreases first order") {
    auto defect_at = [](double h) {
        const auto g = build_grid(DomainSpec::unit_box(1), h, true);
        const auto op = assemble(g, Family::H);
        const auto sd = principal_eigenpair(op, 1e-12);
        const auto tilde = ground_state_transform(op, sd);
        Vec probe(g->n());
        for (int i = 0; i < g->n(); ++i) probe[i] = 1.0 + 0.5 * std::sin(2 * M_PI * g->pos[i][0]);
        return conjugation_defect(op, tilde, sd, probe);
    };
    const double d1 = defect_at(1.0 / 64), d2 = defect_at(1.0 / 128);
    CHECK(d2 <= 0.7 * d1);
}
