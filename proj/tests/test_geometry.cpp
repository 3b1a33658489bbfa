#include <doctest.h>

#include <random>

#include "hklab/geometry.hpp"

using namespace hklab;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

}  // namespace

TEST_CASE("distance: ball center, box midpoint, triangle vs brute force") {
    const auto ball = DomainSpec::ball_domain(3, 1.0);
    CHECK(distance(ball, vec3(0, 0, 0)) == doctest::Approx(1.0));

    const auto square = DomainSpec::unit_box(2);
    CHECK(distance(square, vec2(0.5, 0.5)) == doctest::Approx(0.5));

    const auto tri = DomainSpec::polygon_domain({{0, 0}, {1, 0}, {0, 1}});
    const Vec p = vec2(0.25, 0.25);
    const double d = distance(tri, p);
    // brute force: min over densely sampled boundary points
    double brute = 1e9;
    for (int i = 0; i <= 20000; ++i) {
        const double t = i / 20000.0;
        brute = std::min(brute, (p - vec2(t, 0)).norm());
        brute = std::min(brute, (p - vec2(0, t)).norm());
        brute = std::min(brute, (p - vec2(t, 1 - t)).norm());
    }
    CHECK(d == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("distance rejects points outside the closure") {
    const auto square = DomainSpec::unit_box(2);
    CHECK_THROWS_AS(distance(square, vec2(1.2, 0.5)), std::domain_error);
}

TEST_CASE("distance calculus: ball closed form and eikonal identity") {
    const auto ball = DomainSpec::ball_domain(3, 1.0);
    const Vec x = vec3(0.3, 0.4, 0.0);  // |x| = 0.5
    const auto dc = distance_calculus(ball, x);
    CHECK(dc.grad.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((dc.grad + x / 0.5).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dc.lap == doctest::Approx(-4.0).epsilon(1e-12));

    // finite-difference oracle for grad and lap
    const double h = 1e-5;
    double lap_fd = 0.0;
    for (int k = 0; k < 3; ++k) {
        Vec xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const double dp = distance(ball, xp), dm = distance(ball, xm), d0 = distance(ball, x);
        lap_fd += (dp - 2 * d0 + dm) / (h * h);
        CHECK(dc.grad[k] == doctest::Approx((dp - dm) / (2 * h)).epsilon(1e-5));
    }
    CHECK(lap_fd == doctest::Approx(-4.0).epsilon(1e-4));

    CHECK_THROWS_AS(distance_calculus(ball, vec3(0, 0, 0)), std::domain_error);
}

TEST_CASE("distance calculus: box face normal and ridge error") {
    const auto square = DomainSpec::unit_box(2);
    const auto dc = distance_calculus(square, vec2(0.3, 0.1));
    CHECK(dc.grad[0] == doctest::Approx(0.0));
    CHECK(dc.grad[1] == doctest::Approx(1.0));
    CHECK(dc.lap == doctest::Approx(0.0));
    CHECK_THROWS_AS(distance_calculus(square, vec2(0.5, 0.5)), std::domain_error);
}

TEST_CASE("eikonal property across shapes") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const auto shapes = {DomainSpec::ball_domain(2, 1.0), DomainSpec::ellipse_domain(1.0, 0.6),
                         DomainSpec::polygon_domain({{0, 0}, {1.2, 0}, {1.5, 1}, {0.2, 1.1}})};
    for (const auto& dom : shapes) {
        int checked = 0;
        const Vec lo = dom.bbox_lo(), hi = dom.bbox_hi();
        while (checked < 50) {
            Vec x(2);
            for (int k = 0; k < 2; ++k) x[k] = lo[k] + 0.5 * (unif(rng) + 1) * (hi[k] - lo[k]);
            if (!contains(dom, x)) continue;
            if (distance(dom, x) < 1e-3) continue;
            try {
                const auto dc = distance_calculus(dom, x);
                CHECK(dc.grad.norm() == doctest::Approx(1.0).epsilon(1e-6));
                ++checked;
            } catch (const std::domain_error&) {
                // ridge points are skipped
            }
        }
    }
}

TEST_CASE("make_ball dichotomy is exact") {
    const auto square = DomainSpec::unit_box(2);
    const auto b1 = make_ball(square, vec2(0.5, 0.5), 0.1, 1.5);
    CHECK(b1.kind == BallKind::euclidean);  // d = 0.5 >= 0.15
    const auto b2 = make_ball(square, vec2(0.5, 0.05), 0.1, 1.5);
    CHECK(b2.kind == BallKind::boundary_adapted);
    CHECK(b2.boundary_point[0] == doctest::Approx(0.5));
    CHECK(b2.boundary_point[1] == doctest::Approx(0.0));
    // exact switch at d(x) = gamma r (dyadic inputs so the threshold is exact)
    const auto b3 = make_ball(square, vec2(0.5, 0.09375), 0.0625, 1.5);
    CHECK(b3.kind == BallKind::euclidean);
    const auto b4 = make_ball(square, vec2(0.5, 0.09375 - 1e-12), 0.0625, 1.5);
    CHECK(b4.kind == BallKind::boundary_adapted);
    CHECK_THROWS_AS(make_ball(square, vec2(0.5, 0.5), 0.2, 1.5), std::invalid_argument);
}

TEST_CASE("boundary-adapted ball membership on the sphere chart") {
    const auto ball = DomainSpec::ball_domain(3, 1.0);
    const auto b = make_ball(ball, vec3(0, 0, 0.95), 0.1, 1.5);
    CHECK(b.kind == BallKind::boundary_adapted);
    CHECK(b.member(ball, vec3(0, 0, 0.99)));
    CHECK(!b.member(ball, vec3(0.3, 0, 0.95)));
}

TEST_CASE("weighted volume: Lebesgue ball and exact radial integral") {
    const auto square = DomainSpec::unit_box(2);
    const auto b = make_ball(square, vec2(0.5, 0.5), 0.1);
    const double v = weighted_volume(square, {0.0, 0.0}, b, 0.005);
    CHECK(v == doctest::Approx(M_PI * 0.01).epsilon(0.01));

    const auto ball3 = DomainSpec::ball_domain(3, 1.0);
    const auto b0 = make_ball(ball3, vec3(0, 0, 0), 0.1);
    const double vr = weighted_volume(ball3, {-1.0, 0.0}, b0, 0.002, 6);
    CHECK(vr == doctest::Approx(2 * M_PI * 0.01).epsilon(0.01));
}

TEST_CASE("volume envelope fit: unweighted interior samples give c1=c2=|B1|") {
    const auto square = DomainSpec::unit_box(2);
    std::vector<std::pair<Vec, double>> samples;
    samples.emplace_back(vec2(0.5, 0.5), 0.05);
    samples.emplace_back(vec2(0.4, 0.6), 0.08);
    samples.emplace_back(vec2(0.6, 0.45), 0.06);
    const auto fit = volume_envelope_fit(square, {0.0, 0.0}, samples, 0.005);
    CHECK(fit.feasible);
    CHECK(fit.c1 == doctest::Approx(M_PI).epsilon(0.02));
    CHECK(fit.c2 == doctest::Approx(M_PI).epsilon(0.02));
}

TEST_CASE("volume envelope and doubling: weighted boundary samples stay sandwiched") {
    const auto square = DomainSpec::unit_box(2);
    Halton seq(3);
    std::vector<std::pair<Vec, double>> samples;
    while (samples.size() < 25) {
        const Vec u = seq.next();
        const Vec x = vec2(u[0], u[1]);
        if (!contains(square, x) || distance(square, x) <= 0) continue;
        samples.emplace_back(x, 0.01 + 0.045 * u[2]);
    }
    const auto fit = volume_envelope_fit(square, {0.0, 1.0}, samples, 0.02);
    CHECK(fit.feasible);
    CHECK(fit.c1 > 0);
    CHECK(std::isfinite(fit.c2));
    for (const auto& s : fit.samples) {
        CHECK(s.ratio >= fit.c1 * (1 - 1e-12));
        CHECK(s.ratio <= fit.c2 * (1 + 1e-12));
    }
    const auto dres = doubling_constant(square, {0.0, 1.0}, samples, 0.02);
    CHECK(std::isfinite(dres.C_D));
    CHECK(dres.C_D > 1.0);
}

TEST_CASE("doubling of Lebesgue measure is 2^N on interior samples") {
    const auto square = DomainSpec::unit_box(2);
    std::vector<std::pair<Vec, double>> samples{{vec2(0.5, 0.5), 0.05}, {vec2(0.45, 0.55), 0.04}};
    const auto dres = doubling_constant(square, {0.0, 0.0}, samples, 0.005);
    CHECK(dres.C_D == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("condition check on the ball matches the symbolic value") {
    const auto ball = DomainSpec::ball_domain(3, 1.0);
    const auto rep = check_condition_cond(ball, 25);
    CHECK(rep.holds);
    for (const auto& [x, value] : rep.values)
        CHECK(value == doctest::Approx(std::pow(x.norm(), -2.0)).epsilon(1e-3));
}

TEST_CASE("weight convention: alpha = 0 weights ignore the boundary") {
    const auto square = DomainSpec::unit_box(2);
    CHECK(weight_value(square, {0.0, 0.0}, vec2(0.0, 0.5)) == doctest::Approx(1.0));
    CHECK(weight_value(square, {0.0, 1.0}, vec2(0.0, 0.5)) == doctest::Approx(0.0));
    CHECK(weight_value(square, {-1.0, 0.0}, vec2(0.5, 0.0)) == doctest::Approx(2.0));
}
