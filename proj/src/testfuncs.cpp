#include "hklab/testfuncs.hpp"

#include <cmath>
#include <random>

namespace hklab {

namespace {

// smooth profile rising from 0 at t=0 to 1 at t>=1
double ramp(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    return t * t * (3 - 2 * t);
}

Vec tensor_sine(const Grid& g, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> mode(1, 3);
    const Vec blo = g.domain.bbox_lo(), bhi = g.domain.bbox_hi();
    std::vector<int> mk(g.dim);
    for (int k = 0; k < g.dim; ++k) mk[k] = mode(rng);
    Vec u(g.n());
    for (int i = 0; i < g.n(); ++i) {
        double v = 1.0;
        for (int k = 0; k < g.dim; ++k) {
            const double s = (g.pos[i][k] - blo[k]) / (bhi[k] - blo[k]);
            v *= std::sin(mk[k] * M_PI * s);
        }
        u[i] = v;
    }
    return u;
}

Vec mollified_random(const Grid& g, std::mt19937_64& rng, double dampen_scale) {
    const Vec f = smooth_random_field(g.pos, rng(), 5, 3.0);
    Vec u(g.n());
    for (int i = 0; i < g.n(); ++i) u[i] = f[i] * ramp(g.dist[i] / dampen_scale);
    return u;
}

Vec radial_bump(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Vec blo = g.domain.bbox_lo(), bhi = g.domain.bbox_hi();
    // deterministic retry until the bump covers enough nodes
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vec c(g.dim);
        for (int k = 0; k < g.dim; ++k) c[k] = blo[k] + unif(rng) * (bhi[k] - blo[k]);
        if (!contains(g.domain, c) || distance(g.domain, c) < 4 * g.h) continue;
        const double w = std::max(0.25 * distance(g.domain, c), 6 * g.h);
        Vec u(g.n());
        int nz = 0;
        for (int i = 0; i < g.n(); ++i) {
            const double q = (g.pos[i] - c).squaredNorm() / (w * w);
            u[i] = q < 1 ? sqr(1 - q) : 0.0;
            nz += u[i] != 0;
        }
        if (nz >= 8) return u;
    }
    throw std::runtime_error("radial bump generator failed to place a bump");
}

Vec boundary_layer(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    const double delta = unif(rng) * 0.15 * g.domain.inradius();
    const Vec mod = smooth_random_field(g.pos, rng(), 3, 1.5);
    Vec u(g.n());
    for (int i = 0; i < g.n(); ++i) {
        const double d = g.dist[i];
        u[i] = std::pow(d, 0.6) * std::exp(-d / delta) * (1.5 + 0.5 * mod[i]);
    }
    return u;
}

}  // namespace

std::vector<Vec> generate_family(const Grid& grid, int count, std::uint64_t seed,
                                 SupportConstraint constraint) {
    std::mt19937_64 rng(seed);
    std::vector<Vec> family;
    family.reserve(count);
    const double dampen =
        constraint == SupportConstraint::free_on_boundary ? 1e-12 : 0.1 * grid.domain.inradius();
    for (int i = 0; i < count; ++i) {
        Vec u;
        switch (i % 4) {
            case 0: u = tensor_sine(grid, rng); break;
            case 1: u = mollified_random(grid, rng, dampen); break;
            case 2: u = radial_bump(grid, rng); break;
            default: u = boundary_layer(grid, rng); break;
        }
        if (u.cwiseAbs().maxCoeff() <= 0) throw std::runtime_error("generated a zero test function");
        u /= u.cwiseAbs().maxCoeff();
        family.push_back(std::move(u));
    }
    return family;
}

std::vector<Vec> generate_ball_family(const Grid& grid, const BallSpec& ball, int count,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vec> family;
    family.reserve(count);
    // wall profile: 1 at the ball center scale, 0 at the ball walls; for the
    // adapted kind the offset window plays the role of the radial coordinate
    auto wall = [&](const Vec& y) -> double {
        if (ball.kind == BallKind::euclidean) {
            const double q = (y - ball.center).norm() / ball.r;
            return q < 1 ? sqr(1 - q * q) : 0.0;
        }
        double prof = 1.0;
        for (int k = 0; k < ball.tangent.rows(); ++k) {
            const double q = std::abs(ball.tangent.row(k).dot(y - ball.boundary_point)) / ball.r;
            if (q >= 1) return 0.0;
            prof *= sqr(1 - q * q);
        }
        const double z = contains(grid.domain, y) ? distance(grid.domain, y)
                                                  : ball.outward_normal.dot(ball.boundary_point - y);
        const double q = (z - ball.center_dist) / ball.r;  // in (-1, 1) inside the window
        if (q <= -1 || q >= 1) return 0.0;
        // vanish at the top/bottom walls of the offset window, not at z = 0
        return prof * sqr(1 - q * q);
    };
    for (int i = 0; i < count; ++i) {
        const Vec mod = smooth_random_field(grid.pos, rng(), 4, 2.0 / std::max(ball.r, 1e-12));
        Vec u = Vec::Zero(grid.n());
        bool nonzero = false;
        for (int j = 0; j < grid.n(); ++j) {
            const double wprof = wall(grid.pos[j]);
            if (wprof == 0.0) continue;
            u[j] = wprof * (1.25 + 0.75 * std::tanh(mod[j]));
            nonzero = true;
        }
        if (!nonzero) throw std::runtime_error("ball family member has empty support");
        family.push_back(std::move(u));
    }
    return family;
}

}  // namespace hklab
