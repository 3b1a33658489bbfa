#include "hklab/harnack.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hklab {

Cylinder make_cylinder(const GridPtr& grid, const Vec& x, double r, double gamma,
                       int samples_per_window) {
    Cylinder cyl;
    cyl.center = x;
    cyl.r = r;
    cyl.samples_per_window = samples_per_window;
    cyl.base = make_ball(grid->domain, x, r / 2, gamma);
    for (int i = 0; i < grid->n(); ++i)
        if (cyl.base.member(grid->domain, grid->pos[i])) cyl.base_nodes.push_back(i);
    if (cyl.base_nodes.empty())
        throw std::invalid_argument("cylinder base contains no grid nodes");
    const double r2 = r * r;
    for (int j = 0; j < samples_per_window; ++j) {
        const double f = (j + 0.5) / samples_per_window;
        cyl.early_times.push_back(r2 * (0.25 + 0.25 * f));
        cyl.late_times.push_back(r2 * (0.75 + 0.25 * f));
    }
    return cyl;
}

PositiveField generate_positive_solution(const WeightedOperator& op, std::uint64_t seed,
                                         std::vector<double> sample_times, EvolveOptions opts) {
    std::sort(sample_times.begin(), sample_times.end());
    sample_times.erase(std::unique(sample_times.begin(), sample_times.end()), sample_times.end());
    if (sample_times.empty()) throw std::invalid_argument("no sample times requested");
    if (opts.policy.dt0 <= 0 || opts.policy.dt_max <= 0)
        opts.policy = DtPolicy::for_range(sample_times.front(), sample_times.back());

    const Vec field = smooth_random_field(op.grid->pos, seed);
    Vec u0 = field.array().exp();

    PositiveField out;
    out.seed = seed;
    out.times = sample_times;
    out.u0 = u0;
    auto run_once = [&](double theta) {
        out.values.assign(sample_times.size(), Vec());
        EvolveOptions o = opts;
        o.theta = theta;
        out.theta_used = theta;
        Evolver ev(op, o);
        ev.run(u0, sample_times, [&](std::size_t j, double, const Vec& u) { out.values[j] = u; });
    };
    run_once(opts.theta);
    double minval = std::numeric_limits<double>::max();
    for (const auto& v : out.values) minval = std::min(minval, v.minCoeff());
    if (minval <= 0 && opts.theta != 1.0) {
        out.regenerated = true;
        run_once(1.0);
        for (const auto& v : out.values)
            if (v.minCoeff() <= 0)
                throw std::runtime_error("positive solution lost positivity even with theta=1");
    }
    return out;
}

namespace {

double window_extreme(const PositiveField& field, const Cylinder& cyl,
                      const std::vector<double>& window, const Vec* scale, bool want_max) {
    double ext = want_max ? -std::numeric_limits<double>::max()
                          : std::numeric_limits<double>::max();
    for (double t : window) {
        auto it = std::lower_bound(field.times.begin(), field.times.end(), t * (1 - 1e-12));
        if (it == field.times.end() || std::abs(*it - t) > 1e-9 * std::max(t, 1.0))
            throw std::invalid_argument("cylinder window time missing from the field ladder");
        const Vec& u = field.values[it - field.times.begin()];
        for (int i : cyl.base_nodes) {
            const double v = scale ? u[i] * (*scale)[i] : u[i];
            ext = want_max ? std::max(ext, v) : std::min(ext, v);
        }
    }
    return ext;
}

}  // namespace

double harnack_quotient(const PositiveField& field, const Cylinder& cyl, const Vec* node_scale) {
    const double sup_early = window_extreme(field, cyl, cyl.early_times, node_scale, true);
    const double inf_late = window_extreme(field, cyl, cyl.late_times, node_scale, false);
    if (!(inf_late > 0)) throw std::runtime_error("harnack quotient: nonpositive late-window inf");
    return sup_early / inf_late;
}

HarnackReport harnack_sweep(const WeightedOperator& op, const std::vector<Vec>& positions,
                            const std::vector<double>& radii,
                            const std::vector<std::uint64_t>& seeds, SweepMode mode, double alpha,
                            double gamma) {
    if (mode == SweepMode::divergence && alpha < 1.0)
        throw std::invalid_argument("certification sweep requires alpha >= 1 (use counterexample mode)");
    const GridPtr& grid = op.grid;
    HarnackReport rep;
    rep.mode = mode == SweepMode::divergence ? "divergence" : "schrodinger";

    Vec scale;
    if (mode == SweepMode::schrodinger) {
        scale = grid->dist.array().pow(-0.5 * alpha);
    }

    std::vector<Cylinder> cyls;
    std::set<double> ladder;
    for (const auto& x : positions)
        for (double r : radii) {
            cyls.push_back(make_cylinder(grid, x, r, gamma));
            for (double t : cyls.back().early_times) ladder.insert(t);
            for (double t : cyls.back().late_times) ladder.insert(t);
        }
    const std::vector<double> times(ladder.begin(), ladder.end());

    for (std::uint64_t seed : seeds) {
        const PositiveField field = generate_positive_solution(op, seed, times);
        for (const auto& cyl : cyls) {
            HarnackCell cell;
            cell.x = cyl.center;
            cell.r = cyl.r;
            cell.seed = seed;
            cell.Q = harnack_quotient(field, cyl, mode == SweepMode::schrodinger ? &scale : nullptr);
            if (cell.Q > rep.max_Q) {
                rep.max_Q = cell.Q;
                rep.argmax = rep.cells.size();
            }
            rep.cells.push_back(std::move(cell));
        }
    }
    return rep;
}

std::vector<Vec> sweep_positions(const DomainSpec& dom, int interior, int boundary) {
    std::vector<Vec> out;
    Halton seq(dom.dim);
    const Vec blo = dom.bbox_lo(), bhi = dom.bbox_hi();
    int got_i = 0, got_b = 0;
    while (got_i < interior || got_b < boundary) {
        const Vec u = seq.next();
        const Vec x = blo + u.cwiseProduct(bhi - blo);
        if (!contains(dom, x)) continue;
        if (distance(dom, x) <= 0) continue;
        if (got_i < interior) {
            out.push_back(x);
            ++got_i;
        } else {
            out.push_back(nearest_boundary_point(dom, x));
            ++got_b;
        }
    }
    return out;
}

double weak_degenerate_profile(double alpha, int N, double rho) {
    if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("profile needs alpha in (0,1)");
    if (rho >= 1.0) return 0.0;
    // v(rho) = 1/(1-alpha) int_0^{(1-rho)^{1-alpha}} (1 - u^{1/(1-alpha)})^{1-N} du
    const double p = 1.0 / (1.0 - alpha);
    const double U = std::pow(1.0 - rho, 1.0 - alpha);
    auto f = [&](double u) { return std::pow(1.0 - std::pow(u, p), 1.0 - N); };
    // adaptive Simpson
    std::function<double(double, double, double, double, double, double, int)> simpson =
        [&](double a, double b, double fa, double fm, double fb, double whole, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6 * (fa + 4 * flm + fm);
            const double right = (b - m) / 6 * (fm + 4 * frm + fb);
            if (depth > 40 || std::abs(left + right - whole) < 1e-12 * std::abs(left + right) + 1e-15)
                return left + right;
            return simpson(a, m, fa, flm, fm, left, depth + 1) +
                   simpson(m, b, fm, frm, fb, right, depth + 1);
        };
    const double fa = f(0.0), fb = f(U), fm = f(0.5 * U);
    const double whole = U / 6 * (fa + 4 * fm + fb);
    return p * simpson(0.0, U, fa, fm, fb, whole, 0);
}

CounterexampleReport weak_degenerate_counterexample(double alpha, int N,
                                                    std::vector<double> radii,
                                                    const std::vector<double>& residual_h) {
    if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("counterexample needs alpha in (0,1)");
    std::sort(radii.begin(), radii.end(), std::greater<double>());
    CounterexampleReport rep;
    rep.alpha = alpha;
    rep.N = N;
    rep.radii = radii;
    rep.v_at_boundary = weak_degenerate_profile(alpha, N, 1.0);

    const DomainSpec dom = DomainSpec::ball_domain(N, 1.0);
    Vec xb = Vec::Zero(N);
    xb[0] = 1.0;  // boundary center of the probe balls
    // Per-ball sup/inf of v over a deterministic sampling of B(x, r/2) cap Omega.
    // Depth layers run geometrically from the parabolic probe depth r^2/4 (the
    // spatial scale the Harnack windows resolve) up to r/2.
    const int n_layers = 24, n_tang = 16;
    for (double r : radii) {
        const BallSpec ball = make_ball(dom, xb, r / 2);
        double vmax = 0.0, vmin = std::numeric_limits<double>::max();
        const double depth_lo = r * r / 4.0, depth_hi = 0.5 * r * (1 - 1e-9);
        for (int li = 0; li < n_layers; ++li) {
            const double depth = depth_lo * std::pow(depth_hi / depth_lo, double(li) / (n_layers - 1));
            for (int ti = 0; ti < n_tang; ++ti) {
                // tangential offsets across the first tangent direction
                const double tau = (ti + 0.5) / n_tang * (r / 2) * 2 - (r / 2);
                Vec y = xb * (1.0 - depth);
                if (N >= 2) y[1] += tau;
                // project back onto the correct depth along the radius
                const double ny = y.norm();
                y *= (1.0 - depth) / ny;
                if (!contains(dom, y) || !ball.member(dom, y)) continue;
                if (y.norm() <= 0.5) continue;  // outside the annulus where v solves
                const double v = weak_degenerate_profile(alpha, N, y.norm());
                vmax = std::max(vmax, v);
                vmin = std::min(vmin, v);
            }
        }
        if (!(vmin < std::numeric_limits<double>::max()))
            throw std::runtime_error("counterexample ball sampled no annulus points");
        rep.quotients.push_back(vmax / vmin);
    }
    rep.growth = rep.quotients.back() / rep.quotients.front();
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.quotients.size(); ++i)
        rep.monotone = rep.monotone && rep.quotients[i] >= rep.quotients[i - 1];

    // Discrete divergence-form residual of v on the annulus, per grid level.
    for (double h : residual_h) {
        const GridPtr grid = build_grid(dom, h, true);
        OperatorParams params;
        params.weight.alpha = alpha;
        const WeightedOperator op = assemble(grid, Family::Lweighted, params);
        Vec v = Vec::Zero(grid->n());
        for (int i = 0; i < grid->n(); ++i)
            if (grid->normx[i] > 0.5) v[i] = weak_degenerate_profile(alpha, N, grid->normx[i]);
        const Vec Av = op.A * v;
        double res = 0.0, scl = 0.0;
        for (int i = 0; i < grid->n(); ++i) {
            const double rho = grid->normx[i];
            if (rho < 0.55 || rho > 1.0 - 2 * h) continue;  // annulus interior only
            res = std::max(res, std::abs(Av[i]) / op.m[i]);
            // flux scale |w grad v| / (h w) = |v'| / h
            const double vp = std::pow(1.0 - rho, -alpha) * std::pow(rho, 1.0 - N);
            scl = std::max(scl, vp / h);
        }
        rep.residual_sup.push_back(res);
        rep.residual_scale.push_back(scl);
    }
    return rep;
}

}  // namespace hklab
