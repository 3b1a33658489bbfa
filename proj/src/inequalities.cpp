#include "hklab/inequalities.hpp"

#include <cmath>

namespace hklab {

SubForm flux_subform(const Grid& grid, const std::vector<int>& nodes,
                     const std::function<double(const Vec&)>& face_weight,
                     bool dirichlet_closure) {
    SubForm sub;
    sub.nodes = nodes;
    sub.global_to_local.assign(grid.n(), -1);
    for (std::size_t l = 0; l < nodes.size(); ++l) sub.global_to_local[nodes[l]] = static_cast<int>(l);
    const int n = static_cast<int>(nodes.size());
    const double scale = std::pow(grid.h, grid.dim - 2);
    std::vector<Eigen::Triplet<double>> trip;
    Vec diag = Vec::Zero(n);
    for (int l = 0; l < n; ++l) {
        const int i = nodes[l];
        for (int k = 0; k < grid.dim; ++k)
            for (int s = 0; s < 2; ++s) {
                const int j = grid.neighbor[i][Grid::slot(k, s)];
                const int lj = j >= 0 ? sub.global_to_local[j] : -1;
                const double w = face_weight(grid.face_midpoint(i, k, s));
                if (!std::isfinite(w)) throw std::runtime_error("non-finite face weight");
                if (w == 0.0) continue;
                if (lj < 0) {
                    if (dirichlet_closure) diag[l] += scale * w;
                } else if (lj > l) {
                    diag[l] += scale * w;
                    diag[lj] += scale * w;
                    trip.emplace_back(l, lj, -scale * w);
                    trip.emplace_back(lj, l, -scale * w);
                }
            }
    }
    for (int l = 0; l < n; ++l) trip.emplace_back(l, l, diag[l]);
    sub.A.resize(n, n);
    sub.A.setFromTriplets(trip.begin(), trip.end());
    sub.A.makeCompressed();
    return sub;
}

Vec gradient_magnitude(const Grid& grid, const Vec& u) {
    Vec out = Vec::Zero(grid.n());
    for (int i = 0; i < grid.n(); ++i) {
        double s2 = 0.0;
        for (int k = 0; k < grid.dim; ++k) {
            const int jm = grid.neighbor[i][Grid::slot(k, 0)];
            const int jp = grid.neighbor[i][Grid::slot(k, 1)];
            const double um = jm >= 0 ? u[jm] : 0.0;
            const double up = jp >= 0 ? u[jp] : 0.0;
            s2 += sqr((up - um) / (2 * grid.h));
        }
        out[i] = std::sqrt(s2);
    }
    return out;
}

double X_log(double t) {
    if (t <= 0 || t > 1) throw std::invalid_argument("X(t) defined on (0,1]");
    return 1.0 / (1.0 - std::log(t));
}

QuotientResult improved_hardy_constant(const GridPtr& grid, const PencilOptions& opts_in) {
    if (grid->dim < 3) throw std::invalid_argument("improved Hardy requires N >= 3");
    if (!contains(grid->domain, Vec::Zero(grid->dim)))
        throw std::invalid_argument("improved Hardy requires the origin inside the domain");
    const WeightedOperator K = assemble(grid, Family::K);
    const Vec B = K.m.cwiseQuotient(grid->dist.cwiseProduct(grid->dist));
    PencilOptions opts = opts_in;
    opts.dim_hint = grid->dim;
    return generalized_min_quotient(K.A, B, false, opts);
}

QuotientResult plain_hardy_quotient(const GridPtr& grid, const PencilOptions& opts_in) {
    const WeightedOperator L = assemble(grid, Family::laplace);
    const Vec B = 0.25 * L.m.cwiseQuotient(grid->dist.cwiseProduct(grid->dist));
    PencilOptions opts = opts_in;
    opts.dim_hint = grid->dim;
    return generalized_min_quotient(L.A, B, false, opts);
}

QuotientResult boundary_strip_hardy(const GridPtr& grid, double delta,
                                    const PencilOptions& opts_in) {
    if (delta / grid->h < 10)
        throw std::invalid_argument("strip too thin: needs at least 10 grid layers");
    std::vector<int> nodes;
    for (int i = 0; i < grid->n(); ++i)
        if (grid->dist[i] <= delta) nodes.push_back(i);
    if (nodes.empty()) throw std::invalid_argument("empty boundary strip");
    const double lam = 2.0 - grid->dim;
    const WeightParams w{lam, 0.0};
    SubForm sub = flux_subform(
        *grid, nodes, [&](const Vec& y) { return weight_value(grid->domain, w, y); }, true);
    const double hN = std::pow(grid->h, grid->dim);
    Vec B(nodes.size());
    for (std::size_t l = 0; l < nodes.size(); ++l) {
        const int i = nodes[l];
        B[l] = hN * std::pow(grid->normx[i], lam) / sqr(grid->dist[i]);
    }
    PencilOptions opts = opts_in;
    opts.dim_hint = grid->dim;
    return generalized_min_quotient(sub.A, B, false, opts);
}

namespace {

double strip_pencil_1d(const std::vector<double>& r, double hr,
                       const std::function<double(double)>& wfun,
                       const std::function<double(double)>& den) {
    const int n = static_cast<int>(r.size());
    std::vector<Eigen::Triplet<double>> trip;
    Vec diag = Vec::Zero(n), B(n);
    const double scale = 1.0 / hr;  // h^{N-2} with N=1
    for (int i = 0; i < n; ++i) {
        B[i] = hr * den(r[i]);
        for (int s = -1; s <= 1; s += 2) {
            const double wf = wfun(r[i] + 0.5 * s * hr);
            const int j = i + s;
            if (j < 0 || j >= n) {
                diag[i] += scale * wf;
            } else if (j > i) {
                diag[i] += scale * wf;
                diag[j] += scale * wf;
                trip.emplace_back(i, j, -scale * wf);
                trip.emplace_back(j, i, -scale * wf);
            }
        }
    }
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, diag[i]);
    SpMat A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    PencilOptions opts;
    opts.dim_hint = 1;
    return generalized_min_quotient(A, B, false, opts).mu;
}

}  // namespace

double boundary_strip_hardy_radial(int N, double R, double delta, double hr) {
    if (delta / hr < 10) throw std::invalid_argument("strip too thin: needs at least 10 layers");
    std::vector<double> r;
    for (double x = R - delta + 0.5 * hr; x < R; x += hr) r.push_back(x);
    return strip_pencil_1d(
        r, hr, [&](double x) { return x; },
        [&](double x) { return x / sqr(R - x); });
}

double halfline_hardy_1d(double delta, double hr) {
    std::vector<double> r;
    for (double x = 0.5 * hr; x < delta; x += hr) r.push_back(x);
    return strip_pencil_1d(
        r, hr, [](double) { return 1.0; }, [](double x) { return 1.0 / sqr(x); });
}

InequalityVerdict veps_hardy_check(const GridPtr& grid, double eps, const std::vector<Vec>& family,
                                   const PencilOptions& opts_in) {
    if (grid->dim < 3) throw std::invalid_argument("piecewise Hardy check requires N >= 3");
    const WeightedOperator L = assemble(grid, Family::laplace);
    const double cc = sqr(grid->dim - 2) / 4.0;
    Vec Veps(grid->n());
    for (int i = 0; i < grid->n(); ++i)
        Veps[i] = grid->dist[i] >= eps ? cc / sqr(grid->normx[i]) : 0.25 / sqr(grid->dist[i]);
    const Vec B = L.m.cwiseProduct(Veps);
    InequalityVerdict v;
    v.id = "veps-hardy";
    v.ref = "Thm 3.10";
    v.family_size = static_cast<int>(family.size());
    bool all_pass = true;
    for (const auto& u : family) {
        const double lhs = L.form(u);
        const double rhs = u.dot(B.cwiseProduct(u));
        if (lhs < rhs * (1 - 1e-10) - 1e-14) {
            all_pass = false;
            ++v.excluded;  // counted as violations here
        }
    }
    PencilOptions opts = opts_in;
    opts.dim_hint = grid->dim;
    const QuotientResult q = generalized_min_quotient(L.A, B, false, opts);
    v.fitted = q.mu;
    v.aux = eps;
    v.pass = all_pass && q.mu >= 0.95;
    return v;
}

QuotientResult bft_hardy_constant(const GridPtr& grid, double D, const PencilOptions& opts_in) {
    if (!grid->domain.convex()) throw std::invalid_argument("convex domain required");
    if (D < grid->dist.maxCoeff())
        throw std::invalid_argument("D must dominate sup d(x)");
    const WeightedOperator H = assemble(grid, Family::H);
    Vec B(grid->n());
    for (int i = 0; i < grid->n(); ++i)
        B[i] = H.m[i] * 0.25 * sqr(X_log(grid->dist[i] / D)) / sqr(grid->dist[i]);
    PencilOptions opts = opts_in;
    opts.dim_hint = grid->dim;
    return generalized_min_quotient(H.A, B, false, opts);
}

InequalityVerdict hardy_moser_check(const GridPtr& grid, const std::vector<Vec>& family) {
    if (!grid->domain.convex()) throw std::invalid_argument("convex domain required");
    const WeightedOperator H = assemble(grid, Family::H);
    const WeightedOperator L = assemble(grid, Family::laplace);
    const int N = grid->dim;
    const double p = 2.0 * (1.0 + 2.0 / N);
    InequalityVerdict v;
    v.id = "hardy-moser";
    v.ref = "Thm 4.3";
    v.family_size = static_cast<int>(family.size());
    v.fitted = std::numeric_limits<double>::max();
    for (const auto& u : family) {
        const double num = H.form(u);
        if (num < -grid->h * L.form(u)) {
            ++v.excluded;
            continue;
        }
        const double mass = u.dot(H.m.cwiseProduct(u));
        double plow = 0.0;
        for (int i = 0; i < grid->n(); ++i) plow += H.m[i] * std::pow(std::abs(u[i]), p);
        const double c = std::max(num, 0.0) * std::pow(mass, 2.0 / N) / plow;
        v.fitted = std::min(v.fitted, c);
    }
    v.pass = v.fitted > 0 && v.excluded * 100 < v.family_size;
    return v;
}

std::vector<InequalityVerdict> hardy_sobolev_checks(const GridPtr& grid,
                                                    const std::vector<Vec>& family,
                                                    HardySobolevOptions opt) {
    const int N = grid->dim;
    std::vector<InequalityVerdict> out;
    const double hN = std::pow(grid->h, N);

    if (opt.D <= 0) opt.D = grid->normx.maxCoeff() * (1 + 1e-12);
    if (opt.delta <= 0) opt.delta = 0.2 * grid->domain.inradius();
    if (opt.q <= 0) opt.q = N >= 3 ? 2.0 * N / (N - 2) : 4.0;
    if (N >= 3 && (opt.q <= 2 || opt.q > 2.0 * N / (N - 2) + 1e-12))
        throw std::invalid_argument("q must lie in (2, 2N/(N-2)] for N >= 3");

    // weighted gradient energies
    const bool origin_ok = N >= 3 && contains(grid->domain, Vec::Zero(N));
    if (origin_ok) {
        const double lam = 2.0 - N;
        OperatorParams lp;
        lp.weight = WeightParams{lam, 0.0};
        const WeightedOperator Lw = assemble(grid, Family::Lweighted, lp);

        InequalityVerdict v1;  // X-weighted Hardy-Sobolev at the origin
        v1.id = "hardy-sobolev-origin-X";
        v1.ref = "Prop 3.1";
        v1.family_size = static_cast<int>(family.size());
        v1.fitted = std::numeric_limits<double>::max();

        InequalityVerdict v2;  // plain |x|^{2-N}-weighted version
        v2.id = "hardy-sobolev-origin";
        v2.ref = "Eq (ft)";
        v2.family_size = v1.family_size;
        v2.fitted = std::numeric_limits<double>::max();

        const double pexp = 2.0 * N / (N - 2);
        const double xpow = 2.0 * (N - 1.0) / (N - 2.0);
        for (const auto& u : family) {
            const double num = Lw.form(u);
            double den1 = 0.0, den2 = 0.0;
            for (int i = 0; i < grid->n(); ++i) {
                const double up = std::pow(std::abs(u[i]), pexp);
                den1 += hN * std::pow(grid->normx[i], -double(N)) *
                        std::pow(X_log(grid->normx[i] / opt.D), xpow) * up;
                den2 += hN * std::pow(grid->normx[i], 2.0 - N) * up;
            }
            v1.fitted = std::min(v1.fitted, num / std::pow(den1, (N - 2.0) / N));
            v2.fitted = std::min(v2.fitted, num / std::pow(den2, (N - 2.0) / N));
        }
        v1.pass = v1.fitted > 0;
        v2.pass = v2.fitted > 0;
        out.push_back(v1);
        out.push_back(v2);
    }

    {
        InequalityVerdict v;  // d-power Hardy-Sobolev with the H numerator
        v.id = "hardy-sobolev-distance";
        v.ref = "Prop 4.5";
        v.family_size = static_cast<int>(family.size());
        v.fitted = std::numeric_limits<double>::max();
        const WeightedOperator H = assemble(grid, Family::H);
        const WeightedOperator L = assemble(grid, Family::laplace);
        const double dpow = opt.q / 2.0 * (N - 2.0) - N;
        for (const auto& u : family) {
            const double num = H.form(u);
            if (num < -grid->h * L.form(u)) {
                ++v.excluded;
                continue;
            }
            double den = 0.0;
            for (int i = 0; i < grid->n(); ++i)
                den += hN * std::pow(grid->dist[i], dpow) * std::pow(std::abs(u[i]), opt.q);
            v.fitted = std::min(v.fitted, std::max(num, 0.0) / std::pow(den, 2.0 / opt.q));
        }
        v.aux = opt.q;
        v.pass = v.fitted > 0 && v.excluded * 100 < v.family_size;
        out.push_back(v);
    }

    {
        InequalityVerdict v;  // two-term L1 route
        v.id = "hardy-sobolev-l1";
        v.ref = "Lemma 4.2";
        v.family_size = static_cast<int>(family.size());
        v.fitted = std::numeric_limits<double>::max();
        const double alpha = 1.0;
        for (const auto& u : family) {
            const Vec gmag = gradient_magnitude(*grid, u);
            double lhs = 0.0, den = 0.0;
            for (int i = 0; i < grid->n(); ++i) {
                lhs += hN * std::pow(grid->dist[i], alpha) * gmag[i];
                if (grid->dist[i] > opt.delta)
                    lhs += hN * std::pow(grid->dist[i], alpha - 1.0) * std::abs(u[i]);
                den += hN * std::pow(grid->dist[i], alpha * N / (N - 1.0)) *
                       std::pow(std::abs(u[i]), N / (N - 1.0));
            }
            v.fitted = std::min(v.fitted, lhs / std::pow(den, (N - 1.0) / N));
        }
        v.aux = opt.delta;
        v.pass = v.fitted > 0;
        out.push_back(v);
    }
    return out;
}

namespace {

LogSobolevResult log_sobolev_fit(const std::vector<Vec>& family,
                                 const std::function<double(const Vec&)>& energy,
                                 const std::function<double(const Vec&)>& mass,
                                 const std::function<double(const Vec&, double)>& entropy,
                                 double kappa, const std::vector<double>& eps_grid,
                                 const std::string& id, const std::string& ref) {
    LogSobolevResult res;
    res.verdict.id = id;
    res.verdict.ref = ref;
    res.verdict.family_size = static_cast<int>(family.size());
    res.fitted_K = -std::numeric_limits<double>::max();
    for (std::size_t mi = 0; mi < family.size(); ++mi) {
        Vec u = family[mi].cwiseAbs();  // nonnegative members
        const double q = energy(u);
        const double m2 = mass(u);
        if (!(m2 > 0)) continue;
        const double ent = entropy(u, std::sqrt(m2));
        for (double eps : eps_grid) {
            const double k = (ent - eps * q) / m2 + kappa * std::log(eps);
            if (k > res.fitted_K) {
                res.fitted_K = k;
                res.worst_eps = eps;
                res.worst_member = static_cast<int>(mi);
                res.eps_star_of_worst = q > 0 ? kappa * m2 / q : eps;
            }
        }
    }
    // grid-step consistency of the attained maximizer
    double step = std::numeric_limits<double>::max();
    for (std::size_t i = 1; i < eps_grid.size(); ++i)
        step = std::min(step, std::log(eps_grid[i] / eps_grid[i - 1]));
    res.eps_star_within_one_step =
        std::abs(std::log(res.worst_eps / res.eps_star_of_worst)) <= step * (1 + 1e-9);
    res.verdict.fitted = res.fitted_K;
    res.verdict.aux = res.worst_eps;
    res.verdict.pass = std::isfinite(res.fitted_K) && res.eps_star_within_one_step;
    return res;
}

}  // namespace

LogSobolevResult log_sobolev_origin(const GridPtr& grid, const std::vector<Vec>& family,
                                    const std::vector<double>& eps_grid) {
    if (grid->dim < 3) throw std::invalid_argument("origin log-Sobolev requires N >= 3");
    const WeightedOperator K = assemble(grid, Family::K);
    const int N = grid->dim;
    return log_sobolev_fit(
        family, [&](const Vec& u) { return K.form(u); },
        [&](const Vec& u) { return u.dot(K.m.cwiseProduct(u)); },
        [&](const Vec& u, double norm2) {
            double ent = 0.0;
            for (int i = 0; i < grid->n(); ++i) {
                if (u[i] <= 0) continue;  // 0 log 0 = 0
                const double shape =
                    std::pow(grid->normx[i], (2.0 - N) / 2.0) * grid->dist[i];
                ent += K.m[i] * sqr(u[i]) * std::log(u[i] / (norm2 * shape));
            }
            return ent;
        },
        (N + 2) / 4.0, eps_grid, "logsob-origin", "Thm 3.3");
}

LogSobolevResult log_sobolev_distance(const GridPtr& grid, const std::vector<Vec>& family,
                                      const std::vector<double>& eps_grid) {
    OperatorParams lp;
    lp.weight = WeightParams{0.0, 1.0};
    const WeightedOperator Lw = assemble(grid, Family::Lweighted, lp);
    const int N = grid->dim;
    // a.e. Laplacian of d at the nodes (0 on the measure-zero ridge)
    Vec lapd = Vec::Zero(grid->n());
    for (int i = 0; i < grid->n(); ++i) {
        try {
            lapd[i] = distance_calculus(grid->domain, grid->pos[i]).lap;
        } catch (const std::domain_error&) {
            lapd[i] = 0.0;
        }
    }
    const double hN = std::pow(grid->h, N);
    return log_sobolev_fit(
        family,
        [&](const Vec& u) {
            double corr = 0.0;
            for (int i = 0; i < grid->n(); ++i) corr += hN * lapd[i] * sqr(u[i]);
            return Lw.form(u) - 0.5 * corr;
        },
        [&](const Vec& u) { return u.dot(Lw.m.cwiseProduct(u)); },
        [&](const Vec& u, double norm2) {
            double ent = 0.0;
            for (int i = 0; i < grid->n(); ++i) {
                if (u[i] <= 0) continue;
                ent += Lw.m[i] * sqr(u[i]) * std::log(u[i] / norm2);
            }
            return ent;
        },
        (N + 1) / 4.0, eps_grid, "logsob-distance", "Eq (log3)");
}

PoincareResult local_poincare_constant(const GridPtr& grid, const WeightParams& w, const Vec& x,
                                       double r, const PencilOptions& opts_in) {
    const BallSpec ball = make_ball(grid->domain, x, r);
    std::vector<int> nodes;
    for (int i = 0; i < grid->n(); ++i)
        if (ball.member(grid->domain, grid->pos[i])) nodes.push_back(i);
    if (nodes.size() < 8) throw std::invalid_argument("discrete ball has fewer than 8 nodes");
    SubForm sub = flux_subform(
        *grid, nodes, [&](const Vec& y) { return weight_value(grid->domain, w, y); }, false);
    const double hN = std::pow(grid->h, grid->dim);
    Vec B(nodes.size());
    for (std::size_t l = 0; l < nodes.size(); ++l)
        B[l] = hN * weight_value(grid->domain, w, grid->pos[nodes[l]]);
    PencilOptions opts = opts_in;
    opts.dim_hint = grid->dim;
    opts.mean_zero = true;
    const QuotientResult q = generalized_min_quotient(sub.A, B, true, opts);
    PoincareResult out;
    out.mu = q.mu;
    out.C_P = 1.0 / (q.mu * r * r);
    out.nodes = static_cast<int>(nodes.size());
    return out;
}

MoserResult local_moser_check(const GridPtr& grid, const WeightParams& w, const Vec& x, double r,
                              double nu, const std::vector<Vec>& ball_family) {
    if (nu < grid->dim + w.alpha - 1e-12)
        throw std::invalid_argument("nu must be at least N + alpha");
    const BallSpec ball = make_ball(grid->domain, x, r);
    std::vector<int> nodes;
    for (int i = 0; i < grid->n(); ++i)
        if (ball.member(grid->domain, grid->pos[i])) nodes.push_back(i);
    if (nodes.size() < 8) throw std::invalid_argument("discrete ball has fewer than 8 nodes");
    SubForm sub = flux_subform(
        *grid, nodes, [&](const Vec& y) { return weight_value(grid->domain, w, y); }, false);
    const double hN = std::pow(grid->h, grid->dim);
    Vec wm(nodes.size());
    for (std::size_t l = 0; l < nodes.size(); ++l)
        wm[l] = hN * weight_value(grid->domain, w, grid->pos[nodes[l]]);
    MoserResult out;
    out.volume = wm.sum();  // discrete weighted ball volume
    out.family_size = static_cast<int>(ball_family.size());
    const double pexp = 2.0 * (1.0 + 2.0 / nu);
    for (const auto& f : ball_family) {
        Vec fl(nodes.size());
        for (std::size_t l = 0; l < nodes.size(); ++l) fl[l] = f[nodes[l]];
        const double grad = fl.dot(sub.A * fl);
        const double l2 = fl.dot(wm.cwiseProduct(fl));
        double lp = 0.0;
        for (std::size_t l = 0; l < nodes.size(); ++l)
            lp += wm[l] * std::pow(std::abs(fl[l]), pexp);
        if (!(grad > 0) || !(l2 > 0)) continue;
        const double c =
            lp / (r * r * std::pow(out.volume, -2.0 / nu) * grad * std::pow(l2, 2.0 / nu));
        out.C_M = std::max(out.C_M, c);
    }
    return out;
}

double mean_value_check(const WeightedOperator& op, const PositiveField& field, const Vec& x,
                        double r, double gamma) {
    const Grid& g = *op.grid;
    const BallSpec outer = make_ball(g.domain, x, r, gamma);
    const BallSpec inner = make_ball(g.domain, x, r / 2, gamma);
    std::vector<int> outer_nodes, inner_nodes;
    for (int i = 0; i < g.n(); ++i) {
        if (outer.member(g.domain, g.pos[i])) outer_nodes.push_back(i);
        if (inner.member(g.domain, g.pos[i])) inner_nodes.push_back(i);
    }
    if (inner_nodes.empty() || outer_nodes.empty())
        throw std::invalid_argument("mean value cylinder has no grid nodes");
    const double r2 = r * r;
    // sup of v^2 over the inner half-ball and the late half of the cylinder
    double sup2 = 0.0;
    for (std::size_t j = 0; j < field.times.size(); ++j) {
        if (field.times[j] < 0.5 * r2 - 1e-12 || field.times[j] > r2 + 1e-12) continue;
        for (int i : inner_nodes) sup2 = std::max(sup2, sqr(field.values[j][i]));
    }
    // trapezoid of int_0^{r^2} int w v^2 over {0} cup ladder
    auto space_int = [&](const Vec& v) {
        double s = 0.0;
        for (int i : outer_nodes) s += op.m[i] * sqr(v[i]);
        return s;
    };
    double integral = 0.0;
    double prev_t = 0.0, prev_v = space_int(field.u0);
    for (std::size_t j = 0; j < field.times.size(); ++j) {
        if (field.times[j] > r2 + 1e-12) break;
        const double cur_v = space_int(field.values[j]);
        integral += 0.5 * (field.times[j] - prev_t) * (cur_v + prev_v);
        prev_t = field.times[j];
        prev_v = cur_v;
    }
    double volume = 0.0;
    for (int i : outer_nodes) volume += op.m[i];
    return sup2 * r2 * volume / integral;
}

}  // namespace hklab
