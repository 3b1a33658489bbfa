#include "hklab/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hklab/bounds.hpp"
#include "hklab/certify.hpp"
#include "hklab/inequalities.hpp"

namespace hklab {

namespace fs = std::filesystem;

bool Report::pass() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

json Report::to_json() const {
    json j;
    j["command"] = command;
    j["fingerprint"] = fingerprint;
    j["pass"] = pass();
    j["wall_seconds"] = wall_seconds;
    j["artifacts"] = artifacts;
    j["verdicts"] = json::array();
    for (const auto& v : verdicts)
        j["verdicts"].push_back(
            {{"id", v.id}, {"ref", v.ref}, {"pass", v.pass}, {"value", v.value}, {"detail", v.detail}});
    return j;
}

void write_csv(const std::string& path, const std::string& command, const std::string& fingerprint,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    out << "# hklab " << command << " fingerprint=" << fingerprint << " generated=" << now << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) out << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << format_full(row[c]) << (c + 1 < row.size() ? "," : "\n");
    }
}

SpectralData cached_eigenpair(const WeightedOperator& op, const std::string& fingerprint,
                              const SpectralCache& cache, double tol, bool* hit) {
    if (auto sd = cache.lookup(fingerprint, op.n())) {
        if (hit) *hit = true;
        return *sd;
    }
    if (hit) *hit = false;
    SpectralData sd = principal_eigenpair(op, tol);
    cache.store(fingerprint, sd);
    return sd;
}

namespace {

std::vector<double> geometric_ladder(double tmin, double tmax, int count) {
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i)
        t[i] = tmin * std::pow(tmax / tmin, count > 1 ? double(i) / (count - 1) : 0.0);
    return t;
}

int nearest_node(const Grid& g, const Vec& p) {
    int best = 0;
    double bd = std::numeric_limits<double>::max();
    for (int i = 0; i < g.n(); ++i) {
        const double d = (g.pos[i] - p).squaredNorm();
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

Vec json_point(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vec>(v.data(), v.size());
}

EnvelopeFamily envelope_family_from_name(const std::string& name) {
    for (int f = 0; f <= static_cast<int>(EnvelopeFamily::hc_large); ++f)
        if (envelope_family_name(static_cast<EnvelopeFamily>(f)) == name)
            return static_cast<EnvelopeFamily>(f);
    throw ConfigError("unknown envelope family: " + name);
}

struct CommandContext {
    RunConfig cfg;
    CliOptions opts;
    std::string out_dir;
    Report report;
    std::ostream* log;
};

void cmd_eig(CommandContext& ctx) {
    const auto grid = build_grid(ctx.cfg.domain, ctx.cfg.h, ctx.cfg.stagger);
    const WeightedOperator op = assemble(grid, ctx.cfg.family, ctx.cfg.params);
    SpectralCache cache(ctx.opts.cache_dir, !ctx.opts.no_cache);
    const double tol = ctx.cfg.task.value("tol", 1e-10);
    bool hit = false;
    const SpectralData sd = cached_eigenpair(op, ctx.cfg.fingerprint(), cache, tol, &hit);
    Verdict v;
    v.id = "eig-residual";
    v.ref = "eigenpair";
    v.value = sd.lambda1;
    v.pass = sd.residual <= tol;
    v.detail = {{"lambda1", sd.lambda1}, {"residual", sd.residual},
                {"iterations", sd.iterations}, {"cache_hit", hit}};
    ctx.report.verdicts.push_back(v);
    if (ctx.cfg.task.contains("expected_lambda1")) {
        Verdict e;
        e.id = "eig-lambda1-expected";
        e.ref = "analytic";
        const double expect = ctx.cfg.task.at("expected_lambda1").get<double>();
        const double rtol = ctx.cfg.task.value("rtol", 1e-3);
        e.value = sd.lambda1;
        e.pass = std::abs(sd.lambda1 - expect) <= rtol * std::abs(expect);
        e.detail = {{"expected", expect}, {"rtol", rtol}};
        ctx.report.verdicts.push_back(e);
    }
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < grid->n(); ++i) {
        std::vector<double> row{double(i)};
        for (int k = 0; k < grid->dim; ++k) row.push_back(grid->pos[i][k]);
        row.push_back(sd.phi1[i]);
        rows.push_back(std::move(row));
    }
    std::vector<std::string> cols{"node"};
    for (int k = 0; k < grid->dim; ++k) cols.push_back("x" + std::to_string(k));
    cols.push_back("phi1");
    const std::string csv = ctx.out_dir + "/eig.csv";
    write_csv(csv, "eig", ctx.report.fingerprint, cols, rows);
    ctx.report.artifacts.push_back(csv);
}

void cmd_kernel(CommandContext& ctx) {
    const auto grid = build_grid(ctx.cfg.domain, ctx.cfg.h, ctx.cfg.stagger);
    const WeightedOperator op = assemble(grid, ctx.cfg.family, ctx.cfg.params);
    SpectralCache cache(ctx.opts.cache_dir, !ctx.opts.no_cache);
    const SpectralData sd = cached_eigenpair(op, ctx.cfg.fingerprint(), cache, 1e-10, nullptr);

    const json& task = ctx.cfg.task;
    const double h = grid->h;
    const double tmin = task.value("t_min", 8 * h * h);
    const double tmax = task.value("t_max", 0.1);
    const int nt = task.value("t_count", 12);
    const auto times = geometric_ladder(std::max(tmin, 4 * h * h), tmax, nt);

    std::vector<int> sources;
    if (task.contains("sources"))
        for (const auto& p : task.at("sources")) sources.push_back(nearest_node(*grid, json_point(p)));
    else
        sources.push_back(nearest_node(*grid, 0.5 * (ctx.cfg.domain.bbox_lo() + ctx.cfg.domain.bbox_hi())));

    Envelope env;
    env.family = envelope_family_from_name(task.value("envelope", "dirichlet-small"));
    env.N = grid->dim;
    env.alpha = task.value("envelope_alpha", ctx.cfg.params.weight.alpha);
    env.lambda = task.value("envelope_lambda", ctx.cfg.params.weight.lambda);
    env.c = ctx.cfg.params.c;
    env.lambda1 = sd.lambda1;

    std::vector<KernelSample> samples;
    std::vector<std::vector<double>> csv_rows;
    const double guard = 2 * h;
    std::vector<KernelSlice> slices;
    for (int y : sources) {
        KernelSlice slice = kernel_column(op, y, times);
        for (std::size_t j = 0; j < slice.times.size(); ++j) {
            for (int i = 0; i < grid->n(); ++i) {
                std::vector<double> row{slice.times[j], double(i)};
                for (int k = 0; k < grid->dim; ++k) row.push_back(grid->pos[i][k]);
                row.push_back(slice.values[j][i]);
                csv_rows.push_back(std::move(row));
                const double k_val = slice.values[j][i];
                if (k_val <= 0) continue;
                if (grid->dist[i] < guard || grid->dist[y] < guard) continue;
                const bool origin_family = env.family == EnvelopeFamily::origin_small ||
                                           env.family == EnvelopeFamily::origin_large ||
                                           env.family == EnvelopeFamily::kc_small ||
                                           env.family == EnvelopeFamily::kc_large;
                if (origin_family && (grid->normx[i] < guard || grid->normx[y] < guard)) continue;
                samples.push_back({grid->pos[i], grid->pos[y], slice.times[j], k_val});
            }
        }
        slices.push_back(std::move(slice));
    }

    const Envelope fitted = fit_constants(samples, env, ctx.cfg.domain);
    Verdict v;
    v.id = "kernel-fit";
    v.ref = envelope_family_name(env.family);
    v.pass = fitted.feasible && fitted.C1 > 0;
    v.value = fitted.feasible ? fitted.ratio() : 0.0;
    v.detail = {{"family", envelope_family_name(env.family)}, {"C1", fitted.C1}, {"C2", fitted.C2},
                {"g1", fitted.g1},  {"g2", fitted.g2},        {"samples", samples.size()},
                {"lambda1", sd.lambda1}};
    ctx.report.verdicts.push_back(v);

    // symmetry spot checks between source pairs
    if (sources.size() >= 2) {
        double worst = 0.0;
        int checked = 0;
        for (std::size_t a = 0; a < sources.size() && checked < 3; ++a)
            for (std::size_t b = a + 1; b < sources.size() && checked < 3; ++b, ++checked) {
                const double kxy = slices[a].values.back()[sources[b]];
                const double kyx = slices[b].values.back()[sources[a]];
                worst = std::max(worst, std::abs(kxy - kyx) / std::max(std::abs(kxy), 1e-300));
            }
        Verdict s;
        s.id = "kernel-symmetry";
        s.ref = "self-adjointness";
        s.value = worst;
        s.pass = worst <= 1e-2;
        ctx.report.verdicts.push_back(s);
    }

    if (task.value("crossover", false)) {
        std::vector<int> probes;
        for (int i = 0; i < grid->n(); i += std::max(1, grid->n() / 7))
            if (grid->dist[i] > 4 * h) probes.push_back(i);
        std::vector<std::vector<double>> ratios(times.size());
        for (std::size_t j = 0; j < times.size(); ++j)
            for (std::size_t a = 0; a < sources.size(); ++a)
                for (int i : probes)
                    ratios[j].push_back(slices[a].values[j][i] * std::exp(sd.lambda1 * times[j]) /
                                        (sd.phi1[i] * sd.phi1[sources[a]]));
        const CrossoverResult cr = regime_crossover(times, ratios);
        Verdict c;
        c.id = "crossover";
        c.ref = "large-time factorization";
        c.pass = cr.found;
        c.value = cr.found ? cr.t_star : -1.0;
        c.detail = {{"spread", cr.spread}};
        ctx.report.verdicts.push_back(c);
    }

    std::vector<std::string> cols{"t", "node"};
    for (int k = 0; k < grid->dim; ++k) cols.push_back("x" + std::to_string(k));
    cols.push_back("value");
    const std::string csv = ctx.out_dir + "/kernel.csv";
    write_csv(csv, "kernel", ctx.report.fingerprint, cols, csv_rows);
    ctx.report.artifacts.push_back(csv);
    const std::string fitjson = ctx.out_dir + "/kernel_fit.json";
    std::ofstream fj(fitjson);
    fj << json({{"family", envelope_family_name(env.family)},
                {"C1", fitted.C1},
                {"C2", fitted.C2},
                {"g1", fitted.g1},
                {"g2", fitted.g2},
                {"ratio", fitted.feasible ? fitted.ratio() : 0.0},
                {"feasible", fitted.feasible}})
              .dump(2)
       << "\n";
    ctx.report.artifacts.push_back(fitjson);
}

void cmd_green(CommandContext& ctx) {
    const auto grid = build_grid(ctx.cfg.domain, ctx.cfg.h, ctx.cfg.stagger);
    if (grid->dim < 3) throw ConfigError("green command requires N >= 3");
    const WeightedOperator op = assemble(grid, ctx.cfg.family, ctx.cfg.params);
    SpectralCache cache(ctx.opts.cache_dir, !ctx.opts.no_cache);
    const SpectralData sd = cached_eigenpair(op, ctx.cfg.fingerprint(), cache, 1e-10, nullptr);
    if (!(sd.lambda1 > 0)) throw std::runtime_error("operator is not invertible (lambda1 <= 0)");

    const json& task = ctx.cfg.task;
    std::vector<int> sources;
    if (task.contains("sources"))
        for (const auto& p : task.at("sources")) sources.push_back(nearest_node(*grid, json_point(p)));
    else
        sources.push_back(nearest_node(*grid, 0.5 * (ctx.cfg.domain.bbox_lo() + ctx.cfg.domain.bbox_hi())));

    Envelope env;
    env.family = EnvelopeFamily::green;
    env.N = grid->dim;
    env.c = ctx.cfg.params.c;
    env.alpha = ctx.cfg.family == Family::Hc ? env.coupling_alpha()
                                             : task.value("envelope_alpha", ctx.cfg.params.weight.alpha);

    const double h = grid->h;
    std::vector<KernelSample> samples;
    std::vector<std::vector<double>> rows;
    for (int y : sources) {
        const GreenVector gv = green_function(op, y, sd.lambda1);
        for (int i = 0; i < grid->n(); ++i) {
            rows.push_back({double(y), double(i), gv.g[i]});
            if ((grid->pos[i] - grid->pos[y]).norm() < 3 * h) continue;
            if (grid->dist[i] < 2 * h || grid->dist[y] < 2 * h) continue;
            if (gv.g[i] <= 0) continue;
            samples.push_back({grid->pos[i], grid->pos[y], 0.0, gv.g[i]});
        }
    }
    const Envelope fitted = fit_constants(samples, env, ctx.cfg.domain);
    Verdict v;
    v.id = "green-fit";
    v.ref = "green envelope";
    v.pass = fitted.feasible && fitted.C1 > 0;
    v.value = fitted.feasible ? fitted.ratio() : 0.0;
    v.detail = {{"alpha", env.alpha}, {"C1", fitted.C1}, {"C2", fitted.C2}, {"samples", samples.size()}};
    ctx.report.verdicts.push_back(v);
    const std::string csv = ctx.out_dir + "/green.csv";
    write_csv(csv, "green", ctx.report.fingerprint, {"source", "node", "value"}, rows);
    ctx.report.artifacts.push_back(csv);
}

void cmd_harnack(CommandContext& ctx) {
    const json& task = ctx.cfg.task;
    const std::string mode = task.value("mode", "certify");
    if (mode == "counterexample") {
        const double alpha = task.value("alpha", 0.5);
        const int N = ctx.cfg.domain.dim;
        std::vector<double> radii = task.value("radii", std::vector<double>{0.2, 0.1, 0.05, 0.025});
        std::vector<double> res_h = task.value("residual_h", std::vector<double>{1.0 / 64, 1.0 / 128});
        const CounterexampleReport rep = weak_degenerate_counterexample(alpha, N, radii, res_h);
        Verdict v;
        v.id = "harnack-counterexample";
        v.ref = "weak degeneracy";
        v.value = rep.growth;
        v.pass = rep.monotone && rep.growth > 1.5;  // growth demonstrated
        v.detail = {{"quotients", rep.quotients},
                    {"radii", rep.radii},
                    {"residual_sup", rep.residual_sup},
                    {"residual_scale", rep.residual_scale}};
        ctx.report.verdicts.push_back(v);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < rep.radii.size(); ++i)
            rows.push_back({rep.radii[i], rep.quotients[i]});
        const std::string csv = ctx.out_dir + "/harnack_counterexample.csv";
        write_csv(csv, "harnack", ctx.report.fingerprint, {"r", "Q"}, rows);
        ctx.report.artifacts.push_back(csv);
        return;
    }

    const auto grid = build_grid(ctx.cfg.domain, ctx.cfg.h, ctx.cfg.stagger);
    const WeightedOperator op = assemble(grid, ctx.cfg.family, ctx.cfg.params);
    const double alpha = ctx.cfg.params.weight.alpha;
    const int n_int = task.value("interior_positions", 12);
    const int n_bry = task.value("boundary_positions", 8);
    const auto positions = sweep_positions(ctx.cfg.domain, n_int, n_bry);
    const std::vector<double> radii = task.value("radii", std::vector<double>{0.06, 0.09, 0.12});
    std::vector<std::uint64_t> seeds;
    const int n_seeds = task.value("seeds", 5);
    for (int s = 0; s < n_seeds; ++s) seeds.push_back(1000 + 7 * s);
    const SweepMode sweep_mode =
        task.value("schrodinger", false) ? SweepMode::schrodinger : SweepMode::divergence;
    const HarnackReport rep = harnack_sweep(op, positions, radii, seeds, sweep_mode, alpha);
    Verdict v;
    v.id = "harnack-sweep";
    v.ref = "parabolic quotient";
    v.value = rep.max_Q;
    v.pass = std::isfinite(rep.max_Q) && rep.max_Q > 0;
    v.detail = {{"cells", rep.cells.size()}, {"mode", rep.mode}};
    ctx.report.verdicts.push_back(v);
    std::vector<std::vector<double>> rows;
    for (const auto& c : rep.cells) {
        std::vector<double> row;
        for (int k = 0; k < grid->dim; ++k) row.push_back(c.x[k]);
        row.push_back(c.r);
        row.push_back(double(c.seed));
        row.push_back(c.Q);
        rows.push_back(std::move(row));
    }
    std::vector<std::string> cols;
    for (int k = 0; k < grid->dim; ++k) cols.push_back("x" + std::to_string(k));
    cols.insert(cols.end(), {"r", "seed", "Q"});
    const std::string csv = ctx.out_dir + "/harnack_cells.csv";
    write_csv(csv, "harnack", ctx.report.fingerprint, cols, rows);
    ctx.report.artifacts.push_back(csv);
}

void cmd_hardy(CommandContext& ctx) {
    const auto grid = build_grid(ctx.cfg.domain, ctx.cfg.h, ctx.cfg.stagger);
    const json& task = ctx.cfg.task;
    const auto which = task.value("which", std::vector<std::string>{"plain"});
    const int N = grid->dim;
    for (const auto& name : which) {
        Verdict v;
        if (name == "improved") {
            const auto q = improved_hardy_constant(grid);
            v.id = "improved-hardy";
            v.ref = "Thm 3.2";
            v.value = q.mu;
            v.pass = q.mu >= task.value("improved_target", 0.245);
        } else if (name == "plain") {
            const auto q = plain_hardy_quotient(grid);
            v.id = "plain-hardy";
            v.ref = "convex Hardy";
            v.value = q.mu;
            v.pass = q.mu >= task.value("plain_target", 0.95);
        } else if (name == "strip") {
            const double delta = task.value("delta", 0.1);
            double mu;
            if (ctx.cfg.domain.kind == DomainKind::ball) {
                const double hr = task.value("strip_hr", 1e-4);
                mu = boundary_strip_hardy_radial(N, ctx.cfg.domain.radius, delta, hr);
            } else {
                mu = boundary_strip_hardy(grid, delta).mu;
            }
            v.id = "strip-hardy";
            v.ref = "Lemma 3.6";
            v.value = mu;
            v.pass = mu >= 0.25 - 1e-9 && mu <= task.value("strip_upper", 0.45);
        } else if (name == "veps") {
            const double eps = task.value("eps", 0.05 * ctx.cfg.domain.inradius());
            const auto family =
                generate_family(*grid, task.value("family", 200), task.value("seed", 4242));
            const auto verdict = veps_hardy_check(grid, eps, family);
            v.id = verdict.id;
            v.ref = verdict.ref;
            v.value = verdict.fitted;
            v.pass = verdict.pass;
            v.detail = {{"violations", verdict.excluded}, {"eps", eps}};
        } else if (name == "bft") {
            const double D = task.value("D", 2 * grid->dist.maxCoeff());
            const auto q = bft_hardy_constant(grid, D);
            v.id = "bft-hardy";
            v.ref = "Prop 4.1";
            v.value = q.mu;
            v.pass = q.mu >= task.value("bft_target", 0.9);
            v.detail = {{"D", D}};
        } else {
            throw ConfigError("unknown hardy variant: " + name);
        }
        ctx.report.verdicts.push_back(v);
    }
}

void cmd_poincare(CommandContext& ctx) {
    const auto grid = build_grid(ctx.cfg.domain, ctx.cfg.h, ctx.cfg.stagger);
    const json& task = ctx.cfg.task;
    const WeightParams w{ctx.cfg.params.weight.lambda, ctx.cfg.params.weight.alpha};
    const int cells = task.value("cells", 30);
    const std::vector<double> radii = task.value("radii", std::vector<double>{0.08, 0.12});
    const auto positions = sweep_positions(ctx.cfg.domain, (cells + 1) / 2, cells / 2);
    double worst = 0.0;
    std::vector<std::vector<double>> rows;
    int used = 0;
    for (const auto& x : positions)
        for (double r : radii) {
            try {
                const PoincareResult pr = local_poincare_constant(grid, w, x, r);
                worst = std::max(worst, pr.C_P);
                std::vector<double> row;
                for (int k = 0; k < grid->dim; ++k) row.push_back(x[k]);
                row.insert(row.end(), {r, pr.mu, pr.C_P});
                rows.push_back(std::move(row));
                ++used;
            } catch (const std::invalid_argument&) {
                // cells with too few nodes are skipped and counted below
            }
        }
    Verdict v;
    v.id = "poincare-sweep";
    v.ref = "Thm 2.5";
    v.value = worst;
    v.pass = used > 0 && std::isfinite(worst);
    v.detail = {{"cells_evaluated", used}};
    ctx.report.verdicts.push_back(v);
    std::vector<std::string> cols;
    for (int k = 0; k < grid->dim; ++k) cols.push_back("x" + std::to_string(k));
    cols.insert(cols.end(), {"r", "mu", "C_P"});
    const std::string csv = ctx.out_dir + "/poincare.csv";
    write_csv(csv, "poincare", ctx.report.fingerprint, cols, rows);
    ctx.report.artifacts.push_back(csv);
}

void cmd_moser(CommandContext& ctx) {
    const auto grid = build_grid(ctx.cfg.domain, ctx.cfg.h, ctx.cfg.stagger);
    const json& task = ctx.cfg.task;
    const WeightParams w{ctx.cfg.params.weight.lambda, ctx.cfg.params.weight.alpha};
    const double nu = task.value("nu", grid->dim + w.alpha);
    const int cells = task.value("cells", 12);
    const std::vector<double> radii = task.value("radii", std::vector<double>{0.1});
    const auto positions = sweep_positions(ctx.cfg.domain, (cells + 1) / 2, cells / 2);
    double worst = 0.0;
    std::vector<std::vector<double>> rows;
    int used = 0;
    for (const auto& x : positions)
        for (double r : radii) {
            try {
                const BallSpec ball = make_ball(ctx.cfg.domain, x, r);
                const auto family = generate_ball_family(*grid, ball, task.value("family", 40),
                                                         task.value("seed", 777));
                const MoserResult mr = local_moser_check(grid, w, x, r, nu, family);
                worst = std::max(worst, mr.C_M);
                std::vector<double> row;
                for (int k = 0; k < grid->dim; ++k) row.push_back(x[k]);
                row.insert(row.end(), {r, mr.C_M});
                rows.push_back(std::move(row));
                ++used;
            } catch (const std::invalid_argument&) {
            } catch (const std::runtime_error&) {
            }
        }
    Verdict v;
    v.id = "moser-sweep";
    v.ref = "Thm 2.6";
    v.value = worst;
    v.pass = used > 0 && worst > 0 && std::isfinite(worst);
    v.detail = {{"cells_evaluated", used}, {"nu", nu}};
    ctx.report.verdicts.push_back(v);
    std::vector<std::string> cols;
    for (int k = 0; k < grid->dim; ++k) cols.push_back("x" + std::to_string(k));
    cols.insert(cols.end(), {"r", "C_M"});
    const std::string csv = ctx.out_dir + "/moser.csv";
    write_csv(csv, "moser", ctx.report.fingerprint, cols, rows);
    ctx.report.artifacts.push_back(csv);
}

void cmd_volume(CommandContext& ctx) {
    const json& task = ctx.cfg.task;
    const WeightParams w{ctx.cfg.params.weight.lambda, ctx.cfg.params.weight.alpha};
    const int n_samples = task.value("samples", 50);
    const double beta = ctx.cfg.domain.chart_scale();
    const double rmin = task.value("r_min", 0.05 * beta);
    const double rmax = task.value("r_max", 0.45 * beta);  // doubling needs 2r < beta
    Halton seq(ctx.cfg.domain.dim + 1);
    std::vector<std::pair<Vec, double>> samples;
    const Vec blo = ctx.cfg.domain.bbox_lo(), bhi = ctx.cfg.domain.bbox_hi();
    while (static_cast<int>(samples.size()) < n_samples) {
        const Vec u = seq.next();
        Vec x(ctx.cfg.domain.dim);
        for (int k = 0; k < ctx.cfg.domain.dim; ++k) x[k] = blo[k] + u[k] * (bhi[k] - blo[k]);
        if (!contains(ctx.cfg.domain, x) || distance(ctx.cfg.domain, x) <= 0) continue;
        samples.emplace_back(x, rmin + u[ctx.cfg.domain.dim] * (rmax - rmin));
    }
    const VolumeFit fit = volume_envelope_fit(ctx.cfg.domain, w, samples);
    const DoublingResult dres = doubling_constant(ctx.cfg.domain, w, samples);
    Verdict v1;
    v1.id = "volume-envelope";
    v1.ref = "Lemma 2.2";
    v1.value = fit.ratio();
    v1.pass = fit.feasible;
    v1.detail = {{"c1", fit.c1}, {"c2", fit.c2}};
    ctx.report.verdicts.push_back(v1);
    Verdict v2;
    v2.id = "doubling";
    v2.ref = "Cor 2.4";
    v2.value = dres.C_D;
    v2.pass = std::isfinite(dres.C_D) && dres.C_D > 0;
    ctx.report.verdicts.push_back(v2);

    if (task.value("exact_radial_check", false)) {
        const int N = ctx.cfg.domain.dim;
        const double r = task.value("exact_radial_r", 0.5 * beta);
        const BallSpec b = make_ball(ctx.cfg.domain, Vec::Zero(N), r);
        const double got = weighted_volume(ctx.cfg.domain, {w.lambda, 0.0}, b, 0.002, 6);
        const double surf = N * unit_ball_volume(N);
        const double expect = surf / (w.lambda + N) * std::pow(r, w.lambda + N);
        Verdict v3;
        v3.id = "volume-exact-radial";
        v3.ref = "Lemma 2.3";
        v3.value = got;
        v3.pass = std::abs(got - expect) <= 0.01 * expect;
        v3.detail = {{"expected", expect}};
        ctx.report.verdicts.push_back(v3);
    }

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < fit.samples.size(); ++i) {
        const auto& s = fit.samples[i];
        std::vector<double> row;
        for (int k = 0; k < ctx.cfg.domain.dim; ++k) row.push_back(s.x[k]);
        row.insert(row.end(), {s.r, s.volume, s.shape, s.ratio, dres.ratios[i]});
        rows.push_back(std::move(row));
    }
    std::vector<std::string> cols;
    for (int k = 0; k < ctx.cfg.domain.dim; ++k) cols.push_back("x" + std::to_string(k));
    cols.insert(cols.end(), {"r", "V", "shape", "ratio", "doubling"});
    const std::string csv = ctx.out_dir + "/volume.csv";
    write_csv(csv, "volume", ctx.report.fingerprint, cols, rows);
    ctx.report.artifacts.push_back(csv);
}

void cmd_logsob(CommandContext& ctx) {
    const auto grid = build_grid(ctx.cfg.domain, ctx.cfg.h, ctx.cfg.stagger);
    const json& task = ctx.cfg.task;
    const auto family = generate_family(*grid, task.value("family", 200), task.value("seed", 515));
    std::vector<double> eps_grid;
    for (double e = task.value("eps_min", 1e-4); e <= task.value("eps_max", 10.0) * 1.0000001;
         e *= std::pow(10.0, 0.1))
        eps_grid.push_back(e);
    if (grid->dim >= 3 && contains(grid->domain, Vec::Zero(grid->dim))) {
        const LogSobolevResult r = log_sobolev_origin(grid, family, eps_grid);
        Verdict v;
        v.id = r.verdict.id;
        v.ref = r.verdict.ref;
        v.value = r.fitted_K;
        v.pass = r.verdict.pass;
        v.detail = {{"worst_eps", r.worst_eps}, {"eps_star", r.eps_star_of_worst}};
        ctx.report.verdicts.push_back(v);
    }
    const LogSobolevResult r2 = log_sobolev_distance(grid, family, eps_grid);
    Verdict v2;
    v2.id = r2.verdict.id;
    v2.ref = r2.verdict.ref;
    v2.value = r2.fitted_K;
    v2.pass = r2.verdict.pass;
    v2.detail = {{"worst_eps", r2.worst_eps}, {"eps_star", r2.eps_star_of_worst}};
    ctx.report.verdicts.push_back(v2);
}

void cmd_certify(CommandContext& ctx) {
    const double budget = ctx.opts.budget_seconds > 0 ? ctx.opts.budget_seconds : 1e12;
    const auto results = run_acceptance(budget, ctx.out_dir, ctx.log ? *ctx.log : std::cout);
    for (const auto& r : results) {
        Verdict v;
        v.id = "criterion-" + std::to_string(r.id);
        v.ref = r.name;
        v.pass = r.pass;
        v.value = r.seconds;
        v.detail = {{"detail", r.detail}, {"skipped", r.skipped}};
        ctx.report.verdicts.push_back(v);
    }
}

}  // namespace

int run_command(const std::string& command, const CliOptions& opts, std::ostream& log) {
    const auto t0 = std::chrono::steady_clock::now();
    CommandContext ctx;
    ctx.opts = opts;
    ctx.log = &log;
    try {
        ctx.cfg = load_config(opts.config_path);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return 2;
    }
    ctx.out_dir = !opts.out_dir.empty() ? opts.out_dir : ctx.cfg.out_dir;
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) {
        log << "cannot create output directory " << ctx.out_dir << ": " << ec.message() << "\n";
        return 2;
    }
    ctx.report.command = command;
    ctx.report.fingerprint = ctx.cfg.fingerprint();
    try {
        if (command == "eig") cmd_eig(ctx);
        else if (command == "kernel") cmd_kernel(ctx);
        else if (command == "green") cmd_green(ctx);
        else if (command == "harnack") cmd_harnack(ctx);
        else if (command == "hardy") cmd_hardy(ctx);
        else if (command == "poincare") cmd_poincare(ctx);
        else if (command == "moser") cmd_moser(ctx);
        else if (command == "volume") cmd_volume(ctx);
        else if (command == "logsob") cmd_logsob(ctx);
        else if (command == "certify") cmd_certify(ctx);
        else {
            log << "unknown command: " << command << "\n";
            return 2;
        }
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        Verdict v;
        v.id = "aborted";
        v.detail = {{"error", e.what()}};
        ctx.report.verdicts.push_back(v);
        std::ofstream rep(ctx.out_dir + "/report.json");
        rep << ctx.report.to_json().dump(2) << "\n";
        return 1;
    }
    ctx.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream rep(ctx.out_dir + "/report.json");
    rep << ctx.report.to_json().dump(2) << "\n";
    log << "report: " << ctx.out_dir << "/report.json (" << (ctx.report.pass() ? "pass" : "FAIL")
        << ")\n";
    return ctx.report.pass() ? 0 : 1;
}

}  // namespace hklab
