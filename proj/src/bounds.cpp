#include "hklab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hklab {

std::string envelope_family_name(EnvelopeFamily f) {
    switch (f) {
        case EnvelopeFamily::dirichlet_small: return "dirichlet-small";
        case EnvelopeFamily::dirichlet_large: return "dirichlet-large";
        case EnvelopeFamily::origin_small: return "origin-small";
        case EnvelopeFamily::origin_large: return "origin-large";
        case EnvelopeFamily::bry_small: return "bry-small";
        case EnvelopeFamily::bry_large: return "bry-large";
        case EnvelopeFamily::degenerate_L: return "degenerate-L";
        case EnvelopeFamily::degenerate_L_lambda: return "degenerate-L-lambda";
        case EnvelopeFamily::general_E_small: return "general-E-small";
        case EnvelopeFamily::general_E_large: return "general-E-large";
        case EnvelopeFamily::green: return "green";
        case EnvelopeFamily::kc_small: return "kc-small";
        case EnvelopeFamily::kc_large: return "kc-large";
        case EnvelopeFamily::hc_small: return "hc-small";
        case EnvelopeFamily::hc_large: return "hc-large";
    }
    return "?";
}

double Envelope::coupling_lambda() const {
    const double disc = sqr(N - 2) - 4 * c;
    if (disc < 0) throw std::invalid_argument("kc coupling needs c <= (N-2)^2/4");
    return 2.0 - N + std::sqrt(disc);
}

double Envelope::coupling_alpha() const {
    const double disc = 1.0 - 4 * c;
    if (disc < 0) throw std::invalid_argument("hc coupling needs c <= 1/4");
    return 1.0 + std::sqrt(disc);
}

namespace {

double require_lambda1(const Envelope& env) {
    if (!env.lambda1) throw std::invalid_argument("large-time envelope needs lambda1");
    return *env.lambda1;
}

double origin_shape(int N, double lam, const DomainSpec& dom, const Vec& x, const Vec& y,
                    double t) {
    // min{(|x|+sqrt t)^{|l|/2}(|y|+sqrt t)^{|l|/2}, dd'/t} (|x||y|)^{l/2} t^{-N/2}
    const double dx = distance(dom, x), dy = distance(dom, y);
    const double nx = x.norm(), ny = y.norm();
    const double st = std::sqrt(t);
    const double al = std::abs(lam);
    const double b1 = std::pow(nx + st, al / 2) * std::pow(ny + st, al / 2);
    const double b2 = dx * dy / t;
    return std::min(b1, b2) * std::pow(nx * ny, lam / 2) * std::pow(t, -0.5 * N);
}

}  // namespace

double shape(const Envelope& env, const DomainSpec& dom, const Vec& x, const Vec& y, double t) {
    const int N = env.N;
    const double tN = std::pow(t, -0.5 * N);
    switch (env.family) {
        case EnvelopeFamily::dirichlet_small: {
            const double dd = distance(dom, x) * distance(dom, y);
            return std::min(1.0, dd / t) * tN;
        }
        case EnvelopeFamily::dirichlet_large: {
            const double l1 = require_lambda1(env);
            return distance(dom, x) * distance(dom, y) * std::exp(-l1 * t);
        }
        case EnvelopeFamily::origin_small:
            return origin_shape(N, 2.0 - N, dom, x, y, t);
        case EnvelopeFamily::origin_large: {
            const double l1 = require_lambda1(env);
            return distance(dom, x) * distance(dom, y) *
                   std::pow(x.norm() * y.norm(), (2.0 - N) / 2) * std::exp(-l1 * t);
        }
        case EnvelopeFamily::bry_small: {
            const double dd = distance(dom, x) * distance(dom, y);
            return std::min(1.0, std::sqrt(dd / t)) * tN;
        }
        case EnvelopeFamily::bry_large: {
            const double l1 = require_lambda1(env);
            return std::sqrt(distance(dom, x) * distance(dom, y)) * std::exp(-l1 * t);
        }
        case EnvelopeFamily::degenerate_L: {
            const double dd = distance(dom, x) * distance(dom, y);
            return std::min(std::pow(t, -0.5 * env.alpha), std::pow(dd, -0.5 * env.alpha)) * tN;
        }
        case EnvelopeFamily::degenerate_L_lambda: {
            const double dd = distance(dom, x) * distance(dom, y);
            const double st = std::sqrt(t);
            const double al = std::abs(env.lambda);
            const double b2 = std::pow(x.norm() + st, al / 2) * std::pow(y.norm() + st, al / 2) /
                              std::pow(dd, 0.5 * env.alpha);
            return std::min(std::pow(t, -0.5 * env.alpha), b2) * tN;
        }
        case EnvelopeFamily::general_E_small: {
            const double dd = distance(dom, x) * distance(dom, y);
            return std::min(1.0, std::pow(dd / t, 0.5 * env.alpha)) * tN;
        }
        case EnvelopeFamily::general_E_large: {
            const double l1 = require_lambda1(env);
            const double dd = distance(dom, x) * distance(dom, y);
            return std::pow(dd, 0.5 * env.alpha) * std::exp(-l1 * t);
        }
        case EnvelopeFamily::green: {
            if (N < 3) throw std::invalid_argument("green envelope is stated for N >= 3");
            const double r = (x - y).norm();
            if (r <= 0) throw std::invalid_argument("green envelope needs x != y");
            const double dd = distance(dom, x) * distance(dom, y);
            const double b1 = std::pow(r, 2.0 - N);
            const double b2 = std::pow(dd, 0.5 * env.alpha) * std::pow(r, 2.0 - N - env.alpha);
            return std::min(b1, b2);
        }
        case EnvelopeFamily::kc_small:
            return origin_shape(N, env.coupling_lambda(), dom, x, y, t);
        case EnvelopeFamily::kc_large: {
            const double l1 = require_lambda1(env);
            return distance(dom, x) * distance(dom, y) *
                   std::pow(x.norm() * y.norm(), env.coupling_lambda() / 2) * std::exp(-l1 * t);
        }
        case EnvelopeFamily::hc_small: {
            const double a = env.coupling_alpha();
            const double dd = distance(dom, x) * distance(dom, y);
            return std::min(1.0, std::pow(dd / t, 0.5 * a)) * tN;
        }
        case EnvelopeFamily::hc_large: {
            const double l1 = require_lambda1(env);
            const double a = env.coupling_alpha();
            const double dd = distance(dom, x) * distance(dom, y);
            return std::pow(dd, 0.5 * a) * std::exp(-l1 * t);
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<double> default_rate_grid() {
    // {1/32, 1/16, 1/8, 1/4, 1/2} of the reference rate 1/4
    return {1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8};
}

Envelope fit_constants(const std::vector<KernelSample>& samples, Envelope env,
                       const DomainSpec& dom, std::vector<double> rate_grid) {
    if (samples.empty()) throw std::invalid_argument("empty sample set");
    for (const auto& s : samples)
        if (!(s.k > 0)) throw std::invalid_argument("kernel samples must be positive");
    const bool is_green = env.family == EnvelopeFamily::green;
    if (rate_grid.empty()) rate_grid = is_green ? std::vector<double>{0.0} : default_rate_grid();

    // precompute k/S and z = |x-y|^2/t once
    std::vector<double> base(samples.size()), z(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double S = shape(env, dom, samples[i].x, samples[i].y, samples[i].t);
        if (!(S > 0)) throw std::invalid_argument("vanishing envelope shape at a sample");
        base[i] = samples[i].k / S;
        z[i] = is_green ? 0.0 : (samples[i].x - samples[i].y).squaredNorm() / samples[i].t;
    }
    auto extremes = [&](double g) {
        double lo = std::numeric_limits<double>::max(), hi = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double v = base[i] * std::exp(g * z[i]);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return std::pair<double, double>(lo, hi);
    };

    env.feasible = false;
    double best = std::numeric_limits<double>::max();
    for (double g2 : rate_grid) {
        const double C2 = extremes(g2).second;
        for (double g1 : rate_grid) {
            if (g1 < g2) continue;
            const double C1 = extremes(g1).first;
            if (!(C1 > 0) || C1 > C2) continue;
            const double obj = C2 / C1;
            const bool better = obj < best * (1 - 1e-12) ||
                                (obj < best * (1 + 1e-12) && env.feasible && g2 > env.g2);
            if (better) {
                best = obj;
                env.C1 = C1;
                env.C2 = C2;
                env.g1 = g1;
                env.g2 = g2;
                env.feasible = true;
            }
        }
    }
    return env;
}

FitDiagnostics fit_diagnostics(const std::vector<KernelSample>& samples, const Envelope& env,
                               const DomainSpec& dom) {
    FitDiagnostics d;
    double worst_hi = -1.0, worst_lo = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double S = shape(env, dom, samples[i].x, samples[i].y, samples[i].t);
        const double zz = env.family == EnvelopeFamily::green
                              ? 0.0
                              : (samples[i].x - samples[i].y).squaredNorm() / samples[i].t;
        const double hi = samples[i].k / (S * std::exp(-env.g2 * zz)) / env.C2;
        const double lo = samples[i].k / (S * std::exp(-env.g1 * zz)) / env.C1;
        if (hi > worst_hi) {
            worst_hi = hi;
            d.arg_upper = i;
        }
        if (lo < worst_lo) {
            worst_lo = lo;
            d.arg_lower = i;
        }
    }
    d.upper_slack = worst_hi;
    d.lower_slack = worst_lo;
    return d;
}

CrossoverResult regime_crossover(const std::vector<double>& times,
                                 const std::vector<std::vector<double>>& ratios_per_time,
                                 double threshold) {
    CrossoverResult out;
    out.times = times;
    if (times.size() < 2) return out;  // flagged no-crossover, not an error
    out.spread.resize(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        const auto& r = ratios_per_time[j];
        const double lo = *std::min_element(r.begin(), r.end());
        const double hi = *std::max_element(r.begin(), r.end());
        const double mean = std::accumulate(r.begin(), r.end(), 0.0) / r.size();
        out.spread[j] = (hi - lo) / std::max(std::abs(mean), 1e-300);
    }
    for (std::size_t j = 0; j < times.size(); ++j) {
        bool ok = true;
        for (std::size_t i = j; i < times.size(); ++i) ok = ok && out.spread[i] <= threshold;
        if (ok) {
            out.found = true;
            out.t_star = times[j];
            break;
        }
    }
    return out;
}

}  // namespace hklab
