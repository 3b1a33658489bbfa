#ifndef HKLAB_BOUNDS_HPP
#define HKLAB_BOUNDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "hklab/geometry.hpp"

namespace hklab {

enum class EnvelopeFamily {
    dirichlet_small,     // min{1, dd'/t} t^{-N/2}
    dirichlet_large,     // d d' e^{-l1 t}
    origin_small,        // min{(|x|+rt)^{(N-2)/2}(|y|+rt)^{(N-2)/2}, dd'/t} (|x||y|)^{(2-N)/2} t^{-N/2}
    origin_large,        // d d' (|x||y|)^{(2-N)/2} e^{-l1 t}
    bry_small,           // min{1, sqrt(dd'/t)} t^{-N/2}
    bry_large,           // sqrt(dd') e^{-l1 t}
    degenerate_L,        // min{t^{-a/2}, (dd')^{-a/2}} t^{-N/2}
    degenerate_L_lambda, // min{t^{-a/2}, (|x|+rt)^{|l|/2}(|y|+rt)^{|l|/2}/(dd')^{a/2}} t^{-N/2}
    general_E_small,     // min{1, (dd')^{a/2}/t^{a/2}} t^{-N/2}
    general_E_large,     // (dd')^{a/2} e^{-l1 t}
    green,               // min{|x-y|^{2-N}, (dd')^{a/2} |x-y|^{2-N-a}}
    kc_small,            // as origin_small with l(c) = 2-N+sqrt((N-2)^2-4c)
    kc_large,
    hc_small,            // as general_E with a(c) = 1+sqrt(1-4c)
    hc_large,
};

std::string envelope_family_name(EnvelopeFamily f);

struct Envelope {
    EnvelopeFamily family = EnvelopeFamily::dirichlet_small;
    int N = 2;
    double alpha = 0.0;   // degenerate / general-E boundary exponent
    double lambda = 0.0;  // degenerate-L-lambda origin exponent
    double c = 0.0;       // Kc / Hc coupling; lambda(c), alpha(c) recomputed on use
    std::optional<double> lambda1;  // required by large-time families

    // fitted constants: C1 e^{-g1 z} <= k/S <= C2 e^{-g2 z}, z = |x-y|^2/t
    double C1 = 0.0, C2 = 0.0, g1 = 0.0, g2 = 0.0;
    bool feasible = false;
    double ratio() const { return C2 / C1; }

    double coupling_lambda() const;  // 2-N+sqrt((N-2)^2-4c)
    double coupling_alpha() const;   // 1+sqrt(1-4c)
};

// Envelope shape S(x,y,t) with the Gaussian factor excluded; d-values are
// computed from the domain. Green family ignores t.
double shape(const Envelope& env, const DomainSpec& dom, const Vec& x, const Vec& y, double t);

struct KernelSample {
    Vec x, y;
    double t = 0.0;   // unused by the green family
    double k = 0.0;   // positive kernel or green value
};

// Two-sided fit over a Gaussian rate grid; minimizes C2/C1 subject to
// C1 <= C2, g2 <= g1, ties broken by larger g2. Rates are ignored (g=0)
// for the green family.
Envelope fit_constants(const std::vector<KernelSample>& samples, Envelope env,
                       const DomainSpec& dom, std::vector<double> rate_grid = {});

std::vector<double> default_rate_grid();

// Worst samples of a fitted envelope (largest k/(S e) and smallest), for reports.
struct FitDiagnostics {
    std::size_t arg_upper = 0, arg_lower = 0;
    double upper_slack = 0.0, lower_slack = 0.0;
};
FitDiagnostics fit_diagnostics(const std::vector<KernelSample>& samples, const Envelope& env,
                               const DomainSpec& dom);

struct CrossoverResult {
    bool found = false;
    double t_star = 0.0;
    std::vector<double> times;
    std::vector<double> spread;  // relative spread of k e^{l1 t} / (phi phi) per time
};

// Normalized-ratio spread over (x,y) pairs; t* is the first ladder time after
// which the spread stays <= threshold.
CrossoverResult regime_crossover(const std::vector<double>& times,
                                 const std::vector<std::vector<double>>& ratios_per_time,
                                 double threshold = 0.05);

}  // namespace hklab

#endif
