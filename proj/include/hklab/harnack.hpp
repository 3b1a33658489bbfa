#ifndef HKLAB_HARNACK_HPP
#define HKLAB_HARNACK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hklab/heat.hpp"

namespace hklab {

// Parabolic Harnack cylinder over a ball: base B(x, r/2) with early window
// (r^2/4, r^2/2) and late window (3 r^2/4, r^2), eight samples per window.
struct Cylinder {
    Vec center;
    double r = 0.0;
    BallSpec base;               // radius r/2 ball around the center
    std::vector<int> base_nodes; // grid nodes of base cap Omega
    std::vector<double> early_times, late_times;
    int samples_per_window = 8;
};

Cylinder make_cylinder(const GridPtr& grid, const Vec& x, double r, double gamma = 1.5,
                       int samples_per_window = 8);

struct PositiveField {
    std::vector<double> times;
    std::vector<Vec> values;
    Vec u0;  // initial data at t = 0
    std::uint64_t seed = 0;
    double theta_used = 0.5;
    bool regenerated = false;  // theta = 1 retry after an undershoot
};

// Evolves exp(smooth random field) over (0, horizon], sampling the given
// times; guaranteed strictly positive (retries with theta = 1, reported).
PositiveField generate_positive_solution(const WeightedOperator& op, std::uint64_t seed,
                                         std::vector<double> sample_times,
                                         EvolveOptions opts = {});

// sup over base x early window / inf over base x late window.
double harnack_quotient(const PositiveField& field, const Cylinder& cyl,
                        const Vec* node_scale = nullptr);

struct HarnackCell {
    Vec x;
    double r = 0.0;
    std::uint64_t seed = 0;
    double Q = 0.0;
};

struct HarnackReport {
    std::vector<HarnackCell> cells;
    double max_Q = 0.0;
    std::size_t argmax = 0;
    std::string mode;  // "divergence" or "schrodinger"
};

enum class SweepMode { divergence, schrodinger };

// Quotient sweep over positions x radii x seeds. In schrodinger mode the
// field is divided by d^{alpha/2} before quotients are taken. Certification
// requires alpha >= 1.
HarnackReport harnack_sweep(const WeightedOperator& op, const std::vector<Vec>& positions,
                            const std::vector<double>& radii,
                            const std::vector<std::uint64_t>& seeds, SweepMode mode,
                            double alpha, double gamma = 1.5);

// Deterministic sweep positions: interior Halton points plus boundary
// projections of the same sequence.
std::vector<Vec> sweep_positions(const DomainSpec& dom, int interior, int boundary);

struct CounterexampleReport {
    double alpha = 0.0;
    int N = 0;
    std::vector<double> radii;
    std::vector<double> quotients;      // per-ball sup/inf of v at the parabolic probe depth
    double growth = 0.0;                // Q(r_min)/Q(r_max)
    bool monotone = false;
    std::vector<double> residual_sup;   // discrete equation residual per grid level
    std::vector<double> residual_scale; // comparison scale per level
    double v_at_boundary = 0.0;
};

// Radial profile v(rho) = int_rho^1 (1-s)^{-alpha} s^{1-N} ds of the weakly
// degenerate annulus solution; adaptive Simpson after the substitution
// u = (1-s)^{1-alpha}.
double weak_degenerate_profile(double alpha, int N, double rho);

// Evaluates v, elliptic quotients over boundary-centered balls on a ladder of
// radii, and the discrete divergence-form residual on refining grids.
CounterexampleReport weak_degenerate_counterexample(double alpha, int N,
                                                    std::vector<double> radii,
                                                    const std::vector<double>& residual_h = {});

}  // namespace hklab

#endif
