#ifndef HKLAB_INEQUALITIES_HPP
#define HKLAB_INEQUALITIES_HPP

#include <string>
#include <vector>

#include "hklab/harnack.hpp"
#include "hklab/testfuncs.hpp"

namespace hklab {

struct InequalityVerdict {
    std::string id;
    std::string ref;
    double fitted = 0.0;
    bool pass = false;
    int excluded = 0;
    int family_size = 0;
    double aux = 0.0;
    std::string note;
};

// Flux form restricted to a node subset. Dirichlet closure keeps ghost-face
// diagonal terms for faces leaving the subset; natural closure drops them.
struct SubForm {
    std::vector<int> nodes;
    std::vector<int> global_to_local;
    SpMat A;
};
SubForm flux_subform(const Grid& grid, const std::vector<int>& nodes,
                     const std::function<double(const Vec&)>& face_weight, bool dirichlet_closure);

// Node-centered l2 gradient magnitude (central differences, one-sided at the
// boundary stencil).
Vec gradient_magnitude(const Grid& grid, const Vec& u);

// X(t) = 1/(1 - ln t) on (0,1].
double X_log(double t);

// min of (|grad u|^2 - ((N-2)^2/4) u^2/|x|^2) / (u^2/d^2); N >= 3, origin inside.
QuotientResult improved_hardy_constant(const GridPtr& grid, const PencilOptions& opts = {});

// min of |grad u|^2 / (u^2/(4 d^2)) on a convex domain.
QuotientResult plain_hardy_quotient(const GridPtr& grid, const PencilOptions& opts = {});

//

// Strip quotient int |x|^{2-N}|grad f|^2 / int |x|^{2-N} f^2/d^2 over functions
// supported in the strip {d <= delta}. General grid path; requires >= 10 layers.
QuotientResult boundary_strip_hardy(const GridPtr& grid, double delta,
                                    const PencilOptions& opts = {});

// Radial reduction of the strip quotient for the ball (the angular part only
// raises the quotient); 1D pencil with weight r on (R-delta, R).
double boundary_strip_hardy_radial(int N, double R, double delta, double hr);

// 1D oracle: min int f'^2 / int f^2/x^2 over (0, delta), f(0)=f(delta)=0.
double halfline_hardy_1d(double delta, double hr);

// Piecewise critical potential check: grad-energy dominates int V_eps u^2 on
// every family member, plus the pencil quotient.
InequalityVerdict veps_hardy_check(const GridPtr& grid, double eps, const std::vector<Vec>& family,
                                   const PencilOptions& opts = {});

// min of (|grad u|^2 - u^2/(4d^2)) / ((1/4) X^2(d/D) u^2/d^2) on a convex domain.
QuotientResult bft_hardy_constant(const GridPtr& grid, double D, const PencilOptions& opts = {});

// Hardy-Moser: smallest C with int u^{2(1+2/N)} <= C^{-1}... fitted as
// min over the family of num * mass^{2/N} / int u^{2(1+2/N)}.
InequalityVerdict hardy_moser_check(const GridPtr& grid, const std::vector<Vec>& family);

struct HardySobolevOptions {
    double q = 0.0;      // Lq exponent for the d-weighted route; default 2N/(N-2)
    double delta = 0.0;  // strip parameter of the two-term L1 route; default 0.2 inradius
    double D = 0.0;      // X-weight scale; default sup |x|
};

// Fitted constants for the four Hardy-Sobolev style inequalities.
std::vector<InequalityVerdict> hardy_sobolev_checks(const GridPtr& grid,
                                                    const std::vector<Vec>& family,
                                                    HardySobolevOptions opt = {});

struct LogSobolevResult {
    InequalityVerdict verdict;
    double fitted_K = 0.0;
    double worst_eps = 0.0;
    int worst_member = -1;
    double eps_star_of_worst = 0.0;
    bool eps_star_within_one_step = false;
};

// id = "logsob-origin": entropy against |x|^{(2-N)/2} d(x), energy of family K,
// kappa = (N+2)/4. id = "logsob-distance": d-weighted entropy, degenerate
// energy with the a.e. Delta d correction, kappa = (N+1)/4.
LogSobolevResult log_sobolev_origin(const GridPtr& grid, const std::vector<Vec>& family,
                                    const std::vector<double>& eps_grid);
LogSobolevResult log_sobolev_distance(const GridPtr& grid, const std::vector<Vec>& family,
                                      const std::vector<double>& eps_grid);

struct PoincareResult {
    double mu = 0.0;   // smallest mean-zero pencil eigenvalue
    double C_P = 0.0;  // 1/(mu r^2)
    int nodes = 0;
};

PoincareResult local_poincare_constant(const GridPtr& grid, const WeightParams& w, const Vec& x,
                                       double r, const PencilOptions& opts = {});

struct MoserResult {
    double C_M = 0.0;
    int family_size = 0;
    double volume = 0.0;
};

// Fitted local Moser constant over a ball family; weight |y|^lambda d^alpha,
// nu >= N + alpha (or nu >= N for the interior route).
MoserResult local_moser_check(const GridPtr& grid, const WeightParams& w, const Vec& x, double r,
                              double nu, const std::vector<Vec>& ball_family);

// Fitted mean-value constant: sup_{B(x,r/2) x (r^2/2, r^2)} v^2 *
// r^2 V(x,r) / iint w v^2; V is the discrete weighted ball volume.
double mean_value_check(const WeightedOperator& op, const PositiveField& field, const Vec& x,
                        double r, double gamma = 1.5);

}  // namespace hklab

#endif
