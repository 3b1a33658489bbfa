#ifndef HKLAB_HEAT_HPP
#define HKLAB_HEAT_HPP

#include <functional>
#include <map>
#include <vector>

#include "hklab/spectral.hpp"

namespace hklab {

struct DtPolicy {
    double dt0 = 1e-4;
    double rho = 1.2;
    double dt_max = 1e-2;
    // defaults: dt0 = tmin/64, rho = 1.2, dt_max = tmax/64
    static DtPolicy for_range(double tmin, double tmax);
};

struct EvolveOptions {
    double theta = 0.5;  // Crank-Nicolson; theta = 1 fallback on undershoot
    DtPolicy policy;
    double inner_tol = 1e-10;
};

// theta-scheme integrator with per-dt cached solvers.
class Evolver {
public:
    Evolver(const WeightedOperator& op, EvolveOptions opts);
    // Advances u0 from t=0, invoking on_sample(j, t_j, u) at each requested time.
    void run(const Vec& u0, const std::vector<double>& times,
             const std::function<void(std::size_t, double, const Vec&)>& on_sample);

private:
    const WeightedOperator& op_;
    EvolveOptions opts_;
    std::map<long long, std::shared_ptr<SymSolver>> cache_;
    SymSolver& solver_for(double dt);
};

Vec evolve(const WeightedOperator& op, const Vec& u0, double t, const EvolveOptions& opts);

struct KernelSlice {
    int source = -1;
    std::vector<double> times;
    std::vector<Vec> values;  // k(t_j, ., y), densities against the measure m
    std::vector<double> mass; // sum_i m_i k(t_j, i, y)
    double theta_used = 0.5;
    bool undershoot_retry = false;
};

// Evolves the discrete delta at node y; min(times) must be >= 4 h^2.
KernelSlice kernel_column(const WeightedOperator& op, int y, std::vector<double> times,
                          EvolveOptions opts = {});

// Full kernel by dense symmetric eigendecomposition; node count capped at 3000.
class DenseOracle {
public:
    explicit DenseOracle(const WeightedOperator& op, int max_nodes = 3000);
    Eigen::MatrixXd kernel(double t) const;       // K(t), symmetric
    Vec column(double t, int y) const;            // k(t, ., y)
    double smallest_eigenvalue() const { return evals_.minCoeff(); }
    const Vec& eigenvalues() const { return evals_; }

private:
    Vec msqrt_inv_;
    Eigen::MatrixXd U_;
    Vec evals_;
};

struct GreenVector {
    int source = -1;
    Vec g;
    double residual = 0.0;
};

// Solves A g = e_y by conjugate gradients; requires lambda1 > 0.
GreenVector green_function(const WeightedOperator& op, int y, double lambda1);

// Trapezoid time integration of oracle kernel columns over a log ladder with
// an e^{-lambda1 t} tail; test oracle for green_function.
Vec green_by_time_integration(const DenseOracle& oracle, int y, double lambda1, double t0,
                              double t1, int steps);

}  // namespace hklab

#endif
