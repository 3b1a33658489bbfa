#ifndef HKLAB_SPECTRAL_HPP
#define HKLAB_SPECTRAL_HPP

#include <cstdint>
#include <functional>
#include <string>

#include "hklab/operators.hpp"

namespace hklab {

// Shared symmetric solver: direct LDLT for moderate problems, conjugate
// gradients with diagonal preconditioning for large 3D systems.
class SymSolver {
public:
    SymSolver(SpMat S, double tol = 1e-10, int dim_hint = 3, bool force_iterative = false);
    // Throws std::runtime_error when the solve fails to reach the tolerance.
    Vec solve(const Vec& b) const;
    Vec solve_guess(const Vec& b, const Vec& guess) const;
    bool healthy() const { return healthy_; }

private:
    SpMat S_;
    double tol_;
    bool direct_ = false;
    bool healthy_ = true;
    std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
    std::shared_ptr<Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper>> cg_;
    Vec check(const Vec& b, Vec x) const;
};

struct SpectralData {
    double lambda1 = 0.0;
    Vec phi1;
    double residual = 0.0;
    int iterations = 0;
    std::uint64_t seed = 0;
};

struct PencilOptions {
    double tol = 1e-10;
    double inner_tol = 1e-10;
    int max_iterations = 400;
    std::uint64_t seed = 20240817;
    bool mean_zero = false;   // minimize over the B-mean-zero subspace
    bool force_iterative = false;
    bool allow_shift = true;  // second-stage Rayleigh-anchored shift
    int dim_hint = 3;
};

struct QuotientResult {
    double mu = 0.0;
    Vec minimizer;
    double residual = 0.0;
    std::string constraint = "none";
    int iterations = 0;
};

// Smallest eigenvalue of the pencil A u = mu B u with diagonal positive B,
// by inverse iteration with a fixed two-stage shift schedule.
QuotientResult smallest_pencil_eig(const SpMat& A, const Vec& Bdiag, const PencilOptions& opts);

// Principal eigenpair of a weighted operator; phi1 positive and normalized to
// sum m_i phi1(i)^2 = 1. Throws on non-convergence or positivity loss.
SpectralData principal_eigenpair(const WeightedOperator& op, double tol = 1e-10,
                                 std::uint64_t seed = 20240817, int max_iterations = 400);

// Generalized quotient min u^T A u / u^T diag(B) u, optionally over mean-zero u.
QuotientResult generalized_min_quotient(const SpMat& A, const Vec& Bdiag, bool mean_zero,
                                        const PencilOptions& opts = {});

struct EnvelopeFitResult {
    double c1 = 0.0, c2 = 0.0;
    int arg_min = -1, arg_max = -1;
    int guarded = 0;
    double ratio() const { return c2 / c1; }
};

// Fit of min/max of phi1(i) / s(x_i) over guarded nodes (d >= guard, |x| >= guard).
EnvelopeFitResult envelope_fit(const Grid& grid, const SpectralData& spec,
                               const std::function<double(const Vec&)>& shape,
                               double guard);

}  // namespace hklab

#endif
