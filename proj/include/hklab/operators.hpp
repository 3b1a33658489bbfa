#ifndef HKLAB_OPERATORS_HPP
#define HKLAB_OPERATORS_HPP

#include <Eigen/Sparse>
#include <functional>
#include <optional>
#include <string>

#include "hklab/grid.hpp"

namespace hklab {

using SpMat = Eigen::SparseMatrix<double>;

enum class Family {
    laplace,      // -Delta, Dirichlet
    K,            // -Delta - ((N-2)^2/4)/|x|^2
    H,            // -Delta - 1/(4 d^2)
    Kc,           // -Delta - c/|x|^2
    Hc,           // -Delta - c/d^2
    Lweighted,    // -(1/w) div(w grad), w = |x|^lambda d^alpha
    E,            // -Delta - (V1 + V2)
    groundstate,  // -(1/phi1^2) div(phi1^2 grad)
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct PotentialSpec {
    std::function<double(const Vec&)> V1;  // |V1| <= 1/(4 d^2), asserted at assembly
    std::function<double(const Vec&)> V2;  // declared p-integrable part
    double p = 0.0;                        // declared exponent, p > N/2
};

struct OperatorParams {
    double c = 0.0;        // Kc / Hc coupling
    WeightParams weight;   // Lweighted exponents
    std::optional<PotentialSpec> potential;  // family E
};

struct WeightedOperator {
    GridPtr grid;
    SpMat A;        // symmetric quadratic form, Q(u) = u^T A u
    Vec m;          // positive node measure
    Family family = Family::laplace;
    OperatorParams params;

    int n() const { return static_cast<int>(m.size()); }
    double form(const Vec& u) const { return u.dot(A * u); }
    double mass_norm2(const Vec& u) const { return u.dot(m.cwiseProduct(u)); }
};

// Assembles the sparse symmetric form and measure for a family on a grid.
// Throws std::invalid_argument for inadmissible parameters and
// std::runtime_error when a node or face sits on a singularity.
WeightedOperator assemble(const GridPtr& grid, Family family, const OperatorParams& params = {});

struct SpectralData;  // spectral.hpp

// Conjugation by the ground state: flux form with phi1^2 face weights and
// measure m_i phi1(i)^2. The smallest eigenvalue of the result is ~0 and
// constants are exactly flux-free.
WeightedOperator ground_state_transform(const WeightedOperator& op, const SpectralData& spec);

// Defect of the quadratic-form identity Q~(w) = Q(phi1 w) - lambda1 ||phi1 w||_m^2
// on a probe vector; decays first order in h for smooth probes.
double conjugation_defect(const WeightedOperator& op, const WeightedOperator& transformed,
                          const SpectralData& spec, const Vec& probe);

}  // namespace hklab

#endif
