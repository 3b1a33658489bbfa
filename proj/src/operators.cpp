#include "hklab/operators.hpp"

#include <cmath>

#include "hklab/spectral.hpp"

namespace hklab {

std::string family_name(Family f) {
    switch (f) {
        case Family::laplace: return "laplace";
        case Family::K: return "K";
        case Family::H: return "H";
        case Family::Kc: return "Kc";
        case Family::Hc: return "Hc";
        case Family::Lweighted: return "L";
        case Family::E: return "E";
        case Family::groundstate: return "groundstate";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "laplace") return Family::laplace;
    if (name == "K") return Family::K;
    if (name == "H") return Family::H;
    if (name == "Kc") return Family::Kc;
    if (name == "Hc") return Family::Hc;
    if (name == "L") return Family::Lweighted;
    if (name == "E") return Family::E;
    if (name == "groundstate") return Family::groundstate;
    throw std::invalid_argument("unknown operator family: " + name);
}

namespace {

// Builds a flux form from a positional weight plus a diagonal term:
//   Q(u) = h^{N-2} [ sum_faces w(midpoint) (u_i - u_j)^2
//                    + sum_ghosts w(crossing)/theta u_i^2 ] + sum_i diag_i u_i^2.
// Ghost faces are eliminated against the boundary crossing point, so the
// discrete wall sits where the distance function vanishes. Weights that
// vanish on the boundary therefore shed their Dirichlet term and realize the
// natural degenerate condition.
SpMat flux_form(const Grid& g, const std::function<double(const Vec&)>& weight_at,
                const Vec& diag) {
    const int n = g.n();
    const double scale = std::pow(g.h, g.dim - 2);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * (2 * g.dim + 1));
    Vec dval = diag;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < g.dim; ++k) {
            for (int s = 0; s < 2; ++s) {
                const int j = g.neighbor[i][Grid::slot(k, s)];
                if (j < 0) {
                    const double theta = g.ghost_theta[i][Grid::slot(k, s)];
                    const double w = weight_at(g.ghost_crossing(i, k, s));
                    if (!std::isfinite(w))
                        throw std::runtime_error("non-finite ghost weight during assembly");
                    if (w != 0.0) dval[i] += scale * w / theta;
                } else if (j > i) {
                    const double w = weight_at(g.face_midpoint(i, k, s));
                    if (!std::isfinite(w))
                        throw std::runtime_error("non-finite face weight during assembly");
                    if (w == 0.0) continue;
                    dval[i] += scale * w;
                    dval[j] += scale * w;
                    trip.emplace_back(i, j, -scale * w);
                    trip.emplace_back(j, i, -scale * w);
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, dval[i]);
    SpMat A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
}

}  // namespace

WeightedOperator assemble(const GridPtr& grid, Family family, const OperatorParams& params) {
    const Grid& g = *grid;
    const int n = g.n();
    const int N = g.dim;
    const double hN = std::pow(g.h, N);
    WeightedOperator op;
    op.grid = grid;
    op.family = family;
    op.params = params;

    const bool schrodinger = family == Family::laplace || family == Family::K ||
                             family == Family::H || family == Family::Kc ||
                             family == Family::Hc || family == Family::E;
    if (schrodinger) {
        Vec V = Vec::Zero(n);
        switch (family) {
            case Family::laplace:
                break;
            case Family::K: {
                if (N < 3) throw std::invalid_argument("family K requires N >= 3");
                const double cc = sqr(N - 2) / 4.0;
                for (int i = 0; i < n; ++i) {
                    if (g.normx[i] <= 0) throw std::runtime_error("node on the origin singularity");
                    V[i] = cc / sqr(g.normx[i]);
                }
                break;
            }
            case Family::Kc: {
                if (N < 3) throw std::invalid_argument("family Kc requires N >= 3");
                if (params.c <= 0 || params.c > sqr(N - 2) / 4.0)
                    throw std::invalid_argument("Kc needs c in (0, (N-2)^2/4]");
                for (int i = 0; i < n; ++i) {
                    if (g.normx[i] <= 0) throw std::runtime_error("node on the origin singularity");
                    V[i] = params.c / sqr(g.normx[i]);
                }
                break;
            }
            case Family::H:
                for (int i = 0; i < n; ++i) {
                    if (g.dist[i] <= 0) throw std::runtime_error("node on the boundary singularity");
                    V[i] = 0.25 / sqr(g.dist[i]);
                }
                break;
            case Family::Hc: {
                if (params.c <= 0 || params.c > 0.25)
                    throw std::invalid_argument("Hc needs c in (0, 1/4]");
                for (int i = 0; i < n; ++i) {
                    if (g.dist[i] <= 0) throw std::runtime_error("node on the boundary singularity");
                    V[i] = params.c / sqr(g.dist[i]);
                }
                break;
            }
            case Family::E: {
                if (!params.potential) throw std::invalid_argument("family E needs a potential spec");
                const auto& pot = *params.potential;
                if (pot.p <= N / 2.0) throw std::invalid_argument("V2 exponent must satisfy p > N/2");
                for (int i = 0; i < n; ++i) {
                    const double v1 = pot.V1 ? pot.V1(g.pos[i]) : 0.0;
                    const double bound = 0.25 / sqr(g.dist[i]);
                    if (std::abs(v1) > bound * (1 + 1e-12))
                        throw std::invalid_argument("V1 violates the 1/(4 d^2) bound at a node");
                    V[i] = v1 + (pot.V2 ? pot.V2(g.pos[i]) : 0.0);
                }
                break;
            }
            default:
                break;
        }
        Vec diag = Vec::Zero(n);
        for (int i = 0; i < n; ++i) diag[i] = -V[i] * hN;
        op.A = flux_form(g, [](const Vec&) { return 1.0; }, diag);
        op.m = Vec::Constant(n, hN);
        return op;
    }

    if (family == Family::Lweighted) {
        const WeightParams& w = params.weight;
        if (w.alpha < 0) throw std::invalid_argument("Lweighted needs alpha >= 0");
        if (w.lambda > 0 || w.lambda <= -N)
            throw std::invalid_argument("Lweighted needs lambda in (-N, 0]");
        op.A = flux_form(
            g, [&](const Vec& y) { return weight_value(g.domain, w, y); }, Vec::Zero(n));
        op.m.resize(n);
        for (int i = 0; i < n; ++i) {
            const double wv = weight_value(g.domain, w, g.pos[i]);
            if (!(wv > 0) || !std::isfinite(wv))
                throw std::runtime_error("node weight vanished or blew up during assembly");
            op.m[i] = hN * wv;
        }
        return op;
    }

    throw std::invalid_argument("assemble: use ground_state_transform for the groundstate family");
}

WeightedOperator ground_state_transform(const WeightedOperator& op, const SpectralData& spec) {
    const Grid& g = *op.grid;
    const int n = g.n();
    if (spec.phi1.size() != n) throw std::invalid_argument("eigenvector size does not match the grid");
    for (int i = 0; i < n; ++i)
        if (!(spec.phi1[i] > 0)) throw std::runtime_error("ground-state transform needs phi1 > 0");
    WeightedOperator out;
    out.grid = op.grid;
    out.family = Family::groundstate;
    out.params = op.params;
    const Vec& phi = spec.phi1;
    // pair-geometric face weights phi_i phi_j; no ghost fluxes since phi1
    // carries the boundary decay itself
    const double scale = std::pow(g.h, g.dim - 2);
    std::vector<Eigen::Triplet<double>> trip;
    Vec dval = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < g.dim; ++k) {
            const int j = g.neighbor[i][Grid::slot(k, 1)];
            if (j < 0) continue;
            const double w = scale * phi[i] * phi[j];
            dval[i] += w;
            dval[j] += w;
            trip.emplace_back(i, j, -w);
            trip.emplace_back(j, i, -w);
        }
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, dval[i]);
    out.A.resize(n, n);
    out.A.setFromTriplets(trip.begin(), trip.end());
    out.A.makeCompressed();
    out.m = op.m.cwiseProduct(phi.cwiseProduct(phi));
    return out;
}

double conjugation_defect(const WeightedOperator& op, const WeightedOperator& transformed,
                          const SpectralData& spec, const Vec& probe) {
    const Vec pw = spec.phi1.cwiseProduct(probe);
    const double lhs = transformed.form(probe);
    const double rhs = op.form(pw) - spec.lambda1 * op.mass_norm2(pw);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

}  // namespace hklab
