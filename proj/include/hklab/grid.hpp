#ifndef HKLAB_GRID_HPP
#define HKLAB_GRID_HPP

#include <memory>
#include <vector>

#include "hklab/geometry.hpp"

namespace hklab {

// Uniform lattice over the domain. Node positions are (k + stagger/2) * h per
// coordinate on the absolute lattice, retained when strictly inside the domain.
struct Grid {
    DomainSpec domain;
    double h = 0.0;
    bool stagger = true;
    int dim = 0;
    std::vector<Vec> pos;                    // node positions
    std::vector<std::vector<int>> neighbor;  // node -> 2*dim neighbor ids, -1 when absent
    // boundary-crossing fraction of the cell for absent neighbors (1 when the
    // neighbor position itself sits on the boundary, 1/2 for stagger-aligned
    // flat walls); 1 for present neighbors
    std::vector<std::vector<double>> ghost_theta;
    std::vector<bool> dirichlet_mask;        // stencil leaves the domain
    Vec dist;                                // d(x_i)
    Vec normx;                               // |x_i|

    int n() const { return static_cast<int>(pos.size()); }
    // neighbor slot for direction k, side s in {0,1} (minus, plus)
    static int slot(int k, int s) { return 2 * k + s; }
    // midpoint of the face between node i and its (k, s)-neighbor position
    Vec face_midpoint(int i, int k, int s) const {
        Vec y = pos[i];
        y[k] += (s ? 0.5 : -0.5) * h;
        return y;
    }
    // boundary crossing point of a ghost face segment
    Vec ghost_crossing(int i, int k, int s) const {
        Vec y = pos[i];
        y[k] += (s ? 1.0 : -1.0) * ghost_theta[i][slot(k, s)] * h;
        return y;
    }
};

using GridPtr = std::shared_ptr<const Grid>;

// Throws std::invalid_argument when h is too coarse (fewer than 9 interior
// nodes) or the retained node graph is disconnected.
GridPtr build_grid(const DomainSpec& dom, double h, bool stagger = true);

}  // namespace hklab

#endif
