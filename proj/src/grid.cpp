#include "hklab/grid.hpp"

#include <cmath>
#include <deque>
#include <map>

namespace hklab {

GridPtr build_grid(const DomainSpec& dom, double h, bool stagger) {
    if (h <= 0) throw std::invalid_argument("grid spacing must be positive");
    if (h > dom.inradius() / 2)
        throw std::invalid_argument("grid spacing too coarse for the domain");
    auto g = std::make_shared<Grid>();
    g->domain = dom;
    g->h = h;
    g->stagger = stagger;
    g->dim = dom.dim;
    const int N = dom.dim;
    const Vec blo = dom.bbox_lo(), bhi = dom.bbox_hi();
    const double off = stagger ? 0.5 : 0.0;
    std::vector<long> klo(N), khi(N);
    for (int k = 0; k < N; ++k) {
        klo[k] = static_cast<long>(std::floor(blo[k] / h - off)) - 1;
        khi[k] = static_cast<long>(std::ceil(bhi[k] / h - off)) + 1;
    }
    std::map<std::vector<long>, int> index;
    std::vector<long> kk(N, 0);
    for (int k = 0; k < N; ++k) kk[k] = klo[k];
    std::vector<std::vector<long>> coords;
    while (true) {
        Vec x(N);
        for (int k = 0; k < N; ++k) x[k] = (kk[k] + off) * h;
        bool inside = contains(dom, x);
        double d = 0;
        if (inside) {
            d = distance(dom, x);
            if (d <= 0) inside = false;
        }
        if (inside) {
            index[kk] = static_cast<int>(g->pos.size());
            g->pos.push_back(x);
            coords.push_back(kk);
        }
        int k = 0;
        while (k < N && ++kk[k] > khi[k]) kk[k++] = klo[k];
        if (k == N) break;
    }
    const int n = g->n();
    const int min_nodes = N >= 2 ? 9 : 3;
    if (n < min_nodes)
        throw std::invalid_argument("grid resolution too coarse: fewer than " +
                                    std::to_string(min_nodes) + " interior nodes");

    if (stagger) {
        for (int i = 0; i < n; ++i)
            if (g->pos[i].norm() < 1e-13 * std::max(1.0, dom.inradius()))
                throw std::logic_error("staggered grid produced a node at the origin");
    }

    g->neighbor.assign(n, std::vector<int>(2 * N, -1));
    g->ghost_theta.assign(n, std::vector<double>(2 * N, 1.0));
    g->dirichlet_mask.assign(n, false);
    g->dist.resize(n);
    g->normx.resize(n);
    auto strictly_inside = [&](const Vec& y) { return contains(dom, y) && distance(dom, y) > 0; };
    for (int i = 0; i < n; ++i) {
        g->dist[i] = distance(dom, g->pos[i]);
        g->normx[i] = g->pos[i].norm();
        for (int k = 0; k < N; ++k) {
            for (int s = 0; s < 2; ++s) {
                std::vector<long> nb = coords[i];
                nb[k] += s ? 1 : -1;
                auto it = index.find(nb);
                if (it != index.end()) {
                    g->neighbor[i][Grid::slot(k, s)] = it->second;
                } else {
                    g->dirichlet_mask[i] = true;
                    // locate the boundary crossing along the axis segment so
                    // Dirichlet elimination sees the wall where the distance
                    // function does
                    double lo = 0.0, hi = 1.0;
                    Vec y = g->pos[i];
                    for (int bi = 0; bi < 50; ++bi) {
                        const double mid = 0.5 * (lo + hi);
                        y[k] = g->pos[i][k] + (s ? 1.0 : -1.0) * mid * h;
                        (strictly_inside(y) ? lo : hi) = mid;
                    }
                    g->ghost_theta[i][Grid::slot(k, s)] = hi;
                }
            }
        }
    }

    // connectivity (needed for the Perron positivity of ground states)
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        const int i = queue.front();
        queue.pop_front();
        for (int j : g->neighbor[i])
            if (j >= 0 && !seen[j]) {
                seen[j] = 1;
                ++reached;
                queue.push_back(j);
            }
    }
    if (reached != n) throw std::invalid_argument("grid node graph is disconnected; refine h");
    return g;
}

}  // namespace hklab
