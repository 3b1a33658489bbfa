// temporary probe for acceptance-critical values
#include <chrono>
#include <iostream>

#include "hklab/inequalities.hpp"

using namespace hklab;
using Clock = std::chrono::steady_clock;

double tic_toc(Clock::time_point& t0) {
    const auto t1 = Clock::now();
    const double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return s;
}

int main(int argc, char** argv) {
    const std::string what = argc > 1 ? argv[1] : "all";
    auto t0 = Clock::now();
    if (what == "hardy33" || what == "all") {
        const auto grid = build_grid(DomainSpec::ball_domain(3, 1.0), 2.0 / 33, true);
        std::cout << "grid 33^3 nodes=" << grid->n() << " (" << tic_toc(t0) << "s)\n";
        const auto q = improved_hardy_constant(grid);
        std::cout << "improved hardy mu(33^3) = " << q.mu << " iters=" << q.iterations << " (" << tic_toc(t0) << "s)\n";
    }
    if (what == "hardy49") {
        const auto grid = build_grid(DomainSpec::ball_domain(3, 1.0), 2.0 / 49, true);
        std::cout << "grid 49^3 nodes=" << grid->n() << " (" << tic_toc(t0) << "s)\n";
        const auto q = improved_hardy_constant(grid);
        std::cout << "improved hardy mu(49^3) = " << q.mu << " iters=" << q.iterations << " (" << tic_toc(t0) << "s)\n";
    }
    if (what == "strip" || what == "all") {
        for (double hr : {1e-4, 5e-5}) {
            const double mu = boundary_strip_hardy_radial(3, 1.0, 0.1, hr);
            std::cout << "strip radial mu(hr=" << hr << ") = " << mu << " (" << tic_toc(t0) << "s)\n";
        }
        std::cout << "halfline oracle mu = " << halfline_hardy_1d(0.1, 1e-5) << " (" << tic_toc(t0) << "s)\n";
    }
    if (what == "plain" || what == "all") {
        for (double h : {1.0 / 64, 1.0 / 96}) {
            const auto grid = build_grid(DomainSpec::unit_box(2), h, true);
            const auto q = plain_hardy_quotient(grid);
            std::cout << "plain hardy mu(h=" << h << ") = " << q.mu << " (" << tic_toc(t0) << "s)\n";
        }
    }
    if (what == "bft" || what == "all") {
        const auto grid = build_grid(DomainSpec::unit_box(2), 1.0 / 48, true);
        const auto q = bft_hardy_constant(grid, 1.0);
        std::cout << "bft mu(h=1/48, D=1) = " << q.mu << " (" << tic_toc(t0) << "s)\n";
    }
    if (what == "counter" || what == "all") {
        const auto rep = weak_degenerate_counterexample(0.5, 2, {0.2, 0.1, 0.05, 0.025}, {});
        std::cout << "counterexample quotients:";
        for (double q : rep.quotients) std::cout << " " << q;
        std::cout << " growth=" << rep.growth << " monotone=" << rep.monotone << " (" << tic_toc(t0) << "s)\n";
    }
    if (what == "eig2d" || what == "all") {
        const auto grid = build_grid(DomainSpec::unit_box(2), 1.0 / 128, false);
        const auto op = assemble(grid, Family::laplace);
        const auto sd = principal_eigenpair(op, 1e-10);
        std::cout << "square lambda1 = " << sd.lambda1 << " vs " << 2 * M_PI * M_PI
                  << " rel=" << std::abs(sd.lambda1 - 2 * M_PI * M_PI) / (2 * M_PI * M_PI)
                  << " iters=" << sd.iterations << " (" << tic_toc(t0) << "s)\n";
    }
    return 0;
}
