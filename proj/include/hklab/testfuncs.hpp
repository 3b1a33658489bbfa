#ifndef HKLAB_TESTFUNCS_HPP
#define HKLAB_TESTFUNCS_HPP

#include <cstdint>
#include <vector>

#include "hklab/grid.hpp"

namespace hklab {

enum class GeneratorKind { tensor_sine, mollified_random, radial_bump, boundary_layer };

enum class SupportConstraint {
    vanish_on_boundary,            // discrete Dirichlet functions
    vanish_on_ball_boundary_only,  // compactly supported in a ball, free on the domain boundary
    free_on_boundary,
};

// Mixed family of discrete test functions, four generator kinds in equal
// parts, deterministic in the seed. No member is identically zero.
std::vector<Vec> generate_family(const Grid& grid, int count, std::uint64_t seed,
                                 SupportConstraint constraint = SupportConstraint::vanish_on_boundary);

// Family supported in a ball: members vanish near the ball walls but are free
// where the ball pokes through the domain boundary.
std::vector<Vec> generate_ball_family(const Grid& grid, const BallSpec& ball, int count,
                                      std::uint64_t seed);

}  // namespace hklab

#endif
