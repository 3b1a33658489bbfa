#ifndef HKLAB_UTIL_HPP
#define HKLAB_UTIL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hklab {

using Vec = Eigen::VectorXd;

// Halton sequence in [0,1)^dim, bases 2,3,5,7,... Deterministic position sampling.
class Halton {
public:
    explicit Halton(int dim);
    Vec next();

private:
    int dim_;
    long index_ = 0;
    static double radical_inverse(long i, int base);
};

// FNV-1a over a string; used for config/operator fingerprints.
std::uint64_t fnv1a(const std::string& s);
std::string fnv1a_hex(const std::string& s);

// Round-trip decimal formatting (%.17g) so CSV bodies are byte-stable.
std::string format_full(double v);

// Smooth random field on points: sum of a few random low-frequency cosine modes.
// Deterministic in (seed, points). Amplitude O(1).
Vec smooth_random_field(const std::vector<Vec>& points, std::uint64_t seed, int modes = 4,
                        double freq_scale = 2.0);

inline double sqr(double x) { return x * x; }

// Volume of the unit ball in R^N.
double unit_ball_volume(int N);

}  // namespace hklab

#endif
