#include "hklab/util.hpp"

#include <cmath>
#include <cstdio>

namespace hklab {

Halton::Halton(int dim) : dim_(dim) {}

double Halton::radical_inverse(long i, int base) {
    double f = 1.0, r = 0.0;
    for (long n = i + 1; n > 0; n /= base) {
        f /= base;
        r += f * static_cast<double>(n % base);
    }
    return r;
}

Vec Halton::next() {
    static const int bases[] = {2, 3, 5, 7, 11, 13};
    Vec p(dim_);
    for (int k = 0; k < dim_; ++k) p[k] = radical_inverse(index_, bases[k]);
    ++index_;
    return p;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a_hex(const std::string& s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(s)));
    return buf;
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Vec smooth_random_field(const std::vector<Vec>& points, std::uint64_t seed, int modes,
                        double freq_scale) {
    if (points.empty()) return Vec();
    const int dim = static_cast<int>(points[0].size());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vec out = Vec::Zero(points.size());
    for (int m = 0; m < modes; ++m) {
        Vec k(dim);
        for (int d = 0; d < dim; ++d) k[d] = freq_scale * unif(rng) * M_PI;
        const double phase = M_PI * unif(rng);
        const double amp = unif(rng);
        for (std::size_t i = 0; i < points.size(); ++i)
            out[i] += amp * std::cos(k.dot(points[i]) + phase);
    }
    return out;
}

double unit_ball_volume(int N) {
    return std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

}  // namespace hklab
