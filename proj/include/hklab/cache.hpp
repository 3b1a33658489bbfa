#ifndef HKLAB_CACHE_HPP
#define HKLAB_CACHE_HPP

#include <optional>
#include <string>

#include "hklab/spectral.hpp"

namespace hklab {

// Content-addressed spectral cache: <fp>.json metadata plus <fp>.phi holding
// the eigenvector as raw little-endian doubles. Corrupted entries (length or
// checksum mismatch) read as misses. Writes go through a temp file + rename.
class SpectralCache {
public:
    SpectralCache(std::string dir, bool enabled);
    static std::string default_dir();

    std::optional<SpectralData> lookup(const std::string& fingerprint, int expected_n) const;
    void store(const std::string& fingerprint, const SpectralData& data) const;

private:
    std::string dir_;
    bool enabled_;
};

}  // namespace hklab

#endif
