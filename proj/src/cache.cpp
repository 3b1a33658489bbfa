#include "hklab/cache.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace hklab {

namespace fs = std::filesystem;
using json = nlohmann::json;

SpectralCache::SpectralCache(std::string dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {
    if (enabled_) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw std::runtime_error("cannot create cache directory " + dir_ + ": " + ec.message());
    }
}

std::string SpectralCache::default_dir() {
    if (const char* env = std::getenv("HKLAB_CACHE_DIR")) return env;
    return ".hklab-cache";
}

namespace {

std::uint64_t payload_checksum(const Vec& phi) {
    std::string bytes(reinterpret_cast<const char*>(phi.data()), phi.size() * sizeof(double));
    return fnv1a(bytes);
}

}  // namespace

std::optional<SpectralData> SpectralCache::lookup(const std::string& fingerprint,
                                                  int expected_n) const {
    if (!enabled_) return std::nullopt;
    const fs::path meta_path = fs::path(dir_) / (fingerprint + ".json");
    const fs::path phi_path = fs::path(dir_) / (fingerprint + ".phi");
    std::ifstream meta_in(meta_path);
    if (!meta_in) return std::nullopt;
    json meta;
    try {
        meta_in >> meta;
    } catch (const json::exception&) {
        return std::nullopt;
    }
    if (meta.value("n", -1) != expected_n) return std::nullopt;
    std::ifstream phi_in(phi_path, std::ios::binary);
    if (!phi_in) return std::nullopt;
    SpectralData sd;
    sd.phi1.resize(expected_n);
    phi_in.read(reinterpret_cast<char*>(sd.phi1.data()),
                static_cast<std::streamsize>(expected_n * sizeof(double)));
    if (phi_in.gcount() != static_cast<std::streamsize>(expected_n * sizeof(double)))
        return std::nullopt;
    char extra;
    if (phi_in.read(&extra, 1); phi_in.gcount() != 0) return std::nullopt;  // trailing bytes
    if (payload_checksum(sd.phi1) != meta.value("checksum", std::uint64_t(0))) return std::nullopt;
    sd.lambda1 = meta.value("lambda1", 0.0);
    sd.residual = meta.value("residual", 0.0);
    sd.iterations = meta.value("iterations", 0);
    sd.seed = meta.value("seed", std::uint64_t(0));
    return sd;
}

void SpectralCache::store(const std::string& fingerprint, const SpectralData& data) const {
    if (!enabled_) return;
    const fs::path meta_path = fs::path(dir_) / (fingerprint + ".json");
    const fs::path phi_path = fs::path(dir_) / (fingerprint + ".phi");
    json meta = {{"lambda1", data.lambda1},
                 {"residual", data.residual},
                 {"iterations", data.iterations},
                 {"seed", data.seed},
                 {"n", static_cast<int>(data.phi1.size())},
                 {"checksum", payload_checksum(data.phi1)}};
    const fs::path phi_tmp = phi_path.string() + ".tmp";
    const fs::path meta_tmp = meta_path.string() + ".tmp";
    {
        std::ofstream out(phi_tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cache write failed: " + phi_tmp.string());
        out.write(reinterpret_cast<const char*>(data.phi1.data()),
                  static_cast<std::streamsize>(data.phi1.size() * sizeof(double)));
    }
    {
        std::ofstream out(meta_tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cache write failed: " + meta_tmp.string());
        out << meta.dump(2) << "\n";
    }
    fs::rename(phi_tmp, phi_path);   // last writer wins
    fs::rename(meta_tmp, meta_path);
}

}  // namespace hklab
