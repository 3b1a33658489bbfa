#ifndef HKLAB_CONFIG_HPP
#define HKLAB_CONFIG_HPP

#include <json.hpp>
#include <string>

#include "hklab/operators.hpp"

namespace hklab {

using json = nlohmann::json;

// Thrown for unreadable/invalid configs; mapped to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    json raw;
    DomainSpec domain;
    double h = 0.0;
    bool stagger = true;
    Family family = Family::laplace;
    OperatorParams params;
    json task;        // command-specific block
    std::string out_dir = "out";

    // Stable hash of the canonicalized domain/grid/operator blocks; keys the
    // spectral cache and is embedded in every report.
    std::string fingerprint() const;
};

RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);

DomainSpec domain_from_json(const json& j);

}  // namespace hklab

#endif
