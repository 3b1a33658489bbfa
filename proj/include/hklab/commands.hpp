#ifndef HKLAB_COMMANDS_HPP
#define HKLAB_COMMANDS_HPP

#include <iosfwd>

#include "hklab/cache.hpp"
#include "hklab/config.hpp"

namespace hklab {

struct CliOptions {
    std::string config_path;
    std::string out_dir;  // overrides config output.dir when nonempty
    std::string cache_dir = SpectralCache::default_dir();
    int threads = 0;
    double budget_seconds = 0.0;  // 0 = unlimited; used by certify
    bool no_cache = false;
};

struct Verdict {
    std::string id;
    std::string ref;  // theorem tag carried into reports
    bool pass = false;
    double value = 0.0;
    json detail = json::object();
};

struct Report {
    std::string command;
    std::string fingerprint;
    std::vector<Verdict> verdicts;
    std::vector<std::string> artifacts;
    double wall_seconds = 0.0;
    bool pass() const;
    json to_json() const;
};

// Deterministic CSV body under a single timestamped header line.
void write_csv(const std::string& path, const std::string& command, const std::string& fingerprint,
               const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows);

// Runs one CLI command; returns the process exit code (0 pass, 1 verdict
// failure, 2 usage/config error) and writes report.json plus artifacts.
int run_command(const std::string& command, const CliOptions& opts, std::ostream& log);

// Shared cached eigensolve keyed by the config fingerprint.
SpectralData cached_eigenpair(const WeightedOperator& op, const std::string& fingerprint,
                              const SpectralCache& cache, double tol, bool* hit = nullptr);

}  // namespace hklab

#endif
