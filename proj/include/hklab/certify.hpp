#ifndef HKLAB_CERTIFY_HPP
#define HKLAB_CERTIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace hklab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;  // global budget exhausted before this criterion
    double seconds = 0.0;
    std::string detail;
};

// Runs the full acceptance suite in dependency order, one pass/fail line per
// criterion on the log stream. Criteria past the time budget are reported as
// skipped failures.
std::vector<CriterionResult> run_acceptance(double budget_seconds, const std::string& scratch_dir,
                                            std::ostream& log);

}  // namespace hklab

#endif
