#include <cstdlib>
#include <iostream>

#include "hklab/certify.hpp"

int main(int argc, char** argv) {
    double budget = 1e12;
    if (argc > 1) budget = std::atof(argv[1]);
    const auto results = hklab::run_acceptance(budget, ".", std::cout);
    int failed = 0;
    for (const auto& r : results) failed += !r.pass;
    std::cout << (failed ? "ACCEPTANCE: FAILED " : "ACCEPTANCE: PASSED ") << results.size() - failed
              << "/" << results.size() << " criteria\n";
    return failed ? 1 : 0;
}
