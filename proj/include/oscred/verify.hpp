#ifndef OSCRED_VERIFY_HPP
#define OSCRED_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace oscred {

struct CheckResult {
    int criterion = 0;  // 1..10
    std::string name;
    std::string module;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::string only;          // match against module or check name; empty = all
    double perturb = 0.0;      // failure injection: relative norm perturbation
    std::uint64_t seed = 424242;
};

// The acceptance suite: every criterion at its pinned tolerance.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace oscred

#endif
