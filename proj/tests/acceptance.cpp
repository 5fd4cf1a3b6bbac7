// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <cstdio>

#include "oscred/verify.hpp"

int main() {
    oscred::VerifyOptions opts;
    const auto results = oscred::run_verification(opts);
    bool all_pass = true;
    double total = 0.0;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        total += r.seconds;
        std::printf("%-4s criterion %2d %-36s (%.2fs)\n", r.pass ? "PASS" : "FAIL",
                    r.criterion, r.name.c_str(), r.seconds);
        if (!r.detail.empty()) std::printf("     %s\n", r.detail.c_str());
    }
    std::printf("%s: %zu criteria in %.1fs\n", all_pass ? "ALL PASS" : "FAILURES",
                results.size(), total);
    return all_pass ? 0 : 1;
}
