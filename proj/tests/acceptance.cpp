// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <iostream>

#include "msens/verify.hpp"

int main() {
    msens::VerifyOptions options;
    bool all = true;
    for (const auto& r : msens::run_suites("all", options)) {
        std::cout << msens::format_result(r) << std::endl;
        all = all && r.passed;
    }
    std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
    return all ? 0 : 1;
}
