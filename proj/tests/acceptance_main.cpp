#include <cstdio>

#include "uqr/acceptance.hpp"

int main() {
    int failed = 0;
    const auto results = uqr::run_acceptance([&](const uqr::CriterionResult& r) {
        std::printf("%s\n", uqr::format_result(r).c_str());
        std::fflush(stdout);
        if (!r.passed) ++failed;
    });
    std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
    return failed == 0 ? 0 : 1;
}
