// Acceptance runner: executes every numbered cross-validation criterion at
// its pinned tolerance and prints one pass/fail line per criterion.

#include <cstring>
#include <iostream>

#include "pasv/validate.hpp"

int main(int argc, char** argv) {
    pasv::ValidateOptions options;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            options.quick = true;
        } else {
            std::cerr << "usage: pasv_acceptance [--quick]\n";
            return 2;
        }
    }

    const auto results = pasv::run_acceptance_criteria(options);
    pasv::print_results(std::cout, results);

    int failures = 0;
    for (const auto& r : results)
        if (!r.passed) ++failures;
    std::cout << results.size() - failures << "/" << results.size()
              << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
