// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
//   acceptance                  all criteria
//   acceptance --criterion N    criterion N only
//   acceptance --quick          small oracle sizes, scale check skipped
//
// Exits non-zero if any selected criterion fails.

#include <cstring>
#include <iostream>
#include <optional>
#include <string>

#include "archruns/selftest.hpp"

int main(int argc, char** argv) {
    archruns::SelftestOptions options;
    std::optional<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            options.quick = true;
        } else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::stoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--quick] [--criterion N]\n";
            return 2;
        }
    }

    bool failed = false;
    for (const auto& c : archruns::criteria()) {
        if (only && *only != c.id) continue;
        const auto result = archruns::run_criterion(c, options);
        failed = failed || result.verdict == archruns::Verdict::fail;
        std::cout << archruns::format_result(result) << std::endl;
    }
    return failed ? 1 : 0;
}
