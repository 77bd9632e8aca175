// Standalone acceptance runner: one pass/fail line per criterion, exit 0
// iff all pass.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "fsum/acceptance.hpp"

int main(int argc, char** argv) {
    int threads = 0; // auto
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
            threads = std::atoi(argv[++i]);
    }
    const auto results = fsum::run_acceptance(threads);
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %s — %s\n", r.pass ? "PASS" : "FAIL",
                    r.id, r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
    }
    return fsum::all_passed(results) ? 0 : 1;
}
