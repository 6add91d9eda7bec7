// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <cstdio>
#include <cstring>

#include "tp/acceptance.hpp"

int main(int argc, char** argv) {
    tp::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strncmp(argv[i], "--only=", 7) == 0) {
            for (const char* p = argv[i] + 7; *p;) {
                opts.only.push_back(std::atoi(p));
                while (*p && *p != ',') ++p;
                if (*p == ',') ++p;
            }
        }
    }
    auto results = tp::run_acceptance(opts, true);
    bool ok = tp::all_passed(results);
    std::printf("%s\n", ok ? "acceptance: all criteria passed" : "acceptance: FAILURES present");
    return ok ? 0 : 1;
}
