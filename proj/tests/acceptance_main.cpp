// Acceptance runner: executes every verification criterion against the
// shipped corpus and prints one pass/fail line each.

#include "kstab/verify.hpp"

#include <cstdio>
#include <exception>

int main(int argc, char** argv) {
    kstab::VerifyOptions options;
    if (argc > 1) options.corpus_dir = argv[1];
    try {
        const auto results = kstab::run_verify("all", options);
        bool all_pass = true;
        for (const auto& r : results) {
            std::printf("[%s] %-26s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL",
                        r.id.c_str(), r.detail.c_str(), r.seconds);
            all_pass = all_pass && r.pass;
        }
        return all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance runner error: %s\n", e.what());
        return 2;
    }
}
