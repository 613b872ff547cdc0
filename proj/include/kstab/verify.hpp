#pragma once

#include "kstab/configurations.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kstab {

struct CriterionResult {
    std::string id;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct VerifyOptions {
    std::string corpus_dir = "data/corpus";
    std::int64_t kmax = 256;  // convergence sweep cap (times the period)
    int nodes = 10001;        // 1D grid resolution for the geodesic suite
};

struct CorpusEntry {
    std::string name;
    Config config;
};

// Loads every *.json document of the corpus directory, sorted by name.
std::vector<CorpusEntry> load_corpus(const std::string& dir);

// Runs the named suite ("exact", "geodesic", "ke" or "all") and returns one
// result per criterion.
std::vector<CriterionResult> run_verify(const std::string& suite,
                                        const VerifyOptions& options);

}  // namespace kstab
