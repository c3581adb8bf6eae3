#pragma once

#include "fpres/modular_data.hpp"

#include <string>
#include <vector>

namespace fpres {

struct GeneratorOptions {
    std::string cache_dir;  // empty: no disk cache
    int max_fields = 5000;
};

// Cache directory from FPRES_CACHE_DIR, empty when unset.
std::string cache_dir_from_env();

MDPtr su2(int k);
MDPtr suN(int N, int k, const GeneratorOptions& options = {});
MDPtr ising();

// Model from a "modular-data v1" file or a spec: factors joined by '*',
// each "su2:k", "suN:N:k", "ising" or a file path.
MDPtr load_model(const std::string& spec, const GeneratorOptions& options = {});

// Level-k dominant weights of su(N) as Dynkin labels, lexicographic.
std::vector<std::vector<int>> dominant_weights(int N, int k);
std::string weight_label(const std::vector<int>& lambda);

}  // namespace fpres
