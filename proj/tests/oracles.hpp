#pragma once

#include "fpres/abelian.hpp"

#include <set>
#include <vector>

namespace fpres::testing {

// Exhaustive solution set of a twist system.
inline std::set<std::vector<int>> brute_force(const TwistSystem& sys) {
    FiniteAbelianGroup K(sys.orders);
    std::set<std::vector<int>> out;
    for (int idx = 0; idx < K.order(); ++idx) {
        Element k = K.element(idx);
        bool ok = true;
        for (std::size_t i = 0; i < sys.p.size() && ok; ++i) {
            Rational s = sys.p[i];
            for (std::size_t j = 0; j < k.size(); ++j) s += sys.r[j][i] * static_cast<std::int64_t>(k[j]);
            ok = frac(s) == Rational(0);
        }
        if (ok) out.insert(k);
    }
    return out;
}

}  // namespace fpres::testing
