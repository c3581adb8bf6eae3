#pragma once

#include "fpres/modular_data.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace fpres::testing {

namespace detail {

// Row contents up to column order: sorted rounded entries.
inline std::vector<std::pair<long, long>> row_signature(const Eigen::MatrixXcd& S, int x, double tol) {
    std::vector<std::pair<long, long>> sig;
    for (int y = 0; y < S.cols(); ++y)
        sig.emplace_back(std::lround(S(x, y).real() / (100 * tol)), std::lround(S(x, y).imag() / (100 * tol)));
    std::sort(sig.begin(), sig.end());
    return sig;
}

}  // namespace detail

// Backtracking search for a field bijection p with h_a = h_p(a) and S_ab = S_p(a)p(b).
inline std::optional<std::vector<int>> find_relabeling(const ModularData& A, const ModularData& B, double tol = 1e-8) {
    const int n = A.size();
    if (B.size() != n) return std::nullopt;
    Eigen::MatrixXcd SA = A.dense_S(), SB = B.dense_S();
    std::vector<std::vector<std::pair<long, long>>> sa(n), sb(n);
    for (int x = 0; x < n; ++x) {
        sa[x] = detail::row_signature(SA, x, tol);
        sb[x] = detail::row_signature(SB, x, tol);
    }
    std::vector<std::vector<int>> cands(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (A.h(x) == B.h(y) && std::abs(SA(x, x) - SB(y, y)) < tol && sa[x] == sb[y]) cands[x].push_back(y);
    std::vector<int> order(n);
    for (int a = 0; a < n; ++a) order[a] = a;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return cands[x].size() < cands[y].size(); });

    std::vector<int> p(n, -1);
    std::vector<bool> used(n, false);
    auto fits = [&](int x, int y, int depth) {
        for (int d = 0; d < depth; ++d) {
            int x2 = order[d];
            if (std::abs(SA(x, x2) - SB(y, p[x2])) > tol) return false;
        }
        return true;
    };
    std::vector<std::size_t> next(n, 0);
    int depth = 0;
    while (depth >= 0 && depth < n) {
        int x = order[depth];
        if (p[x] >= 0) {
            used[p[x]] = false;
            p[x] = -1;
        }
        std::size_t k = next[depth];
        while (k < cands[x].size() && (used[cands[x][k]] || !fits(x, cands[x][k], depth))) ++k;
        if (k == cands[x].size()) {
            next[depth] = 0;
            --depth;
            continue;
        }
        p[x] = cands[x][k];
        used[p[x]] = true;
        next[depth] = k + 1;
        ++depth;
    }
    if (depth < 0) return std::nullopt;
    return p;
}

}  // namespace fpres::testing
