#include "fpres/snf.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

namespace fpres {

namespace {

IntMatrix identity(std::size_t n) {
    IntMatrix I(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

struct Reducer {
    IntMatrix D, P, Q, Qinv;
    std::size_t m, n;

    explicit Reducer(const IntMatrix& A)
        : D(A), m(A.size()), n(A.empty() ? 0 : A[0].size()) {
        P = identity(m);
        Q = identity(n);
        Qinv = identity(n);
    }

    void swap_rows(std::size_t i, std::size_t j) {
        std::swap(D[i], D[j]);
        std::swap(P[i], P[j]);
    }
    void swap_cols(std::size_t i, std::size_t j) {
        for (auto& row : D) std::swap(row[i], row[j]);
        for (auto& row : Q) std::swap(row[i], row[j]);
        std::swap(Qinv[i], Qinv[j]);
    }
    // row_j += c * row_i
    void add_row(std::size_t i, std::size_t j, std::int64_t c) {
        for (std::size_t k = 0; k < n; ++k) D[j][k] += c * D[i][k];
        for (std::size_t k = 0; k < m; ++k) P[j][k] += c * P[i][k];
    }
    // col_j += c * col_i
    void add_col(std::size_t i, std::size_t j, std::int64_t c) {
        for (auto& row : D) row[j] += c * row[i];
        for (auto& row : Q) row[j] += c * row[i];
        for (std::size_t k = 0; k < n; ++k) Qinv[i][k] -= c * Qinv[j][k];
    }
    void negate_row(std::size_t i) {
        for (auto& v : D[i]) v = -v;
        for (auto& v : P[i]) v = -v;
    }

    void run() {
        std::size_t r = std::min(m, n);
        for (std::size_t t = 0; t < r; ++t) {
            while (true) {
                // smallest nonzero pivot in the trailing block
                std::size_t pi = m, pj = n;
                for (std::size_t i = t; i < m; ++i)
                    for (std::size_t j = t; j < n; ++j)
                        if (D[i][j] != 0 && (pi == m || std::llabs(D[i][j]) < std::llabs(D[pi][pj]))) {
                            pi = i;
                            pj = j;
                        }
                if (pi == m) return;
                if (pi != t) swap_rows(t, pi);
                if (pj != t) swap_cols(t, pj);

                bool clean = true;
                for (std::size_t i = t + 1; i < m; ++i) {
                    if (D[i][t] == 0) continue;
                    add_row(t, i, -(D[i][t] / D[t][t]));
                    if (D[i][t] != 0) clean = false;
                }
                for (std::size_t j = t + 1; j < n; ++j) {
                    if (D[t][j] == 0) continue;
                    add_col(t, j, -(D[t][j] / D[t][t]));
                    if (D[t][j] != 0) clean = false;
                }
                if (!clean) continue;

                // divisibility of the remaining block
                std::size_t bad = m;
                for (std::size_t i = t + 1; i < m && bad == m; ++i)
                    for (std::size_t j = t + 1; j < n; ++j)
                        if (D[i][j] % D[t][t] != 0) {
                            bad = i;
                            break;
                        }
                if (bad == m) break;
                add_row(bad, t, 1);
            }
            if (D[t][t] < 0) negate_row(t);
        }
    }
};

}  // namespace

std::vector<std::int64_t> SmithForm::diagonal() const {
    std::vector<std::int64_t> d;
    for (std::size_t i = 0; i < D.size() && (D.empty() || i < D[0].size()); ++i) d.push_back(D[i][i]);
    return d;
}

SmithForm smith_normal_form(const IntMatrix& A) {
    Reducer red(A);
    red.run();
    return {std::move(red.D), std::move(red.P), std::move(red.Q), std::move(red.Qinv)};
}

std::optional<std::vector<std::int64_t>> solve_left(const IntMatrix& A,
                                                    const std::vector<std::int64_t>& t) {
    // x A = t  <=>  y D = t Q  with y = x P^{-1}, x = y P
    std::size_t m = A.size(), n = t.size();
    SmithForm sf = smith_normal_form(A);
    std::vector<std::int64_t> tq(n, 0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) tq[j] += t[k] * sf.Q[k][j];
    std::vector<std::int64_t> y(m, 0);
    for (std::size_t j = 0; j < n; ++j) {
        std::int64_t d = j < m ? sf.D[j][j] : 0;
        if (d == 0) {
            if (tq[j] != 0) return std::nullopt;
            continue;
        }
        if (tq[j] % d != 0) return std::nullopt;
        y[j] = tq[j] / d;
    }
    std::vector<std::int64_t> x(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) x[i] += y[k] * sf.P[k][i];
    return x;
}

IntMatrix left_kernel(const IntMatrix& A) {
    std::size_t m = A.size();
    std::size_t n = A.empty() ? 0 : A[0].size();
    SmithForm sf = smith_normal_form(A);
    IntMatrix out;
    for (std::size_t i = 0; i < m; ++i) {
        bool zero = i >= n || sf.D[i][i] == 0;
        if (zero) out.push_back(sf.P[i]);
    }
    return out;
}

}  // namespace fpres
