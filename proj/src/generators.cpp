#include "fpres/generators.hpp"

#include "fpres/errors.hpp"
#include "fpres/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

namespace fpres {

std::string cache_dir_from_env() {
    const char* v = std::getenv("FPRES_CACHE_DIR");
    return v ? std::string(v) : std::string();
}

MDPtr su2(int k) {
    if (k < 1) fail(ErrorKind::InvalidInput, "su2 level must be positive");
    const int n = k + 1;
    Eigen::MatrixXcd S(n, n);
    const double norm = std::sqrt(2.0 / (k + 2));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            S(a, b) = norm * std::sin(std::numbers::pi * (a + 1) * (b + 1) / (k + 2));
    std::vector<std::string> labels;
    std::vector<Rational> h;
    std::vector<int> conj(n);
    for (int a = 0; a < n; ++a) {
        labels.push_back(std::to_string(a));
        h.push_back(Rational(a * (a + 2), 4 * (k + 2)));
        conj[a] = a;
    }
    return ModularData::dense(labels, h, Rational(3 * k, k + 2), S, conj);
}

MDPtr ising() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd S(3, 3);
    S << 0.5, 0.5, r, 0.5, 0.5, -r, r, -r, 0.0;
    return ModularData::dense({"1", "epsilon", "sigma"}, {Rational(0), Rational(1, 2), Rational(1, 16)},
                              Rational(1, 2), S, {0, 1, 2});
}

std::vector<std::vector<int>> dominant_weights(int N, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(N - 1, 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == N - 1) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[pos] = v;
            self(self, pos + 1, left - v);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, k);
    return out;
}

std::string weight_label(const std::vector<int>& lambda) {
    std::string s = "(";
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(lambda[i]);
    }
    return s + ")";
}

namespace {

// Orthogonal-basis coordinates of lambda + rho (last coordinate zero).
std::vector<long long> shifted(const std::vector<int>& lambda, int N) {
    std::vector<long long> x(N, 0);
    for (int i = N - 2; i >= 0; --i) x[i] = x[i + 1] + lambda[i] + 1;
    // x[i] currently sums labels j >= i; shift index so x[N-1] = 0
    return x;
}

Rational norm2(const std::vector<long long>& x, int N) {
    long long sq = 0, sum = 0;
    for (long long v : x) {
        sq += v * v;
        sum += v;
    }
    return Rational(sq) - Rational(sum * sum, N);
}

MDPtr compute_suN(int N, int k, int max_fields) {
    if (N < 2) fail(ErrorKind::InvalidInput, "suN needs N >= 2");
    if (k < 1) fail(ErrorKind::InvalidInput, "suN level must be positive");
    if (N > 9) fail(ErrorKind::ResourceLimit, "Weyl group too large");
    // binomial(N-1+k, k) without overflow for the cap check
    double count = 1;
    for (int i = 1; i <= N - 1; ++i) count = count * (k + i) / i;
    if (count > max_fields + 0.5) fail(ErrorKind::ResourceLimit, "number of dominant weights exceeds the cap");

    auto weights = dominant_weights(N, k);
    const int n = static_cast<int>(weights.size());
    const int K = k + N;

    std::vector<std::vector<long long>> xs(n);
    std::vector<long long> sums(n);
    for (int a = 0; a < n; ++a) {
        xs[a] = shifted(weights[a], N);
        sums[a] = std::accumulate(xs[a].begin(), xs[a].end(), 0LL);
    }

    std::vector<std::vector<int>> perms;
    std::vector<int> signs;
    std::vector<int> p(N);
    std::iota(p.begin(), p.end(), 0);
    do {
        int inv = 0;
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j)
                if (p[i] > p[j]) ++inv;
        perms.push_back(p);
        signs.push_back(inv % 2 ? -1 : 1);
    } while (std::next_permutation(p.begin(), p.end()));

    std::vector<cplx> roots(K);
    for (int e = 0; e < K; ++e) roots[e] = expi(Rational(-e, K));

    Eigen::MatrixXcd S(n, n);
    std::vector<long long> counts(K);
    for (int a = 0; a < n; ++a) {
        std::vector<int> xa(N);
        for (int i = 0; i < N; ++i) xa[i] = static_cast<int>(xs[a][i] % K);
        for (int b = a; b < n; ++b) {
            std::fill(counts.begin(), counts.end(), 0);
            const auto& yb = xs[b];
            for (std::size_t w = 0; w < perms.size(); ++w) {
                long long e = 0;
                const auto& pw = perms[w];
                for (int i = 0; i < N; ++i) e += xa[pw[i]] * yb[i];
                counts[e % K] += signs[w];
            }
            cplx sum = 0;
            for (int e = 0; e < K; ++e)
                if (counts[e]) sum += static_cast<double>(counts[e]) * roots[e];
            sum *= expi(Rational(sums[a] * sums[b], static_cast<long long>(N) * K));
            S(a, b) = sum;
            S(b, a) = sum;
        }
    }
    double norm = S.row(0).norm();
    cplx fix = std::conj(S(0, 0)) / std::abs(S(0, 0));
    S *= fix / norm;

    std::vector<Rational> h(n);
    Rational rho2 = norm2(shifted(std::vector<int>(N - 1, 0), N), N);
    for (int a = 0; a < n; ++a) h[a] = (norm2(xs[a], N) - rho2) / static_cast<long long>(2 * K);
    Rational c(static_cast<long long>(k) * (N * N - 1), K);

    std::map<std::vector<int>, int> index;
    for (int a = 0; a < n; ++a) index[weights[a]] = a;
    std::vector<int> conj(n);
    std::vector<std::string> labels(n);
    for (int a = 0; a < n; ++a) {
        auto r = weights[a];
        std::reverse(r.begin(), r.end());
        conj[a] = index.at(r);
        labels[a] = weight_label(weights[a]);
    }

    if (!check_modular(S, h, c, conj).passes(1e-9)) {
        Eigen::MatrixXcd alt = S.conjugate();
        if (!check_modular(alt, h, c, conj).passes(1e-9))
            fail(ErrorKind::Inconsistency, "Weyl-sum S matrix fails the modular relations");
        S = alt;
    }
    return ModularData::dense(labels, h, c, S, conj);
}

}  // namespace

MDPtr suN(int N, int k, const GeneratorOptions& options) {
    namespace fs = std::filesystem;
    fs::path file;
    if (!options.cache_dir.empty()) {
        file = fs::path(options.cache_dir) / ("suN_N" + std::to_string(N) + "_k" + std::to_string(k) + ".json");
        if (fs::exists(file)) {
            try {
                json j = json::parse(read_file(file.string()));
                if (j.at("family") == "suN" && j.at("N") == N && j.at("k") == k &&
                    j.at("sha256") == sha256_hex(j.at("data").dump()))
                    return modular_data_from_json(j.at("data"));
            } catch (const std::exception&) {
                // corrupt cache entries are regenerated
            }
        }
    }
    MDPtr md = compute_suN(N, k, options.max_fields);
    if (!file.empty()) {
        json data = to_json(*md);
        json j = {{"family", "suN"}, {"N", N}, {"k", k}, {"sha256", sha256_hex(data.dump())}, {"data", data}};
        write_file_atomic(file.string(), dump(j));
    }
    return md;
}

MDPtr load_model(const std::string& spec, const GeneratorOptions& options) {
    namespace fs = std::filesystem;
    if (fs::exists(spec)) return modular_data_from_json(json::parse(read_file(spec)));
    std::vector<MDPtr> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, '*')) {
        std::vector<std::string> f;
        std::stringstream is(item);
        std::string tok;
        while (std::getline(is, tok, ':')) f.push_back(tok);
        auto num = [&](std::size_t i) {
            try {
                std::size_t used = 0;
                int v = std::stoi(f.at(i), &used);
                if (used != f[i].size()) throw std::invalid_argument(f[i]);
                return v;
            } catch (const std::exception&) {
                fail(ErrorKind::InvalidInput, "bad model parameter in '" + item + "'");
            }
        };
        if (f.size() == 1 && f[0] == "ising") parts.push_back(ising());
        else if (f.size() == 2 && f[0] == "su2") parts.push_back(su2(num(1)));
        else if (f.size() == 3 && f[0] == "suN") parts.push_back(suN(num(1), num(2), options));
        else if (fs::exists(item)) parts.push_back(modular_data_from_json(json::parse(read_file(item))));
        else fail(ErrorKind::InvalidInput, "unknown model '" + item + "'");
    }
    if (parts.empty()) fail(ErrorKind::InvalidInput, "empty model spec");
    return parts.size() == 1 ? parts[0] : ModularData::product(parts);
}

}  // namespace fpres
