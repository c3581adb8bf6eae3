#include "fpres/modular_data.hpp"

#include "fpres/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fpres {

MDPtr ModularData::dense(std::vector<std::string> labels, std::vector<Rational> h, Rational c,
                         Eigen::MatrixXcd S, std::vector<int> conj) {
    auto md = std::make_shared<ModularData>();
    std::size_t n = h.size();
    if (labels.size() != n || conj.size() != n || static_cast<std::size_t>(S.rows()) != n ||
        static_cast<std::size_t>(S.cols()) != n)
        fail(ErrorKind::InvalidInput, "modular data components have inconsistent sizes");
    if (n == 0) fail(ErrorKind::InvalidInput, "modular data needs at least the vacuum");
    if (conj[0] != 0) fail(ErrorKind::InvalidInput, "conjugation must fix the vacuum");
    md->labels_ = std::move(labels);
    md->h_ = std::move(h);
    md->c_ = c;
    md->S_ = std::move(S);
    md->conj_ = std::move(conj);
    for (int a = 0; a < md->size(); ++a)
        if (!md->by_label_.emplace(md->labels_[a], a).second)
            fail(ErrorKind::InvalidInput, "duplicate field label " + md->labels_[a]);
    return md;
}

MDPtr ModularData::product(std::vector<MDPtr> factors) {
    // flatten nested products
    std::vector<MDPtr> flat;
    for (auto& f : factors) {
        if (f->is_product())
            flat.insert(flat.end(), f->factors_.begin(), f->factors_.end());
        else
            flat.push_back(f);
    }
    auto md = std::make_shared<ModularData>();
    md->factors_ = flat;
    md->strides_.assign(flat.size(), 1);
    long long total = 1;
    for (int f = static_cast<int>(flat.size()) - 1; f >= 0; --f) {
        md->strides_[f] = static_cast<int>(total);
        total *= flat[f]->size();
        if (total > 2'000'000) fail(ErrorKind::ResourceLimit, "tensor product has too many fields");
    }
    int n = static_cast<int>(total);
    md->labels_.resize(n);
    md->h_.resize(n);
    md->conj_.resize(n);
    md->c_ = 0;
    for (auto& f : flat) md->c_ += f->c();
    for (int a = 0; a < n; ++a) {
        auto parts = md->split(a);
        std::string label = "(";
        Rational h = 0;
        std::vector<int> cparts(parts.size());
        for (std::size_t f = 0; f < flat.size(); ++f) {
            if (f) label += ",";
            label += flat[f]->labels()[parts[f]];
            h += flat[f]->h(parts[f]);
            cparts[f] = flat[f]->conj(parts[f]);
        }
        md->labels_[a] = label + ")";
        md->h_[a] = h;
        md->conj_[a] = md->join(cparts);
        md->by_label_.emplace(md->labels_[a], a);
    }
    return md;
}

std::vector<int> ModularData::split(int a) const {
    std::vector<int> parts(factors_.size());
    for (std::size_t f = 0; f < factors_.size(); ++f) {
        parts[f] = a / strides_[f];
        a %= strides_[f];
    }
    return parts;
}

int ModularData::join(const std::vector<int>& parts) const {
    int a = 0;
    for (std::size_t f = 0; f < factors_.size(); ++f) a += parts[f] * strides_[f];
    return a;
}

cplx ModularData::s(int a, int b) const {
    if (factors_.empty()) return S_(a, b);
    cplx v = 1.0;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
        v *= factors_[f]->s(a / strides_[f], b / strides_[f]);
        a %= strides_[f];
        b %= strides_[f];
    }
    return v;
}

Eigen::MatrixXcd ModularData::dense_S(int max_fields) const {
    if (factors_.empty()) return S_;
    if (size() > max_fields) fail(ErrorKind::ResourceLimit, "S matrix too large to materialize");
    Eigen::MatrixXcd S(size(), size());
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b) S(a, b) = s(a, b);
    return S;
}

const Eigen::MatrixXcd& ModularData::S() const {
    if (!factors_.empty()) fail(ErrorKind::InvalidInput, "product modular data has no stored S");
    return S_;
}

int ModularData::find(const std::string& label) const {
    auto it = by_label_.find(label);
    return it == by_label_.end() ? -1 : it->second;
}

Rational t_turns(const ModularData& md, int a) { return frac(md.h(a) - md.c() / 24); }
cplx t_phase(const ModularData& md, int a) { return expi(t_turns(md, a)); }

double ModularCheck::max() const { return std::max({unitarity, symmetry, st_cubed, s_squared, vacuum_row}); }

ModularCheck check_modular(const Eigen::MatrixXcd& S, const std::vector<Rational>& h, Rational c,
                           const std::vector<int>& conj) {
    ModularCheck out;
    const int n = static_cast<int>(S.rows());
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    out.unitarity = (S * S.adjoint() - I).cwiseAbs().maxCoeff();
    out.symmetry = (S - S.transpose()).cwiseAbs().maxCoeff();
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a) C(a, conj[a]) = 1.0;
    Eigen::MatrixXcd S2 = S * S;
    out.s_squared = (S2 - C).cwiseAbs().maxCoeff();
    Eigen::VectorXcd T(n);
    for (int a = 0; a < n; ++a) T(a) = expi(h[a] - c / 24);
    Eigen::MatrixXcd ST = S * T.asDiagonal();
    out.st_cubed = (ST * ST * ST - S2).cwiseAbs().maxCoeff();
    for (int a = 0; a < n; ++a) {
        cplx v = S(0, a);
        double dev = std::abs(v.imag());
        if (v.real() <= 0) dev = std::max(dev, 1.0 - v.real());
        out.vacuum_row = std::max(out.vacuum_row, dev);
    }
    return out;
}

ModularCheck check_modular(const ModularData& md) {
    return check_modular(md.dense_S(), md.h(), md.c(), md.conjugation());
}

FusionScan verlinde_scan(const Eigen::MatrixXcd& S, const std::function<void(int, const Eigen::MatrixXd&)>& visit,
                         int max_rows) {
    const int n = static_cast<int>(S.rows());
    FusionScan out;
    Eigen::MatrixXcd right = S.adjoint();
    int rows = max_rows < 0 ? n : std::min(max_rows, n);
    for (int a = 0; a < rows; ++a) {
        Eigen::VectorXcd w(n);
        for (int m = 0; m < n; ++m) w(m) = S(a, m) / S(0, m);
        // N_a(b, c) = sum_m S(b,m) w_m conj S(c,m)
        Eigen::MatrixXcd Na = (S * w.asDiagonal()) * right;
        Eigen::MatrixXd rounded(n, n);
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                cplx v = Na(b, c);
                double r = std::round(v.real());
                out.max_residual = std::max(out.max_residual, std::abs(v - cplx(r, 0)));
                out.min_value = std::min(out.min_value, v.real());
                rounded(b, c) = r;
            }
        if (visit) visit(a, rounded);
        ++out.rows_scanned;
    }
    return out;
}

FusionScan fusion_integrality_scan(const Eigen::MatrixXcd& S, int max_rows) {
    const int n = static_cast<int>(S.rows());
    FusionScan out;
    Eigen::MatrixXd re = S.real(), im = S.imag();
    int rows = max_rows < 0 ? n : std::min(max_rows, n);
    for (int a = 0; a < rows; ++a) {
        Eigen::VectorXcd w(n);
        for (int m = 0; m < n; ++m) w(m) = S(a, m) / S(0, m);
        const int len = n - a;
        Eigen::MatrixXcd left = S.bottomRows(len) * w.asDiagonal();
        Eigen::MatrixXd lre = left.real(), lim = left.imag();
        // left * S^dagger split into real and imaginary parts
        Eigen::MatrixXd nre = lre * re.transpose();
        nre.noalias() += lim * im.transpose();
        Eigen::MatrixXd nim = lim * re.transpose();
        nim.noalias() -= lre * im.transpose();
        for (int c = 0; c < n; ++c)
            for (int b = 0; b < len; ++b) {
                double v = nre(b, c);
                double r = std::round(v);
                out.max_residual = std::max(out.max_residual, std::hypot(v - r, nim(b, c)));
                out.min_value = std::min(out.min_value, v);
            }
        ++out.rows_scanned;
    }
    return out;
}

FusionTensor verlinde_fusion(const ModularData& md, double tol) {
    const int n = md.size();
    if (n > 400) fail(ErrorKind::ResourceLimit, "fusion tensor too large to store; use a streaming scan");
    Eigen::MatrixXcd S = md.dense_S();
    FusionTensor t;
    t.n = n;
    t.data.assign(static_cast<std::size_t>(n) * n * n, 0);
    auto scan = verlinde_scan(S, [&](int a, const Eigen::MatrixXd& Na) {
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                t.data[(static_cast<std::size_t>(a) * n + b) * n + c] = static_cast<int>(Na(b, c));
    });
    t.max_residual = scan.max_residual;
    t.min_value = scan.min_value;
    if (scan.max_residual > tol || scan.min_value < -tol)
        fail(ErrorKind::FusionIntegrality, "Verlinde formula gives non-integral or negative fusion coefficients");
    return t;
}

MDPtr tensor(const MDPtr& a, const MDPtr& b) { return ModularData::product({a, b}); }

std::vector<int> conjugation_from_S(const Eigen::MatrixXcd& S, double tol) {
    Eigen::MatrixXcd S2 = S * S;
    const int n = static_cast<int>(S.rows());
    std::vector<int> perm(n, -1);
    std::vector<bool> used(n, false);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double d1 = std::abs(S2(a, b) - 1.0), d0 = std::abs(S2(a, b));
            if (d1 < tol) {
                if (perm[a] >= 0) fail(ErrorKind::InvalidInput, "S^2 is not a permutation matrix");
                perm[a] = b;
            } else if (d0 > tol) {
                fail(ErrorKind::InvalidInput, "S^2 has an entry that is neither 0 nor 1");
            }
        }
        if (perm[a] < 0 || used[perm[a]]) fail(ErrorKind::InvalidInput, "S^2 is not a permutation matrix");
        used[perm[a]] = true;
    }
    return perm;
}

MDPtr trivial_theory() {
    return ModularData::dense({"0"}, {Rational(0)}, Rational(0), Eigen::MatrixXcd::Ones(1, 1), {0});
}

}  // namespace fpres
