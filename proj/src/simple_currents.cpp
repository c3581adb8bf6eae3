#include "fpres/simple_currents.hpp"

#include "fpres/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace fpres {

// ---------------------------------------------------------------- center

Center::Center(FiniteAbelianGroup group, std::vector<std::vector<int>> perms, std::vector<Rational> spins)
    : group_(std::move(group)), perms_(std::move(perms)), spins_(std::move(spins)) {
    if (static_cast<int>(perms_.size()) != group_.order() || spins_.size() != perms_.size())
        fail(ErrorKind::InvalidInput, "one permutation and spin per center element required");
    for (int e = 0; e < group_.order(); ++e) by_field_[perms_[e][0]] = e;
    phase_modulus_ = std::lcm(2, group_.exponent());
}

std::shared_ptr<const Center> Center::product(MDPtr md, std::vector<std::shared_ptr<const Center>> factors) {
    if (md->factors().size() != factors.size()) fail(ErrorKind::InvalidInput, "one center per factor required");
    auto c = std::shared_ptr<Center>(new Center());
    std::vector<int> orders;
    int mod = 2;
    for (auto& f : factors) {
        orders.insert(orders.end(), f->group().orders().begin(), f->group().orders().end());
        mod = std::lcm(mod, f->phase_modulus());
    }
    c->group_ = FiniteAbelianGroup(orders);
    c->factors_ = std::move(factors);
    c->md_ = std::move(md);
    c->phase_modulus_ = mod;
    return c;
}

std::vector<int> Center::split(int elem) const {
    std::vector<int> parts(factors_.size());
    for (int f = static_cast<int>(factors_.size()) - 1; f >= 0; --f) {
        int n = factors_[f]->size();
        parts[f] = elem % n;
        elem /= n;
    }
    return parts;
}

int Center::act(int elem, int field) const {
    if (factors_.empty()) return perms_[elem][field];
    auto pe = split(elem);
    auto pf = md_->split(field);
    for (std::size_t f = 0; f < factors_.size(); ++f) pf[f] = factors_[f]->act(pe[f], pf[f]);
    return md_->join(pf);
}

int Center::element_of(int field) const {
    if (factors_.empty()) {
        auto it = by_field_.find(field);
        return it == by_field_.end() ? -1 : it->second;
    }
    auto pf = md_->split(field);
    int elem = 0;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
        int e = factors_[f]->element_of(pf[f]);
        if (e < 0) return -1;
        elem = elem * factors_[f]->size() + e;
    }
    return elem;
}

Rational Center::spin(int elem) const {
    if (factors_.empty()) return spins_[elem];
    auto pe = split(elem);
    Rational s = 0;
    for (std::size_t f = 0; f < factors_.size(); ++f) s += factors_[f]->spin(pe[f]);
    return frac(s);
}

std::vector<int> current_permutation(const Eigen::MatrixXcd& S, int J, double tol) {
    const int n = static_cast<int>(S.rows());
    std::vector<int> perm(n, -1);
    Eigen::RowVectorXcd ratio(n);
    for (int m = 0; m < n; ++m) ratio(m) = S(J, m) / S(0, m);
    std::vector<bool> used(n, false);
    for (int a = 0; a < n; ++a) {
        Eigen::RowVectorXcd target = S.row(a).cwiseProduct(ratio);
        for (int b = 0; b < n; ++b) {
            if (std::abs(S(b, 0) - target(0)) > tol) continue;
            if ((S.row(b) - target).cwiseAbs().maxCoeff() < tol) {
                perm[a] = b;
                break;
            }
        }
        if (perm[a] < 0 || used[perm[a]]) return {};
        used[perm[a]] = true;
    }
    return perm;
}

CenterPtr detect_simple_currents(const ModularData& md, double tol) {
    if (md.is_product()) {
        std::vector<CenterPtr> parts;
        for (const auto& f : md.factors()) parts.push_back(detect_simple_currents(*f, tol));
        return Center::product(std::make_shared<ModularData>(md), parts);
    }
    const auto& S = md.S();
    const int n = md.size();
    const double s00 = S(0, 0).real();
    std::vector<int> currents;
    std::map<int, std::vector<int>> perm_of;
    for (int J = 0; J < n; ++J) {
        if (std::abs(std::abs(S(J, 0)) - s00) > tol) continue;
        auto perm = current_permutation(S, J);
        if (perm.empty()) continue;
        currents.push_back(J);
        perm_of[J] = std::move(perm);
    }
    auto mul = [&](int x, int y) { return perm_of.at(x)[y]; };
    CyclicBasis cb = cyclic_basis(currents, std::vector<int>{0}, mul, 0);
    FiniteAbelianGroup G(cb.orders);
    if (G.order() != static_cast<int>(currents.size()))
        fail(ErrorKind::Inconsistency, "simple currents do not close into a group");
    std::vector<std::vector<int>> perms(G.order());
    std::vector<Rational> spins(G.order());
    for (int e = 0; e < G.order(); ++e) {
        Element m = G.element(e);
        int J = 0;
        for (std::size_t l = 0; l < cb.reps.size(); ++l)
            for (int r = 0; r < m[l]; ++r) J = mul(J, cb.reps[l]);
        perms[e] = perm_of.at(J);
        spins[e] = frac(md.h(J));
    }
    return std::make_shared<Center>(G, perms, spins);
}

Rational monodromy_charge(const ModularData& md, const Center& center, int elem, int a) {
    return frac(md.h(a) + md.h(center.current(elem)) - md.h(center.act(elem, a)));
}

std::vector<int> fixed_fields(const Center& center, int elem, int n_fields) {
    std::vector<int> out;
    for (int a = 0; a < n_fields; ++a)
        if (center.act(elem, a) == a) out.push_back(a);
    return out;
}

// ---------------------------------------------------------------- bundles

int FixedPointBundle::position(int field) const {
    auto it = std::lower_bound(fixed.begin(), fixed.end(), field);
    if (it == fixed.end() || *it != field) return -1;
    return static_cast<int>(it - fixed.begin());
}

std::map<std::pair<int, int>, Rational> extract_twists(const FixedPointBundle& bundle, const ModularData& md,
                                                       const Center& center, double tol) {
    std::map<std::pair<int, int>, Rational> F;
    const int nf = static_cast<int>(bundle.fixed.size());
    for (int ia = 0; ia < nf; ++ia) {
        int a = bundle.fixed[ia];
        for (int K = 0; K < center.size(); ++K) {
            int ka = bundle.position(center.act(K, a));
            if (ka < 0) fail(ErrorKind::MalformedBundle, "fixed-point set is not closed under the center");
            cplx sum = 0;
            std::vector<cplx> ratios;
            for (int ib = 0; ib < nf; ++ib) {
                cplx sab = bundle.S(ia, ib);
                if (std::abs(sab) <= 1e-6) continue;
                cplx r = bundle.S(ka, ib) * expi(-monodromy_charge(md, center, K, bundle.fixed[ib])) / sab;
                ratios.push_back(r);
                sum += r;
            }
            if (ratios.empty()) fail(ErrorKind::MalformedBundle, "row of S^J vanishes");
            cplx mean = sum / static_cast<double>(ratios.size());
            double spread = 0;
            for (auto r : ratios) spread = std::max(spread, std::abs(r - mean));
            double dev = 0;
            Rational ph = snap_phase(mean, center.phase_modulus(), &dev);
            if (spread > tol || dev > std::max(tol, 1e-6))
                fail(ErrorKind::MalformedBundle, "twist F(a,K,J) is not a consistent root of unity");
            F[{a, center.current(K)}] = ph;
        }
    }
    return F;
}

FixedPointBundle solve_1x1_bundle(const ModularData& md, const Center& center, int elem) {
    auto fixed = fixed_fields(center, elem, md.size());
    if (fixed.size() != 1) fail(ErrorKind::NotApplicable, "current does not have exactly one fixed point");
    int a = fixed[0];
    if (md.conj(a) != a) fail(ErrorKind::NotApplicable, "fixed point is not self-conjugate");
    FixedPointBundle b;
    b.current = center.current(elem);
    b.fixed = fixed;
    Rational s = frac(-3 * t_turns(md, a));
    b.S = Eigen::MatrixXcd::Constant(1, 1, expi(s));
    b.eta = {expi(2 * s)};
    b.F = extract_twists(b, md, center);
    return b;
}

DenseBundleSet::DenseBundleSet(MDPtr md, CenterPtr center, std::map<int, FixedPointBundle> bundles)
    : md_(std::move(md)), center_(std::move(center)), bundles_(std::move(bundles)) {}

const FixedPointBundle* DenseBundleSet::bundle(int elem) const {
    auto it = bundles_.find(elem);
    return it == bundles_.end() ? nullptr : &it->second;
}

bool DenseBundleSet::has(int elem) const { return elem == 0 || bundles_.count(elem); }

std::vector<int> DenseBundleSet::fixed(int elem) const {
    if (elem == 0) {
        std::vector<int> all(md_->size());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    auto b = bundle(elem);
    if (!b) return fixed_fields(*center_, elem, md_->size());
    return b->fixed;
}

cplx DenseBundleSet::s(int elem, int a, int b) const {
    if (elem == 0) return md_->s(a, b);
    auto bd = bundle(elem);
    if (!bd) fail(ErrorKind::IncompleteInput, "no fixed-point bundle for current " + md_->labels()[center_->current(elem)]);
    int ia = bd->position(a), ib = bd->position(b);
    if (ia < 0 || ib < 0) return 0.0;
    return bd->S(ia, ib);
}

cplx DenseBundleSet::eta(int elem, int a) const {
    if (elem == 0) return 1.0;
    auto bd = bundle(elem);
    if (!bd) fail(ErrorKind::IncompleteInput, "no fixed-point bundle for current " + md_->labels()[center_->current(elem)]);
    int ia = bd->position(a);
    if (ia < 0) fail(ErrorKind::InvalidInput, "eta requested off the fixed-point set");
    return bd->eta[ia];
}

Rational DenseBundleSet::twist(int a, int K, int J) const {
    if (J == 0) return 0;
    auto bd = bundle(J);
    if (!bd) fail(ErrorKind::IncompleteInput, "no fixed-point bundle for current " + md_->labels()[center_->current(J)]);
    auto it = bd->F.find({a, center_->current(K)});
    if (it == bd->F.end()) fail(ErrorKind::IncompleteInput, "twist table lacks an entry");
    return it->second;
}

ProductBundleSet::ProductBundleSet(MDPtr md, CenterPtr center, std::vector<BundlesPtr> factors)
    : md_(std::move(md)), center_(std::move(center)), factors_(std::move(factors)) {}

bool ProductBundleSet::has(int elem) const {
    auto pe = center_->split(elem);
    for (std::size_t f = 0; f < factors_.size(); ++f)
        if (!factors_[f]->has(pe[f])) return false;
    return true;
}

std::vector<int> ProductBundleSet::fixed(int elem) const {
    auto pe = center_->split(elem);
    std::vector<std::vector<int>> parts;
    for (std::size_t f = 0; f < factors_.size(); ++f) parts.push_back(factors_[f]->fixed(pe[f]));
    std::vector<int> out;
    std::vector<int> cur(factors_.size());
    auto rec = [&](auto&& self, std::size_t f) -> void {
        if (f == factors_.size()) {
            out.push_back(md_->join(cur));
            return;
        }
        for (int x : parts[f]) {
            cur[f] = x;
            self(self, f + 1);
        }
    };
    rec(rec, 0);
    return out;
}

cplx ProductBundleSet::s(int elem, int a, int b) const {
    auto pe = center_->split(elem);
    auto pa = md_->split(a), pb = md_->split(b);
    cplx v = 1.0;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
        v *= factors_[f]->s(pe[f], pa[f], pb[f]);
        if (v == 0.0) return v;
    }
    return v;
}

cplx ProductBundleSet::eta(int elem, int a) const {
    auto pe = center_->split(elem);
    auto pa = md_->split(a);
    cplx v = 1.0;
    for (std::size_t f = 0; f < factors_.size(); ++f) v *= factors_[f]->eta(pe[f], pa[f]);
    return v;
}

Rational ProductBundleSet::twist(int a, int K, int J) const {
    auto pk = center_->split(K), pj = center_->split(J);
    auto pa = md_->split(a);
    Rational t = 0;
    for (std::size_t f = 0; f < factors_.size(); ++f) t += factors_[f]->twist(pa[f], pk[f], pj[f]);
    return frac(t);
}

// ---------------------------------------------------------------- theories

Theory make_theory(const MDPtr& md, std::map<int, FixedPointBundle> supplied) {
    if (md->is_product()) {
        if (!supplied.empty())
            fail(ErrorKind::InvalidInput, "bundles for tensor products are built from factor bundles");
        std::vector<CenterPtr> centers;
        std::vector<BundlesPtr> bundles;
        for (const auto& f : md->factors()) {
            Theory t = make_theory(f);
            centers.push_back(t.center);
            bundles.push_back(t.bundles);
        }
        auto center = Center::product(md, centers);
        return {md, center, std::make_shared<ProductBundleSet>(md, center, bundles)};
    }
    auto center = detect_simple_currents(*md);
    std::map<int, FixedPointBundle> bundles;
    for (auto& [field, b] : supplied) {
        int elem = center->element_of(field);
        if (elem < 0) fail(ErrorKind::MalformedBundle, "bundle current is not a simple current");
        if (b.fixed != fixed_fields(*center, elem, md->size()))
            fail(ErrorKind::MalformedBundle, "bundle fixed-field list does not match the current's fixed points");
        if (b.S.rows() != static_cast<int>(b.fixed.size()) || b.S.cols() != b.S.rows() ||
            b.eta.size() != b.fixed.size())
            fail(ErrorKind::MalformedBundle, "bundle matrix shape does not match its fixed points");
        if (b.F.empty()) b.F = extract_twists(b, *md, *center);
        bundles[elem] = b;
    }
    for (int e = 1; e < center->size(); ++e) {
        if (bundles.count(e)) continue;
        auto fixed = fixed_fields(*center, e, md->size());
        if (fixed.empty()) {
            FixedPointBundle b;
            b.current = center->current(e);
            bundles[e] = b;
            continue;
        }
        try {
            bundles[e] = solve_1x1_bundle(*md, *center, e);
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::NotApplicable) throw;
        }
    }
    return {md, center, std::make_shared<DenseBundleSet>(md, center, std::move(bundles))};
}

Theory tensor(const Theory& a, const Theory& b) {
    auto md = tensor(a.md, b.md);
    std::vector<CenterPtr> centers;
    std::vector<BundlesPtr> bundles;
    auto add = [&](const Theory& t) {
        if (t.md->is_product()) {
            auto pb = std::dynamic_pointer_cast<const ProductBundleSet>(t.bundles);
            if (!pb) fail(ErrorKind::InvalidInput, "product theory without product bundles");
            for (const auto& c : t.center->factors()) centers.push_back(c);
            for (const auto& fb : pb->factors()) bundles.push_back(fb);
        } else {
            centers.push_back(t.center);
            bundles.push_back(t.bundles);
        }
    };
    add(a);
    add(b);
    auto center = Center::product(md, centers);
    return {md, center, std::make_shared<ProductBundleSet>(md, center, bundles)};
}

// ---------------------------------------------------------------- stabilizers

Subgroup full_stabilizer(const Center& center, int a) {
    std::vector<int> members;
    for (int g = 0; g < center.size(); ++g)
        if (center.act(g, a) == a) members.push_back(g);
    return subgroup_from_members(center.group(), members);
}

Subgroup stabilizer(const Center& center, const Subgroup& H, int a) {
    std::vector<int> members;
    for (int g : H.members())
        if (center.act(g, a) == a) members.push_back(g);
    return subgroup_from_members(center.group(), members);
}

Subgroup untwisted_stabilizer(const BundleSet& bundles, int a, const Subgroup& S_a) {
    std::vector<int> members;
    for (int J : S_a.members()) {
        bool untwisted = true;
        for (int K : S_a.members())
            if (bundles.twist(a, K, J) != Rational(0)) {
                untwisted = false;
                break;
            }
        if (untwisted) members.push_back(J);
    }
    try {
        return subgroup_from_members(S_a.ambient(), members);
    } catch (const Error&) {
        fail(ErrorKind::Inconsistency, "untwisted currents do not form a subgroup: twist table inconsistent");
    }
}

StabilizerData stabilizers(const Theory& th, const Subgroup& H, bool with_untwisted) {
    StabilizerData out;
    for (int a = 0; a < th.md->size(); ++a) {
        out.T.push_back(full_stabilizer(*th.center, a));
        out.S.push_back(intersect(out.T.back(), H));
        if (with_untwisted) out.U.push_back(untwisted_stabilizer(*th.bundles, a, out.S.back()));
    }
    return out;
}

void require_extension_group(const Theory& th, const Subgroup& H) {
    for (int h : H.members())
        if (th.center->spin(h) != Rational(0))
            fail(ErrorKind::InvalidExtension, "extension current " + th.md->labels()[th.center->current(h)] +
                                                  " does not have integer spin");
    for (int g : H.basis())
        for (int k : H.basis())
            if (monodromy_charge(*th.md, *th.center, g, th.center->current(k)) != Rational(0))
                fail(ErrorKind::InvalidExtension, "extension currents are not mutually local");
}

Subgroup subgroup_of_currents(const Center& center, const std::vector<int>& current_fields) {
    std::vector<int> gens;
    for (int f : current_fields) {
        int e = center.element_of(f);
        if (e < 0) fail(ErrorKind::InvalidInput, "field " + std::to_string(f) + " is not a simple current");
        gens.push_back(e);
    }
    return generate_subgroup(center.group(), gens);
}

}  // namespace fpres
