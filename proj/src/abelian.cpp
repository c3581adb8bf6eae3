#include "fpres/abelian.hpp"

#include "fpres/errors.hpp"
#include "fpres/snf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fpres {

// ---------------------------------------------------------------- groups

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<int> orders) : orders_(std::move(orders)) {
    strides_.assign(orders_.size(), 1);
    long long total = 1;
    for (int i = rank() - 1; i >= 0; --i) {
        if (orders_[i] < 1) fail(ErrorKind::InvalidInput, "group orders must be positive");
        strides_[i] = static_cast<int>(total);
        total *= orders_[i];
        if (total > (1LL << 30)) fail(ErrorKind::ResourceLimit, "group too large");
    }
    order_ = static_cast<int>(total);
}

int FiniteAbelianGroup::exponent() const {
    int e = 1;
    for (int n : orders_) e = std::lcm(e, n);
    return e;
}

int FiniteAbelianGroup::index(const Element& x) const {
    if (x.size() != orders_.size()) fail(ErrorKind::InvalidInput, "element rank mismatch");
    int idx = 0;
    for (int i = 0; i < rank(); ++i) {
        int v = x[i] % orders_[i];
        if (v < 0) v += orders_[i];
        idx += v * strides_[i];
    }
    return idx;
}

Element FiniteAbelianGroup::element(int index) const {
    Element x(orders_.size());
    for (int i = 0; i < rank(); ++i) {
        x[i] = index / strides_[i];
        index %= strides_[i];
    }
    return x;
}

int FiniteAbelianGroup::add(int x, int y) const {
    int idx = 0;
    for (int i = 0; i < rank(); ++i) {
        int a = (x / strides_[i]) % orders_[i];
        int b = (y / strides_[i]) % orders_[i];
        int s = a + b;
        if (s >= orders_[i]) s -= orders_[i];
        idx += s * strides_[i];
    }
    return idx;
}

int FiniteAbelianGroup::neg(int x) const {
    int idx = 0;
    for (int i = 0; i < rank(); ++i) {
        int a = (x / strides_[i]) % orders_[i];
        idx += ((orders_[i] - a) % orders_[i]) * strides_[i];
    }
    return idx;
}

int FiniteAbelianGroup::sub(int x, int y) const { return add(x, neg(y)); }

int FiniteAbelianGroup::scale(int x, long long k) const {
    int idx = 0;
    for (int i = 0; i < rank(); ++i) {
        long long a = (x / strides_[i]) % orders_[i];
        long long v = (a * (k % orders_[i])) % orders_[i];
        if (v < 0) v += orders_[i];
        idx += static_cast<int>(v) * strides_[i];
    }
    return idx;
}

int FiniteAbelianGroup::element_order(int x) const {
    int o = 1;
    for (int i = 0; i < rank(); ++i) {
        int a = (x / strides_[i]) % orders_[i];
        o = std::lcm(o, orders_[i] / std::gcd(a, orders_[i]));
    }
    return o;
}

FiniteAbelianGroup decompose(std::span<const int> orders) {
    return FiniteAbelianGroup(std::vector<int>(orders.begin(), orders.end()));
}

// ---------------------------------------------------------------- cyclic bases

CyclicBasis cyclic_basis(std::span<const int> gens, std::span<const int> base_members,
                         const std::function<int(int, int)>& mul, int identity) {
    // polycyclic normal form: every spanned element gets coordinates over the
    // generators actually used, relations record k * g_t in earlier terms
    std::unordered_map<int, std::vector<std::int64_t>> span;
    for (int b : base_members) span.emplace(b, std::vector<std::int64_t>{});
    if (span.empty()) span.emplace(identity, std::vector<std::int64_t>{});
    std::vector<int> chosen;
    std::vector<std::int64_t> chosen_order;
    IntMatrix relations;

    for (int g : gens) {
        if (span.count(g)) continue;
        int x = g;
        std::int64_t k = 1;
        while (!span.count(x)) {
            x = mul(x, g);
            ++k;
        }
        std::size_t t = chosen.size();
        std::vector<std::int64_t> rel(t + 1, 0);
        const auto& cx = span.at(x);
        for (std::size_t j = 0; j < cx.size(); ++j) rel[j] = -cx[j];
        rel[t] += k;
        relations.push_back(std::move(rel));
        chosen.push_back(g);
        std::int64_t ord = 1;
        for (int y = g; y != identity; y = mul(y, g)) ++ord;
        chosen_order.push_back(ord);

        std::vector<std::pair<int, std::vector<std::int64_t>>> fresh;
        fresh.reserve(span.size() * (k - 1));
        for (const auto& [s, c] : span) {
            int y = s;
            for (std::int64_t j = 1; j < k; ++j) {
                y = mul(y, g);
                std::vector<std::int64_t> cy(t + 1, 0);
                std::copy(c.begin(), c.end(), cy.begin());
                cy[t] = j;
                fresh.emplace_back(y, std::move(cy));
            }
        }
        for (auto& [y, c] : fresh) span.emplace(y, std::move(c));
    }

    std::size_t m = chosen.size();
    CyclicBasis out;
    if (m == 0) return out;
    for (auto& row : relations) row.resize(m, 0);
    SmithForm sf = smith_normal_form(relations);
    for (std::size_t i = 0; i < m; ++i) {
        std::int64_t d = sf.D[i][i];
        if (d <= 1) continue;
        int e = identity;
        for (std::size_t j = 0; j < m; ++j) {
            std::int64_t c = sf.Qinv[i][j] % chosen_order[j];
            if (c < 0) c += chosen_order[j];
            for (std::int64_t r = 0; r < c; ++r) e = mul(e, chosen[j]);
        }
        out.reps.push_back(e);
        out.orders.push_back(static_cast<int>(d));
    }
    // descending order, ties by id (ids of group elements are lexicographic)
    std::vector<std::size_t> perm(out.reps.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        if (out.orders[a] != out.orders[b]) return out.orders[a] > out.orders[b];
        return out.reps[a] < out.reps[b];
    });
    CyclicBasis sorted;
    for (auto p : perm) {
        sorted.reps.push_back(out.reps[p]);
        sorted.orders.push_back(out.orders[p]);
    }
    return sorted;
}

CyclicBasis cyclic_basis(const FiniteAbelianGroup& G, std::span<const int> gens,
                         std::span<const int> base_members) {
    return cyclic_basis(gens, base_members, [&G](int x, int y) { return G.add(x, y); }, 0);
}

// ---------------------------------------------------------------- subgroups

Subgroup::Subgroup(const FiniteAbelianGroup& ambient, std::vector<int> basis, std::vector<int> orders)
    : ambient_(ambient), basis_(std::move(basis)), orders_(std::move(orders)) {
    FiniteAbelianGroup abs(orders_);
    members_.resize(abs.order());
    for (int idx = 0; idx < abs.order(); ++idx) {
        Element m = abs.element(idx);
        int g = 0;
        for (std::size_t l = 0; l < basis_.size(); ++l) g = ambient_.add(g, ambient_.scale(basis_[l], m[l]));
        members_[idx] = g;
        if (!local_.emplace(g, idx).second)
            fail(ErrorKind::InvalidInput, "subgroup basis is not independent");
    }
    sorted_ = members_;
    std::sort(sorted_.begin(), sorted_.end());
}

int Subgroup::local_index(int g) const {
    auto it = local_.find(g);
    if (it == local_.end()) fail(ErrorKind::InvalidInput, "element is not in the subgroup");
    return it->second;
}

int Subgroup::from_coords(const Element& m) const { return members_[abstract().index(m)]; }

Subgroup generate_subgroup(const FiniteAbelianGroup& G, std::span<const int> gens) {
    const int zero = 0;
    CyclicBasis cb = cyclic_basis(G, gens, std::span<const int>(&zero, 1));
    return Subgroup(G, cb.reps, cb.orders);
}

Subgroup whole_group(const FiniteAbelianGroup& G) {
    std::vector<int> gens;
    for (int i = 0; i < G.rank(); ++i) {
        Element e(G.rank(), 0);
        e[i] = 1;
        gens.push_back(G.index(e));
    }
    return generate_subgroup(G, gens);
}

Subgroup intersect(const Subgroup& A, const Subgroup& B) {
    std::vector<int> common;
    for (int g : A.members())
        if (B.contains(g)) common.push_back(g);
    return generate_subgroup(A.ambient(), common);
}

Subgroup subgroup_from_members(const FiniteAbelianGroup& G, std::span<const int> members) {
    std::vector<int> sorted(members.begin(), members.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Subgroup S = generate_subgroup(G, sorted);
    if (S.members() != sorted) fail(ErrorKind::InvalidInput, "element set is not a subgroup");
    return S;
}

// ---------------------------------------------------------------- characters

CharacterTable::CharacterTable(FiniteAbelianGroup group, std::vector<Element> labels,
                               std::vector<std::vector<Rational>> phases)
    : group_(std::move(group)), labels_(std::move(labels)), phases_(std::move(phases)) {}

Rational character_phase(const FiniteAbelianGroup& G, const Element& label, const Element& h) {
    std::int64_t E = G.exponent();
    std::int64_t num = 0;
    for (int l = 0; l < G.rank(); ++l) num += static_cast<std::int64_t>(label[l]) * h[l] * (E / G.orders()[l]);
    return frac(Rational(num, E));
}

CharacterTable characters(const FiniteAbelianGroup& G) {
    std::vector<Element> labels;
    std::vector<std::vector<Rational>> phases(G.order(), std::vector<Rational>(G.order()));
    std::vector<Element> elems;
    for (int i = 0; i < G.order(); ++i) elems.push_back(G.element(i));
    for (int i = 0; i < G.order(); ++i) {
        labels.push_back(elems[i]);
        for (int h = 0; h < G.order(); ++h) phases[i][h] = character_phase(G, elems[i], elems[h]);
    }
    return CharacterTable(G, std::move(labels), std::move(phases));
}

double CharacterTableCheck::max() const { return std::max({group_law, orthogonality, completeness}); }

CharacterTableCheck check_character_table(const CharacterTable& t) {
    const auto& G = t.group();
    int n = G.order(), L = t.size();
    CharacterTableCheck out;
    std::vector<std::vector<cplx>> v(L, std::vector<cplx>(n));
    for (int i = 0; i < L; ++i)
        for (int h = 0; h < n; ++h) v[i][h] = t.value(i, h);
    for (int i = 0; i < L; ++i) {
        out.group_law = std::max(out.group_law, std::abs(v[i][0] - 1.0));
        for (int h = 0; h < n; ++h)
            for (int g = 0; g < n; ++g)
                out.group_law = std::max(out.group_law, std::abs(v[i][h] * v[i][g] - v[i][G.add(h, g)]));
    }
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) {
            cplx s = 0;
            for (int h = 0; h < n; ++h) s += v[i][h] * std::conj(v[j][h]);
            out.orthogonality = std::max(out.orthogonality, std::abs(s - (i == j ? double(n) : 0.0)));
        }
    for (int h = 0; h < n; ++h)
        for (int g = 0; g < n; ++g) {
            cplx s = 0;
            for (int i = 0; i < L; ++i) s += v[i][h] * std::conj(v[i][g]);
            out.completeness = std::max(out.completeness, std::abs(s - (h == g ? double(n) : 0.0)));
        }
    if (L != n) out.completeness = std::max(out.completeness, 1.0);
    return out;
}

// ---------------------------------------------------------------- cosets

CosetPresentation::CosetPresentation(Subgroup subgroup, std::vector<int> basis_reps,
                                     std::vector<int> class_orders)
    : sub_(std::move(subgroup)), basis_(std::move(basis_reps)), classes_(std::move(class_orders)) {
    if (basis_.size() != classes_.orders().size())
        fail(ErrorKind::InvalidInput, "basis and order lists differ in length");
    const auto& G = ambient();
    for (std::size_t l = 0; l < basis_.size(); ++l)
        if (!sub_.contains(G.scale(basis_[l], classes_.orders()[l])))
            fail(ErrorKind::InvalidInput, "class order does not return the representative to the subgroup");
    reps_.resize(classes_.order());
    for (int c = 0; c < classes_.order(); ++c) {
        Element m = classes_.element(c);
        int g = 0;
        for (std::size_t l = 0; l < basis_.size(); ++l) g = G.add(g, G.scale(basis_[l], m[l]));
        reps_[c] = g;
    }
    build_split();
}

void CosetPresentation::build_split() {
    split_.clear();
    const auto& G = ambient();
    for (int c = 0; c < classes_.order(); ++c)
        for (int h : sub_.members()) {
            int g = G.add(reps_[c], h);
            if (!split_.emplace(g, std::make_pair(c, h)).second)
                fail(ErrorKind::InvalidInput, "coset representatives are not independent modulo the subgroup");
        }
}

int CosetPresentation::discrepancy(int c1, int c2) const {
    const auto& G = ambient();
    int h = G.sub(G.add(reps_[c1], reps_[c2]), reps_[classes_.add(c1, c2)]);
    if (!sub_.contains(h)) fail(ErrorKind::Inconsistency, "discrepancy outside the subgroup");
    return h;
}

int CosetPresentation::closure(int l) const {
    return ambient().scale(basis_[l], classes_.orders()[l]);
}

std::pair<int, int> CosetPresentation::split(int g) const {
    auto it = split_.find(g);
    if (it == split_.end()) fail(ErrorKind::InvalidInput, "element outside the presented cosets");
    return it->second;
}

CosetPresentation CosetPresentation::with_representatives(std::vector<int> reps) const {
    if (static_cast<int>(reps.size()) != classes_.order())
        fail(ErrorKind::InvalidInput, "one representative per class required");
    if (reps[0] != 0) fail(ErrorKind::InvalidInput, "identity class must be represented by the identity");
    for (int c = 0; c < classes_.order(); ++c) {
        auto it = split_.find(reps[c]);
        if (it == split_.end() || it->second.first != c)
            fail(ErrorKind::InvalidInput, "representative is not in its coset class");
    }
    CosetPresentation out = *this;
    out.reps_ = std::move(reps);
    out.multiplicative_ = false;
    out.build_split();
    return out;
}

CosetPresentation choose_coset_representatives(const FiniteAbelianGroup& G, const Subgroup& H) {
    if (!(H.ambient() == G)) fail(ErrorKind::InvalidInput, "subgroup is embedded in a different group");
    std::vector<int> gens;
    for (int i = 0; i < G.rank(); ++i) {
        Element e(G.rank(), 0);
        e[i] = 1;
        gens.push_back(G.index(e));
    }
    CyclicBasis cb = cyclic_basis(G, gens, H.members());
    return CosetPresentation(H, cb.reps, cb.orders);
}

// ---------------------------------------------------------------- cocycles

CocycleData cocycle_phases(const CosetPresentation& pres, const CharacterTable& chars,
                           const std::vector<std::vector<int>>& root_shift) {
    if (!pres.multiplicative())
        fail(ErrorKind::InvalidInput, "cocycle phases need the multiplicative representative convention");
    const auto& H = pres.subgroup();
    const auto& C = pres.classes();
    int nb = static_cast<int>(pres.basis().size());
    std::vector<std::vector<Rational>> phases(chars.size(), std::vector<Rational>(C.order()));
    for (int i = 0; i < chars.size(); ++i) {
        std::vector<Rational> root(nb);
        for (int l = 0; l < nb; ++l) {
            Rational theta = frac(chars.phase(i, H.local_index(pres.closure(l))));
            int shift = root_shift.empty() ? 0 : root_shift[i][l];
            root[l] = (theta + shift) / static_cast<std::int64_t>(C.orders()[l]);
        }
        for (int c = 0; c < C.order(); ++c) {
            Element m = C.element(c);
            Rational s = 0;
            for (int l = 0; l < nb; ++l) s += root[l] * static_cast<std::int64_t>(m[l]);
            phases[i][c] = frac(s);
        }
    }
    return CocycleData(std::move(phases));
}

CharacterTable lifted_characters(const CosetPresentation& pres, const CharacterTable& chars,
                                 const CocycleData& cocycle) {
    const auto& G = pres.ambient();
    const auto& H = pres.subgroup();
    const auto& C = pres.classes();
    if (C.order() * H.order() != G.order())
        fail(ErrorKind::InvalidInput, "presentation does not cover the ambient group");
    std::vector<Element> labels;
    std::vector<std::vector<Rational>> phases;
    for (int m = 0; m < C.order(); ++m) {
        Element mv = C.element(m);
        for (int i = 0; i < chars.size(); ++i) {
            Element lab = mv;
            lab.insert(lab.end(), chars.label(i).begin(), chars.label(i).end());
            labels.push_back(std::move(lab));
            std::vector<Rational> row(G.order());
            for (int g = 0; g < G.order(); ++g) {
                auto [c, h] = pres.split(g);
                row[g] = frac(character_phase(C, mv, C.element(c)) + chars.phase(i, H.local_index(h)) +
                              cocycle.phase(i, c));
            }
            phases.push_back(std::move(row));
        }
    }
    return CharacterTable(G, std::move(labels), std::move(phases));
}

CocycleData rebase_phases(const CocycleData& cocycle, const CosetPresentation& old_pres,
                          const CosetPresentation& new_pres, const CharacterTable& chars) {
    const auto& G = old_pres.ambient();
    const auto& H = old_pres.subgroup();
    int nc = old_pres.classes().order();
    if (new_pres.classes().order() != nc) fail(ErrorKind::InvalidInput, "presentations have different classes");
    std::vector<std::vector<Rational>> phases = cocycle.table();
    for (int c = 0; c < nc; ++c) {
        int shift = G.sub(new_pres.representative(c), old_pres.representative(c));
        if (!H.contains(shift)) fail(ErrorKind::InvalidInput, "representative is not in the same coset class");
        int local = H.local_index(shift);
        for (int i = 0; i < chars.size(); ++i) phases[i][c] = frac(phases[i][c] + chars.phase(i, local));
    }
    return CocycleData(std::move(phases));
}

int cocycle_violations(const CosetPresentation& pres, const CharacterTable& chars, const CocycleData& cocycle) {
    const auto& C = pres.classes();
    const auto& H = pres.subgroup();
    int bad = 0;
    for (int i = 0; i < chars.size(); ++i) {
        if (cocycle.phase(i, 0) != Rational(0)) ++bad;
        for (int a = 0; a < C.order(); ++a)
            for (int b = 0; b < C.order(); ++b) {
                Rational lhs = chars.phase(i, H.local_index(pres.discrepancy(a, b))) + cocycle.phase(i, C.add(a, b));
                Rational rhs = cocycle.phase(i, a) + cocycle.phase(i, b);
                if (frac(lhs - rhs) != Rational(0)) ++bad;
            }
    }
    return bad;
}

// ---------------------------------------------------------------- congruences

TwistSystem TwistSystem::from_integers(std::vector<int> orders,
                                       const std::vector<std::vector<std::int64_t>>& r_num,
                                       const std::vector<std::int64_t>& p_num,
                                       const std::vector<std::int64_t>& p_den) {
    TwistSystem sys;
    std::size_t n = orders.size();
    sys.r.assign(n, std::vector<Rational>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            sys.r[j][i] = frac(Rational(r_num[j][i], std::gcd(orders[i], orders[j])));
    for (std::size_t i = 0; i < n; ++i) sys.p.push_back(frac(Rational(p_num[i], p_den[i])));
    sys.orders = std::move(orders);
    return sys;
}

std::optional<CongruenceSolution> solve_congruence_relaxed(const TwistSystem& sys) {
    std::size_t n = sys.orders.size();
    std::size_t neq = sys.p.size();
    for (const auto& row : sys.r)
        if (row.size() != neq) fail(ErrorKind::InvalidInput, "twist system shape mismatch");
    if (sys.r.size() != n) fail(ErrorKind::InvalidInput, "twist system shape mismatch");

    std::int64_t L = 1;
    for (const auto& row : sys.r)
        for (const auto& x : row) L = std::lcm(L, x.denominator());
    for (const auto& x : sys.p) L = std::lcm(L, x.denominator());
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < neq; ++i)
            if ((sys.r[j][i] * static_cast<std::int64_t>(sys.orders[j])).denominator() != 1)
                fail(ErrorKind::InvalidInput, "twist entries incompatible with the unknown's order");

    // unknowns (k, z): sum_j k_j a_ji + L z_i = b_i
    IntMatrix B(n + neq, std::vector<std::int64_t>(neq, 0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < neq; ++i) B[j][i] = (frac(sys.r[j][i]) * L).numerator();
    for (std::size_t i = 0; i < neq; ++i) B[n + i][i] = L;
    std::vector<std::int64_t> b(neq);
    for (std::size_t i = 0; i < neq; ++i) b[i] = (frac(-sys.p[i]) * L).numerator();

    CongruenceSolution out;
    FiniteAbelianGroup K(sys.orders);
    auto reduce = [&](const std::vector<std::int64_t>& x) {
        Element k(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t v = x[j] % sys.orders[j];
            k[j] = static_cast<int>(v < 0 ? v + sys.orders[j] : v);
        }
        return k;
    };
    std::vector<int> gens;
    for (const auto& row : left_kernel(B)) gens.push_back(K.index(reduce(row)));
    Subgroup ker = generate_subgroup(K, gens);
    for (int g : ker.members()) out.kernel.push_back(K.element(g));
    out.nondegenerate = ker.order() == 1;

    auto x = solve_left(B, b);
    if (!x) return std::nullopt;
    int base = K.index(reduce(*x));
    int best = -1;
    for (int g : ker.members()) {
        int cand = K.add(base, g);
        if (best < 0 || cand < best) best = cand;
    }
    out.k = K.element(best);
    return out;
}

std::vector<int> solve_congruence_system(const TwistSystem& sys) {
    auto sol = solve_congruence_relaxed(sys);
    bool degenerate = false;
    if (sol) degenerate = !sol->nondegenerate;
    else {
        // degeneracy is reported before unsolvability
        TwistSystem hom = sys;
        for (auto& x : hom.p) x = 0;
        auto h = solve_congruence_relaxed(hom);
        degenerate = h && !h->nondegenerate;
    }
    if (degenerate) fail(ErrorKind::Structural, "twist system is degenerate on the quotient");
    if (!sol) fail(ErrorKind::Inconsistency, "twist system has no solution");
    return sol->k;
}

}  // namespace fpres
