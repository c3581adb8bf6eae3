#pragma once

#include "fpres/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace fpres {

using Element = std::vector<int>;

// Direct product of cyclic groups Z_{N_1} x ... x Z_{N_r}.
// Elements are coordinate vectors, indexed in lexicographic order
// (first coordinate most significant).
class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() = default;
    explicit FiniteAbelianGroup(std::vector<int> orders);

    const std::vector<int>& orders() const { return orders_; }
    int rank() const { return static_cast<int>(orders_.size()); }
    int order() const { return order_; }
    int exponent() const;

    int index(const Element& x) const;
    Element element(int index) const;

    int add(int x, int y) const;
    int sub(int x, int y) const;
    int neg(int x) const;
    int scale(int x, long long k) const;
    int element_order(int x) const;

    bool operator==(const FiniteAbelianGroup& o) const { return orders_ == o.orders_; }

private:
    std::vector<int> orders_;
    std::vector<int> strides_;
    int order_ = 1;
};

FiniteAbelianGroup decompose(std::span<const int> orders);

// Cyclic decomposition of <base, gens> / <base>: representatives of a basis
// ordered by descending order (ties lexicographic on the ambient element).
struct CyclicBasis {
    std::vector<int> reps;    // ambient indices
    std::vector<int> orders;  // orders in the quotient
};

CyclicBasis cyclic_basis(const FiniteAbelianGroup& G, std::span<const int> gens,
                         std::span<const int> base_members);
// Same for an abelian group given only by its multiplication on ids.
CyclicBasis cyclic_basis(std::span<const int> gens, std::span<const int> base_members,
                         const std::function<int(int, int)>& mul, int identity);

// Subgroup of an ambient group with its own cyclic decomposition.
class Subgroup {
public:
    Subgroup() = default;
    Subgroup(const FiniteAbelianGroup& ambient, std::vector<int> basis, std::vector<int> orders);

    const FiniteAbelianGroup& ambient() const { return ambient_; }
    const std::vector<int>& basis() const { return basis_; }
    const std::vector<int>& orders() const { return orders_; }
    FiniteAbelianGroup abstract() const { return FiniteAbelianGroup(orders_); }
    int order() const { return static_cast<int>(members_.size()); }

    // Ambient indices sorted ascending.
    const std::vector<int>& members() const { return sorted_; }
    bool contains(int g) const { return local_.count(g) != 0; }
    // Index in abstract() of a member; throws if g is not a member.
    int local_index(int g) const;
    Element coords(int g) const { return abstract().element(local_index(g)); }
    int from_local(int local) const { return members_[local]; }
    int from_coords(const Element& m) const;

    bool operator==(const Subgroup& o) const { return sorted_ == o.sorted_; }

private:
    FiniteAbelianGroup ambient_;
    std::vector<int> basis_, orders_;
    std::vector<int> members_;  // by abstract index
    std::vector<int> sorted_;
    std::unordered_map<int, int> local_;
};

Subgroup generate_subgroup(const FiniteAbelianGroup& G, std::span<const int> gens);
Subgroup whole_group(const FiniteAbelianGroup& G);
Subgroup intersect(const Subgroup& A, const Subgroup& B);
// Throws invalid-input unless the members form a subgroup.
Subgroup subgroup_from_members(const FiniteAbelianGroup& G, std::span<const int> members);

// Phase table of a set of characters, values stored as turns.
class CharacterTable {
public:
    CharacterTable() = default;
    CharacterTable(FiniteAbelianGroup group, std::vector<Element> labels,
                   std::vector<std::vector<Rational>> phases);

    const FiniteAbelianGroup& group() const { return group_; }
    int size() const { return static_cast<int>(labels_.size()); }
    const Element& label(int i) const { return labels_[i]; }
    Rational phase(int label, int element) const { return phases_[label][element]; }
    cplx value(int label, int element) const { return expi(phases_[label][element]); }

private:
    FiniteAbelianGroup group_;
    std::vector<Element> labels_;
    std::vector<std::vector<Rational>> phases_;
};

// Standard characters exp(2 pi i sum i_l h_l / N_l); label index = group index.
CharacterTable characters(const FiniteAbelianGroup& G);
// Phase of the standard character without building a table.
Rational character_phase(const FiniteAbelianGroup& G, const Element& label, const Element& h);

struct CharacterTableCheck {
    double group_law = 0, orthogonality = 0, completeness = 0;
    double max() const;
};
CharacterTableCheck check_character_table(const CharacterTable& table);

// Coset representatives R of (span of basis reps + H) / H.
class CosetPresentation {
public:
    CosetPresentation() = default;
    // Multiplicative convention R(m) = sum_l m_l basis_reps[l].
    CosetPresentation(Subgroup subgroup, std::vector<int> basis_reps, std::vector<int> class_orders);

    const FiniteAbelianGroup& ambient() const { return sub_.ambient(); }
    const Subgroup& subgroup() const { return sub_; }
    const FiniteAbelianGroup& classes() const { return classes_; }
    const std::vector<int>& basis() const { return basis_; }
    bool multiplicative() const { return multiplicative_; }

    int representative(int cls) const { return reps_[cls]; }
    int discrepancy(int c1, int c2) const;  // h with R(c1)+R(c2) = R(c1+c2)+h
    int closure(int l) const;               // N_l * R(J_l), an element of H
    // g = R(cls) + h; throws if g lies outside the span.
    std::pair<int, int> split(int g) const;
    bool spans(int g) const { return split_.count(g) != 0; }

    // Same classes, arbitrary representatives r(cls) (r(0) must be 0).
    CosetPresentation with_representatives(std::vector<int> reps) const;

private:
    Subgroup sub_;
    std::vector<int> basis_;
    FiniteAbelianGroup classes_;
    std::vector<int> reps_;
    bool multiplicative_ = true;
    std::unordered_map<int, std::pair<int, int>> split_;
    void build_split();
};

CosetPresentation choose_coset_representatives(const FiniteAbelianGroup& G, const Subgroup& H);

// Phases phi(i, J) per subgroup character label and coset class.
class CocycleData {
public:
    CocycleData() = default;
    explicit CocycleData(std::vector<std::vector<Rational>> phases) : phases_(std::move(phases)) {}
    Rational phase(int label, int cls) const { return phases_[label][cls]; }
    cplx value(int label, int cls) const { return expi(phases_[label][cls]); }
    int labels() const { return static_cast<int>(phases_.size()); }
    const std::vector<std::vector<Rational>>& table() const { return phases_; }

private:
    std::vector<std::vector<Rational>> phases_;
};

// Characters of subgroup_chars are indexed by the subgroup's abstract index.
// root_shift[label][l] selects a non-principal root (0 = principal).
CocycleData cocycle_phases(const CosetPresentation& pres, const CharacterTable& subgroup_chars,
                           const std::vector<std::vector<int>>& root_shift = {});

CharacterTable lifted_characters(const CosetPresentation& pres, const CharacterTable& subgroup_chars,
                                 const CocycleData& cocycle);

CocycleData rebase_phases(const CocycleData& cocycle, const CosetPresentation& old_pres,
                          const CosetPresentation& new_pres, const CharacterTable& subgroup_chars);

// Max violation count of the cocycle law (exact), 0 when it holds.
int cocycle_violations(const CosetPresentation& pres, const CharacterTable& subgroup_chars,
                       const CocycleData& cocycle);

// sum_j k_j r[j][i] + p[i] = 0 mod 1 for every i, unknowns k_j mod orders[j].
struct TwistSystem {
    std::vector<int> orders;
    std::vector<std::vector<Rational>> r;  // r[j][i], reduced mod 1
    std::vector<Rational> p;               // reduced mod 1

    static TwistSystem from_integers(std::vector<int> orders,
                                     const std::vector<std::vector<std::int64_t>>& r_num,
                                     const std::vector<std::int64_t>& p_num,
                                     const std::vector<std::int64_t>& p_den);
};

struct CongruenceSolution {
    std::vector<int> k;                        // canonical, 0 <= k_j < N_j
    std::vector<std::vector<int>> kernel;      // all elements of the kernel
    bool nondegenerate = true;
};

// Throws structural when the system is degenerate, internal-inconsistency
// when unsolvable.
std::vector<int> solve_congruence_system(const TwistSystem& sys);
// Relaxed form: no nondegeneracy requirement; empty optional when unsolvable.
std::optional<CongruenceSolution> solve_congruence_relaxed(const TwistSystem& sys);

}  // namespace fpres
