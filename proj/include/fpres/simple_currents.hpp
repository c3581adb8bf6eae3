#pragma once

#include "fpres/abelian.hpp"
#include "fpres/modular_data.hpp"

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace fpres {

// Group of simple currents with its permutation action on fields.
// Dense centers store one permutation per element; product centers
// delegate to factor centers (element coordinates concatenate).
class Center {
public:
    Center(FiniteAbelianGroup group, std::vector<std::vector<int>> perms, std::vector<Rational> spins);
    static std::shared_ptr<const Center> product(MDPtr md,
                                                 std::vector<std::shared_ptr<const Center>> factors);

    const FiniteAbelianGroup& group() const { return group_; }
    int size() const { return group_.order(); }
    int act(int elem, int field) const;
    int current(int elem) const { return act(elem, 0); }
    // Element whose current is this field, -1 if none.
    int element_of(int field) const;
    Rational spin(int elem) const;
    // lcm(2, exponent): admissible root-of-unity order for twists.
    int phase_modulus() const { return phase_modulus_; }
    void set_phase_modulus(int m) { phase_modulus_ = m; }
    bool is_product() const { return !factors_.empty(); }
    const std::vector<std::shared_ptr<const Center>>& factors() const { return factors_; }
    std::vector<int> split(int elem) const;

private:
    Center() = default;
    FiniteAbelianGroup group_;
    std::vector<std::vector<int>> perms_;
    std::vector<Rational> spins_;
    std::map<int, int> by_field_;
    std::vector<std::shared_ptr<const Center>> factors_;
    MDPtr md_;
    int phase_modulus_ = 2;
};

using CenterPtr = std::shared_ptr<const Center>;

// Currents are fields with |S_{J0}| = S_00; permutations from S ratios
// S_{Ja,m} = S_am S_Jm / S_0m, cross-checked against Verlinde fusion for
// small theories.
// Permutation a -> Ja matching rows S_{Ja,m} = S_am S_Jm / S_0m; empty when
// J is not a simple current.
std::vector<int> current_permutation(const Eigen::MatrixXcd& S, int J, double tol = 1e-7);

CenterPtr detect_simple_currents(const ModularData& md, double tol = 1e-8);

// Q_J(a) = h_a + h_J - h_{Ja} mod 1.
Rational monodromy_charge(const ModularData& md, const Center& center, int elem, int a);

struct FixedPointBundle {
    int current = 0;            // field id of J
    std::vector<int> fixed;     // ascending field ids
    Eigen::MatrixXcd S;         // over fixed fields
    std::vector<cplx> eta;
    std::map<std::pair<int, int>, Rational> F;  // (a, field id of K) -> turns

    int position(int field) const;  // -1 when not fixed
};

// Fixed-point resolution data for every element of a center.
class BundleSet {
public:
    virtual ~BundleSet() = default;
    virtual bool has(int elem) const = 0;
    virtual std::vector<int> fixed(int elem) const = 0;
    virtual cplx s(int elem, int a, int b) const = 0;
    virtual cplx eta(int elem, int a) const = 0;
    // F(a, K, J) in turns.
    virtual Rational twist(int a, int K, int J) const = 0;
};

using BundlesPtr = std::shared_ptr<const BundleSet>;

class DenseBundleSet : public BundleSet {
public:
    DenseBundleSet(MDPtr md, CenterPtr center, std::map<int, FixedPointBundle> bundles);
    bool has(int elem) const override;
    std::vector<int> fixed(int elem) const override;
    cplx s(int elem, int a, int b) const override;
    cplx eta(int elem, int a) const override;
    Rational twist(int a, int K, int J) const override;
    const std::map<int, FixedPointBundle>& bundles() const { return bundles_; }
    const FixedPointBundle* bundle(int elem) const;

private:
    MDPtr md_;
    CenterPtr center_;
    std::map<int, FixedPointBundle> bundles_;
};

class ProductBundleSet : public BundleSet {
public:
    ProductBundleSet(MDPtr md, CenterPtr center, std::vector<BundlesPtr> factors);
    bool has(int elem) const override;
    std::vector<int> fixed(int elem) const override;
    cplx s(int elem, int a, int b) const override;
    cplx eta(int elem, int a) const override;
    Rational twist(int a, int K, int J) const override;
    const std::vector<BundlesPtr>& factors() const { return factors_; }

private:
    MDPtr md_;
    CenterPtr center_;
    std::vector<BundlesPtr> factors_;
};

struct Theory {
    MDPtr md;
    CenterPtr center;
    BundlesPtr bundles;
};

// Detects the center and attaches 1x1 bundles wherever they are determined;
// supplied bundles take precedence. Products are handled factorwise.
Theory make_theory(const MDPtr& md, std::map<int, FixedPointBundle> supplied = {});
Theory tensor(const Theory& a, const Theory& b);

std::vector<int> fixed_fields(const Center& center, int elem, int n_fields);

// F(a,K,J) = S^J_{Ka,b} exp(-2 pi i Q_K(b)) / S^J_{ab}, averaged over b and
// snapped to a root of unity of order dividing the phase modulus.
std::map<std::pair<int, int>, Rational> extract_twists(const FixedPointBundle& bundle, const ModularData& md,
                                                       const Center& center, double tol = 1e-8);

// Requires a single self-conjugate fixed point a: S^J = t_a^{-3}.
FixedPointBundle solve_1x1_bundle(const ModularData& md, const Center& center, int elem);

Subgroup full_stabilizer(const Center& center, int a);
Subgroup stabilizer(const Center& center, const Subgroup& H, int a);
// {J in S_a : F(a,K,J) = 1 for all K in S_a}; throws on non-closure.
Subgroup untwisted_stabilizer(const BundleSet& bundles, int a, const Subgroup& S_a);

struct StabilizerData {
    std::vector<Subgroup> T, S, U;
};
StabilizerData stabilizers(const Theory& th, const Subgroup& H, bool with_untwisted = true);

// Integer spin and mutual locality; throws invalid-extension otherwise.
void require_extension_group(const Theory& th, const Subgroup& H);

Subgroup subgroup_of_currents(const Center& center, const std::vector<int>& current_fields);

}  // namespace fpres
