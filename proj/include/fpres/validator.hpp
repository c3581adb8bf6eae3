#pragma once

#include "fpres/io.hpp"
#include "fpres/simple_currents.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fpres {

struct ConditionResult {
    std::string id;
    bool pass = true;
    double deviation = 0;
    bool exact = false;  // root-of-unity identity compared as rationals
    long checked = 0;
    json witness;  // first failing instance
};

class ConditionReport {
public:
    // Condition ids in report order.
    static const std::vector<std::string>& ids();

    ConditionReport();
    ConditionResult& at(const std::string& id);
    const ConditionResult& at(const std::string& id) const;
    // Numeric check: fails when deviation > tol.
    void numeric(const std::string& id, double deviation, double tol, const json& witness);
    // Exact check.
    void exact(const std::string& id, bool ok, const json& witness);
    void note(const std::string& text) { notes_.push_back(text); }
    bool passes() const;
    double tolerance = 1e-8;
    json to_json() const;
    void merge(const ConditionReport& other);

private:
    std::vector<ConditionResult> results_;
    std::vector<std::string> notes_;
};

// Conditions {1}-{6} with {4a},{5a},{5b},{5c}, the twist product rules, the
// spin rule and G = F, over every center element that carries a bundle.
// elements restricts the currents examined.
ConditionReport check_conditions(const Theory& th, double tol = 1e-8,
                                 const std::optional<std::vector<int>>& elements = std::nullopt);

// Ingests supplied bundles (keyed by current field id) and checks the
// currents they describe; {6} uses any inverse bundle present.
ConditionReport validate_bundles(const MDPtr& md, const std::map<int, FixedPointBundle>& bundles,
                                 double tol = 1e-8);

// G(a,K,J) = eta^J_a eta^K_a / eta^{JK}_a against F(a,K,J) for all K, J in
// the given group (default: the full stabilizer of a).
ConditionReport check_GF(const Theory& th, int a, const std::optional<Subgroup>& group = std::nullopt,
                         double tol = 1e-8);

struct FusionReport {
    FusionScan scan;
    int fields = 0;
    bool integral = false;
    json to_json() const;
};

FusionReport check_fusion_integrality(const ModularData& md, double tol = 1e-6, int max_rows = -1);

// One row of the table of two-current twist realizations. Currents are
// written per factor: the A-type factors first, then Ising factors.
struct TwistRow {
    Rational sJ;
    std::optional<Rational> sK;
    bool N_even = false;
    bool M_even = false;
    std::optional<int> F;  // +1 or -1 for two-current rows
    int ising = 0;
    std::vector<int> J_ising;  // 1 where the J current carries the Ising current
    std::vector<int> K_ising;
};

const std::vector<TwistRow>& twist_table();

struct TwistRealization {
    int N = 0, M = 0, levelN = 0, levelM = 0;
    std::string model;
    std::string field;
    std::string J, K;
    Rational spinJ, spinK;
    bool spins_match = false;
    std::optional<Rational> F;  // F(a,J,K) in turns
    bool F_matches = false;
    bool spin_rule = false;
    bool diagonal_local = false;
    bool twists_cancel = false;  // U = S = H on the diagonal field
    int diagonal_stabilizer = 0;
    bool GF = false;
    bool passes() const;
    json to_json() const;
};

// Smallest level at which the A_{N-1} current has integer spin and fixed points.
int integer_spin_level(int N);

// Builds the tensor model for a row with A_{N-1}, A_{M-1} factors
// (N, M = 0 picks the smallest admissible order) and verifies it.
TwistRealization realize_twist_row(const TwistRow& row, int N = 0, int M = 0);

}  // namespace fpres
