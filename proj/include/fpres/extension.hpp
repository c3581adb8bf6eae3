#pragma once

#include "fpres/abelian.hpp"
#include "fpres/io.hpp"
#include "fpres/simple_currents.hpp"

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace fpres {

// seed 0 selects the canonical choices (smallest ids, principal roots);
// any other seed draws orbit representatives, untwisted representatives
// within their U_a coset and roots of the cocycle phases pseudo-randomly.
struct Conventions {
    unsigned seed = 0;
    bool link_conjugates = true;
    double tolerance = 1e-8;
    bool strict = true;  // throw on failed consistency checks
};

struct Orbit {
    int rep = 0;
    std::vector<int> members;
    Subgroup S, U;
    int first = 0;         // extended id of (rep, trivial label)
    int conj_orbit = 0;
    int K_conj = 0;        // element of H with K a = conj(rep of conj orbit)
    std::vector<int> pi;   // label permutation from the conjugation

    Subgroup fixing;                 // residual classes fixing the orbit
    std::vector<int> R_basis;        // untwisted representatives of fixing's basis
    std::map<int, int> R;            // residual class -> representative (center element)
    std::map<int, int> X;            // residual class -> some member fixing rep
    std::vector<int> relabeling;     // residual classes with X but twisted on U_a
    CosetPresentation pres;
    CocycleData phi;
    bool linked = false;
};

struct ExtendedField {
    int orbit = 0;
    int label = 0;  // abstract index in U of the orbit
};

class ExtendedTheory {
public:
    Theory base;
    Subgroup H;
    Conventions conventions;

    std::vector<Orbit> orbits;
    std::vector<int> orbit_of;  // base field -> orbit, -1 when not local
    std::vector<ExtendedField> fields;
    MDPtr md;

    Subgroup local;                            // H-local currents
    FiniteAbelianGroup residual;               // local / H
    std::vector<int> residual_rep;             // class -> canonical center element
    std::unordered_map<int, int> class_of;     // local element -> class
    CenterPtr center;                          // residual action on extended fields
    std::map<int, FixedPointBundle> resolved;  // class -> bundle over extended ids
    BundlesPtr bundles;

    json report;

    Theory as_theory() const { return {md, center, bundles}; }

    int field_id(int orbit, int label) const { return orbits[orbit].first + label; }
    std::string label(int ext) const;
    Rational psi(int orbit, int label, int u) const;  // U-character phase
    std::optional<int> pair_representative(int cls, int oa, int ob) const;
    // F^H(a, K^H, J^H) from representatives; both classes must fix the orbit.
    Rational extended_twist(int orbit, int clsK, int clsJ) const;
    // eta^{J^H}_{(a,i)} from the simplified formula (turns).
    cplx extended_eta(int orbit, int label, int cls) const;
};

std::vector<std::vector<int>> local_orbits(const Theory& th, const Subgroup& H);

ExtendedTheory extend(const Theory& base, const Subgroup& H, const Conventions& conv = {});

}  // namespace fpres
