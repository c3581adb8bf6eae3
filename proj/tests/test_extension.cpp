#include "doctest.h"

#include "relabel.hpp"

#include "fpres/errors.hpp"
#include "fpres/extension.hpp"
#include "fpres/generators.hpp"
#include "fpres/validator.hpp"

using namespace fpres;

namespace {

Subgroup currents(const Theory& th, std::vector<int> fields) { return subgroup_of_currents(*th.center, fields); }

const Theory& su5_squared() {
    static Theory th = [] {
        auto s = make_theory(suN(5, 5));
        return tensor(s, s);
    }();
    return th;
}

int su5_current(int n) { return n == 0 ? 0 : make_theory(suN(5, 5)).center->current(n); }

Subgroup diagonal_z5() {
    const auto& th = su5_squared();
    return currents(th, {th.md->join({su5_current(1), su5_current(1)})});
}

const ExtendedTheory& su5_diagonal() {
    static ExtendedTheory ext = extend(su5_squared(), diagonal_z5());
    return ext;
}

Theory three_factor() {
    return tensor(tensor(make_theory(su2(4)), make_theory(su2(6))), make_theory(su2(2)));
}

}  // namespace

TEST_CASE("su2 level 4 by its Z2 current") {
    auto th = make_theory(su2(4));
    auto ext = extend(th, currents(th, {4}));
    REQUIRE(ext.md->size() == 3);
    CHECK(ext.orbits.size() == 2);
    CHECK(ext.orbits[1].U.order() == 2);
    CHECK(check_modular(*ext.md).passes(1e-10));
    auto N = verlinde_fusion(*ext.md);
    // every field is a simple current: Z3 fusion
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            int count = 0;
            for (int c = 0; c < 3; ++c) count += N(a, b, c);
            CHECK(count == 1);
        }
    CHECK(ext.residual.order() == 1);
    CHECK(ext.report["unused_extra_currents"] == 2);
}

TEST_CASE("trivial extension leaves the data unchanged") {
    auto th = make_theory(su2(3));
    auto ext = extend(th, currents(th, {0}));
    REQUIRE(ext.md->size() == 4);
    CHECK((ext.md->S() - th.md->S()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ext.residual.order() == 2);
}

TEST_CASE("extension group must be local with integer spin") {
    auto th = make_theory(su2(2));
    CHECK_THROWS_AS(extend(th, currents(th, {2})), Error);
    auto th3 = make_theory(su2(3));
    CHECK_THROWS_AS(extend(th3, currents(th3, {3})), Error);
}

TEST_CASE("SU(5)_5 squared by the diagonal Z5") {
    const auto& ext = su5_diagonal();
    CHECK(ext.base.md->size() == 15876);
    CHECK(ext.md->size() == 640);
    CHECK(ext.residual.orders() == std::vector<int>{5});
    CHECK(check_modular(*ext.md).passes(1e-9));
    CHECK(ext.report["checks"]["problems"].empty());
    CHECK(ext.report["checks"]["counting_violations"] == 0);

    // (f,f) is a length-one orbit with five resolved fields
    const auto& th = ext.base;
    int f = suN(5, 5)->find("(1,1,1,1)");
    int ff = th.md->join({f, f});
    const auto& o = ext.orbits[ext.orbit_of[ff]];
    CHECK(o.members.size() == 1);
    CHECK(o.U.order() == 5);
    CHECK(o.fixing.order() == 5);

    REQUIRE(ext.resolved.size() == 4);
    std::vector<Eigen::MatrixXcd> mats;
    for (const auto& [cls, b] : ext.resolved) {
        CHECK(b.fixed.size() == 15);
        CHECK(b.fixed == fixed_fields(*ext.center, cls, ext.md->size()));
        // asymmetric, unlike any 1x1 or product bundle
        CHECK((b.S - b.S.transpose()).cwiseAbs().maxCoeff() > 1e-3);
        Eigen::MatrixXcd U = b.S * b.S.adjoint();
        CHECK((U - Eigen::MatrixXcd::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-9);
        mats.push_back(b.S);
    }
    for (std::size_t i = 0; i < mats.size(); ++i)
        for (std::size_t j = i + 1; j < mats.size(); ++j) CHECK((mats[i] - mats[j]).cwiseAbs().maxCoeff() > 1e-3);

    // the extended fusion rules are integral
    auto scan = fusion_integrality_scan(ext.md->S());
    CHECK(scan.rows_scanned == 640);
    CHECK(scan.max_residual < 1e-6);
    CHECK(scan.min_value > -1e-6);
}

TEST_CASE("resolved bundles obey the eta product law") {
    const auto& ext = su5_diagonal();
    const auto& bs = *ext.bundles;
    const auto& R = ext.residual;
    for (int J = 1; J < R.order(); ++J)
        for (int L = 1; L < R.order(); ++L) {
            int JL = R.add(J, L);
            for (int x : ext.resolved.at(J).fixed) {
                cplx lhs = bs.eta(J, x) * bs.eta(L, x);
                cplx rhs = expi(bs.twist(x, L, J)) * bs.eta(JL, x);
                CHECK(std::abs(lhs - rhs) < 1e-9);
            }
        }
}

TEST_CASE("resolved bundles pass the condition checks") {
    const auto& ext = su5_diagonal();
    auto rep = check_conditions(ext.as_theory(), 1e-8);
    CHECK(rep.passes());
    CHECK(rep.at("{6}").checked == 4);
    CHECK(rep.at("{6}").deviation < 1e-8);
    CHECK(rep.at("GF").checked > 0);
    CHECK(rep.at("{5b}").deviation < 1e-8);
}

TEST_CASE("two-step extension equals the one-step extension") {
    const auto& ext = su5_diagonal();
    auto et = ext.as_theory();
    auto two = extend(et, currents(et, {et.center->current(1)}));
    const auto& th = su5_squared();
    int J = su5_current(1);
    auto one = extend(th, currents(th, {th.md->join({J, 0}), th.md->join({0, J})}));
    CHECK(one.md->size() == 100);
    CHECK(two.md->size() == 100);
    CHECK(testing::find_relabeling(*two.md, *one.md).has_value());
}

TEST_CASE("field-dependent twists in a three-factor product") {
    auto th = three_factor();
    const auto& md = *th.md;
    auto ext = extend(th, currents(th, {md.find("(4,6,2)")}));
    auto cls = [&](const char* label) { return ext.class_of.at(th.center->element_of(md.find(label))); };
    int J = cls("(4,0,0)"), K = cls("(4,0,2)"), L = cls("(0,0,2)");
    CHECK(ext.residual.order() == 4);
    auto rep = [&](int orbit, int c) { return md.labels()[th.center->current(ext.orbits[orbit].R.at(c))]; };
    // representatives are defined up to the untwisted stabilizer, which is trivial here
    int a = ext.orbit_of[md.find("(2,1,1)")];
    int b = ext.orbit_of[md.find("(4,3,1)")];
    CHECK(ext.orbits[a].U.order() == 1);
    CHECK(ext.orbits[b].U.order() == 1);
    CHECK(rep(a, J) == "(4,0,0)");
    CHECK(rep(a, K) == "(4,0,2)");
    CHECK(rep(a, L) == "(0,0,2)");
    CHECK(rep(b, J) == "(0,6,2)");
    CHECK(rep(b, K) == "(0,6,0)");
    CHECK(rep(b, L) == "(0,0,2)");
    for (int x : {J, K, L})
        for (int y : {J, K, L}) {
            Rational ta = ext.extended_twist(a, x, y), tb = ext.extended_twist(b, x, y);
            if (x == y)
                CHECK(ta == tb);
            else
                CHECK(frac(ta - tb) == Rational(1, 2));
        }
}

TEST_CASE("results do not depend on conventions") {
    auto th = three_factor();
    auto H = currents(th, {th.md->find("(4,6,2)")});
    auto base = extend(th, H);
    for (unsigned seed : {1u, 7u, 1234u}) {
        Conventions conv;
        conv.seed = seed;
        auto other = extend(th, H, conv);
        CHECK(testing::find_relabeling(*base.md, *other.md).has_value());
        CHECK(other.report["checks"]["problems"].empty());
    }
    Conventions conv;
    conv.seed = 3;
    auto other = extend(su5_squared(), diagonal_z5(), conv);
    CHECK(other.report["checks"]["problems"].empty());
    CHECK(testing::find_relabeling(*su5_diagonal().md, *other.md).has_value());
    // resolved bundles agree up to relabeling of the fixed points and sign of S^J rows
    for (const auto& [cls, b] : other.resolved) {
        Eigen::MatrixXcd M = b.S * b.S;
        const auto& ref = su5_diagonal().resolved.at(cls);
        Eigen::MatrixXcd Mref = ref.S * ref.S;
        CHECK(std::abs(M.trace() - Mref.trace()) < 1e-8);
    }
}

TEST_CASE("untwisted stabilizer counting on random local fields") {
    const auto& ext = su5_diagonal();
    for (const auto& o : ext.orbits) {
        CHECK(o.members.size() * o.S.order() == static_cast<std::size_t>(ext.H.order()));
        CHECK(o.U.order() <= o.S.order());
        if (o.fixing.order() > 1) CHECK(o.R.size() == static_cast<std::size_t>(o.fixing.order()));
    }
}
