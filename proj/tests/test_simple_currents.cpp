#include "doctest.h"

#include "fpres/errors.hpp"
#include "fpres/generators.hpp"
#include "fpres/simple_currents.hpp"

using namespace fpres;

namespace {

void check_permutations_against_fusion(const ModularData& md, const Center& c) {
    auto N = verlinde_fusion(md);
    for (int e = 0; e < c.size(); ++e) {
        int J = c.current(e);
        for (int a = 0; a < md.size(); ++a)
            for (int b = 0; b < md.size(); ++b) CHECK(N(J, a, b) == (b == c.act(e, a) ? 1 : 0));
    }
}

}  // namespace

TEST_CASE("current detection") {
    auto s4 = su2(4);
    auto c = detect_simple_currents(*s4);
    CHECK(c->size() == 2);
    CHECK(c->current(1) == 4);
    CHECK(c->group().element_order(1) == 2);
    check_permutations_against_fusion(*s4, *c);

    auto s55 = suN(5, 5);
    auto c5 = detect_simple_currents(*s55);
    CHECK(c5->group().orders() == std::vector<int>{5});
    check_permutations_against_fusion(*s55, *c5);

    CHECK(detect_simple_currents(*trivial_theory())->size() == 1);
    for (int k = 1; k <= 7; ++k) {
        auto c2 = detect_simple_currents(*su2(k));
        CHECK(c2->size() == 2);
        CHECK(c2->current(1) == k);
    }
    auto c33 = detect_simple_currents(*suN(3, 3));
    CHECK(c33->size() == 3);
    check_permutations_against_fusion(*suN(3, 3), *c33);
    auto ci = detect_simple_currents(*ising());
    CHECK(ci->size() == 2);
    CHECK(ci->current(1) == 1);
    CHECK(ci->spin(1) == Rational(1, 2));
}

TEST_CASE("monodromy charges") {
    auto s4 = su2(4);
    auto c = detect_simple_currents(*s4);
    CHECK(monodromy_charge(*s4, *c, 1, 0) == Rational(0));
    CHECK(monodromy_charge(*s4, *c, 1, 1) == Rational(1, 2));
    CHECK(monodromy_charge(*s4, *c, 1, 2) == Rational(0));

    // Q_J(Ka) = Q_J(a) + Q_J(K) on the SU(3)_3 center
    auto md = suN(3, 3);
    auto c3 = detect_simple_currents(*md);
    for (int J = 0; J < 3; ++J)
        for (int K = 0; K < 3; ++K)
            for (int a = 0; a < md->size(); ++a)
                CHECK(monodromy_charge(*md, *c3, J, c3->act(K, a)) ==
                      frac(monodromy_charge(*md, *c3, J, a) + monodromy_charge(*md, *c3, J, c3->current(K))));
}

TEST_CASE("stabilizers") {
    auto th = make_theory(su2(4));
    auto H = subgroup_of_currents(*th.center, {4});
    auto st = stabilizers(th, H);
    CHECK(st.S[2].order() == 2);
    CHECK(st.S[1].order() == 1);
    CHECK(st.U[2].order() == 2);

    auto triv = subgroup_of_currents(*th.center, {});
    auto st0 = stabilizers(th, triv);
    for (const auto& s : st0.S) CHECK(s.order() == 1);

    auto s5 = make_theory(suN(5, 5));
    auto pr = tensor(s5, s5);
    int J = s5.center->current(1);
    int f = s5.md->find("(1,1,1,1)");
    int JJ = pr.md->join({J, J});
    auto Hd = subgroup_of_currents(*pr.center, {JJ});
    int ff = pr.md->join({f, f});
    auto Sff = stabilizer(*pr.center, Hd, ff);
    CHECK(Sff == Hd);
    CHECK(untwisted_stabilizer(*pr.bundles, ff, Sff) == Sff);
    // T_a is constant along center orbits
    for (int a = 0; a < s5.md->size(); ++a)
        for (int g = 0; g < 5; ++g)
            CHECK(full_stabilizer(*s5.center, a) == full_stabilizer(*s5.center, s5.center->act(g, a)));
}

TEST_CASE("twist extraction") {
    for (int k = 2; k <= 10; k += 2) {
        auto th = make_theory(su2(k));
        CHECK(th.bundles->twist(k / 2, 1, 1) == ((k / 2) % 2 ? Rational(1, 2) : Rational(0)));
        CHECK(th.bundles->twist(k / 2, 0, 1) == Rational(0));
    }
    auto is = make_theory(ising());
    CHECK(is.bundles->twist(2, 1, 1) == Rational(1, 2));

    // Ising x Ising with the diagonal current: twists cancel on (sigma, sigma)
    auto ii = tensor(is, is);
    int pp = ii.md->join({1, 1});
    auto H = subgroup_of_currents(*ii.center, {pp});
    int ss = ii.md->join({2, 2});
    auto S = stabilizer(*ii.center, H, ss);
    CHECK(S.order() == 2);
    CHECK(untwisted_stabilizer(*ii.bundles, ss, S) == S);
    require_extension_group(ii, H);
}

TEST_CASE("one-by-one bundles") {
    auto s4 = su2(4);
    auto c = detect_simple_currents(*s4);
    auto b = solve_1x1_bundle(*s4, *c, 1);
    CHECK(b.fixed == std::vector<int>{2});
    CHECK(std::abs(b.S(0, 0) - cplx(0, 1)) < 1e-14);
    CHECK(std::abs(b.eta[0] + 1.0) < 1e-14);

    auto s2 = su2(2);
    auto b2 = solve_1x1_bundle(*s2, *detect_simple_currents(*s2), 1);
    CHECK(std::abs(b2.S(0, 0) - expi(Rational(-3, 8))) < 1e-14);

    auto s55 = suN(5, 5);
    auto c5 = detect_simple_currents(*s55);
    for (int e = 1; e < 5; ++e) {
        auto bf = solve_1x1_bundle(*s55, *c5, e);
        CHECK(bf.fixed == std::vector<int>{s55->find("(1,1,1,1)")});
        CHECK(std::abs(bf.S(0, 0) - 1.0) < 1e-12);
    }
    auto is = ising();
    auto bi = solve_1x1_bundle(*is, *detect_simple_currents(*is), 1);
    CHECK(std::abs(bi.S(0, 0) - expi(Rational(-1, 8))) < 1e-14);

    auto s3 = su2(3);
    CHECK_THROWS_AS(solve_1x1_bundle(*s3, *detect_simple_currents(*s3), 1), Error);
}

TEST_CASE("extension group requirements") {
    auto th = make_theory(su2(2));
    auto H = subgroup_of_currents(*th.center, {2});
    CHECK_THROWS_AS(require_extension_group(th, H), Error);
    auto th4 = make_theory(su2(4));
    require_extension_group(th4, subgroup_of_currents(*th4.center, {4}));
    CHECK_THROWS_AS(subgroup_of_currents(*th4.center, {2}), Error);
}

TEST_CASE("malformed supplied bundles are rejected") {
    auto md = su2(4);
    auto c = detect_simple_currents(*md);
    auto b = solve_1x1_bundle(*md, *c, 1);
    b.fixed = {1};
    CHECK_THROWS_AS(make_theory(md, {{4, b}}), Error);
}
