#include "doctest.h"

#include "oracles.hpp"

#include "fpres/abelian.hpp"
#include "fpres/errors.hpp"
#include "fpres/snf.hpp"

#include <random>
#include <set>

using namespace fpres;

using fpres::testing::brute_force;

namespace {

int brute_order(const FiniteAbelianGroup& G, int x) {
    int o = 1, y = x;
    while (y != 0) {
        y = G.add(y, x);
        ++o;
    }
    return o;
}

}  // namespace

TEST_CASE("decompose builds groups from order lists") {
    auto G = decompose(std::vector<int>{2, 2});
    CHECK(G.order() == 4);
    CHECK(G.exponent() == 2);
    CHECK(decompose(std::vector<int>{5}).order() == 5);
    auto H = decompose(std::vector<int>{4, 2});
    CHECK(H.order() == 8);
    CHECK(H.element_order(H.index({3, 1})) == brute_order(H, H.index({3, 1})));
    CHECK(H.element_order(H.index({3, 1})) == 4);
    CHECK(decompose(std::vector<int>{}).order() == 1);
    CHECK_THROWS_AS(decompose(std::vector<int>{0}), Error);
}

TEST_CASE("element enumeration is lexicographic") {
    FiniteAbelianGroup G({3, 2});
    CHECK(G.element(0) == Element{0, 0});
    CHECK(G.element(1) == Element{0, 1});
    CHECK(G.element(2) == Element{1, 0});
    for (int i = 0; i < G.order(); ++i) CHECK(G.index(G.element(i)) == i);
}

TEST_CASE("smith normal form reproduces P A Q = D") {
    IntMatrix A = {{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
    auto sf = smith_normal_form(A);
    auto d = sf.diagonal();
    CHECK(d == std::vector<std::int64_t>{2, 6, 12});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            std::int64_t v = 0;
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) v += sf.P[i][k] * A[k][l] * sf.Q[l][j];
            CHECK(v == sf.D[i][j]);
            std::int64_t id = 0;
            for (int k = 0; k < 3; ++k) id += sf.Q[i][k] * sf.Qinv[k][j];
            CHECK(id == (i == j ? 1 : 0));
        }
}

TEST_CASE("characters follow the closed form") {
    FiniteAbelianGroup Z2({2}), Z5({5});
    auto t2 = characters(Z2);
    CHECK(std::abs(t2.value(1, 1) - cplx(-1, 0)) < 1e-15);
    auto t5 = characters(Z5);
    CHECK(std::abs(t5.value(2, 3) - expi(Rational(1, 5))) < 1e-15);
    for (int h = 0; h < 5; ++h) CHECK(t5.phase(0, h) == Rational(0));
}

TEST_CASE("random groups pass the character invariants") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<int> orders;
        int total = 1;
        while (true) {
            int n = std::uniform_int_distribution<int>(1, 8)(rng);
            if (total * n > 64) break;
            orders.push_back(n);
            total *= n;
            if (rng() % 3 == 0) break;
        }
        auto check = check_character_table(characters(FiniteAbelianGroup(orders)));
        CHECK(check.max() < 1e-12);
    }
}

TEST_CASE("subgroups and cyclic bases") {
    FiniteAbelianGroup G({4, 2});
    auto H = generate_subgroup(G, std::vector<int>{G.index({2, 1})});
    CHECK(H.order() == 2);
    auto W = whole_group(G);
    CHECK(W.order() == 8);
    CHECK(W.orders() == std::vector<int>{4, 2});
    auto I = intersect(W, H);
    CHECK(I == H);
    std::vector<int> bad = {0, G.index({1, 0})};
    CHECK_THROWS_AS(subgroup_from_members(G, bad), Error);
}

TEST_CASE("coset representatives in Z4 over {0,2}") {
    FiniteAbelianGroup G({4});
    auto H = generate_subgroup(G, std::vector<int>{2});
    auto pres = choose_coset_representatives(G, H);
    CHECK(pres.classes().order() == 2);
    CHECK(pres.representative(0) == 0);
    CHECK(pres.representative(1) == 1);
    CHECK(pres.closure(0) == 2);

    auto chars = characters(H.abstract());
    auto phi = cocycle_phases(pres, chars);
    CHECK(phi.phase(1, 1) == Rational(1, 4));  // principal root of -1 is i
    CHECK(phi.phase(0, 1) == Rational(0));
    CHECK(cocycle_violations(pres, chars, phi) == 0);

    auto lifted = lifted_characters(pres, chars, phi);
    CHECK(check_character_table(lifted).max() < 1e-12);
    // same set of phase rows as the standard Z4 table
    auto z4 = characters(G);
    std::set<std::vector<Rational>> a, b;
    for (int i = 0; i < 4; ++i) {
        std::vector<Rational> ra, rb;
        for (int g = 0; g < 4; ++g) {
            ra.push_back(lifted.phase(i, g));
            rb.push_back(z4.phase(i, g));
        }
        a.insert(ra);
        b.insert(rb);
    }
    CHECK(a == b);

    auto alt = pres.with_representatives({0, 3});
    auto phi2 = rebase_phases(phi, pres, alt, chars);
    CHECK(phi2.phase(1, 1) == frac(phi.phase(1, 1) + Rational(1, 2)));
    CHECK(cocycle_violations(alt, chars, phi2) == 0);
    CHECK_THROWS_AS(pres.with_representatives({0, 2}), Error);
}

TEST_CASE("coset representatives in Z2xZ2 over the diagonal") {
    FiniteAbelianGroup G({2, 2});
    auto H = generate_subgroup(G, std::vector<int>{G.index({1, 1})});
    auto pres = choose_coset_representatives(G, H);
    CHECK(pres.classes().order() == 2);
    CHECK(G.element(pres.representative(1)) == Element{1, 0});
    CHECK(pres.closure(0) == 0);
}

TEST_CASE("trivial and full subgroups") {
    FiniteAbelianGroup G({6});
    auto full = whole_group(G);
    auto pres = choose_coset_representatives(G, full);
    CHECK(pres.classes().order() == 1);
    auto chars = characters(full.abstract());
    auto lifted = lifted_characters(pres, chars, cocycle_phases(pres, chars));
    CHECK(check_character_table(lifted).max() < 1e-12);

    auto triv = generate_subgroup(G, std::vector<int>{});
    auto pres2 = choose_coset_representatives(G, triv);
    CHECK(pres2.classes().order() == 6);
    auto chars2 = characters(triv.abstract());
    auto phi = cocycle_phases(pres2, chars2);
    for (int c = 0; c < 6; ++c) CHECK(phi.phase(0, c) == Rational(0));
}

TEST_CASE("random coset presentations lift to characters") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<int> orders;
        int total = 1;
        for (int l = 0; l < 3; ++l) {
            int n = std::uniform_int_distribution<int>(1, 6)(rng);
            if (total * n > 64) break;
            orders.push_back(n);
            total *= n;
        }
        FiniteAbelianGroup G(orders);
        std::vector<int> gens;
        int ng = std::uniform_int_distribution<int>(0, 2)(rng);
        for (int g = 0; g < ng; ++g) gens.push_back(std::uniform_int_distribution<int>(0, G.order() - 1)(rng));
        auto H = generate_subgroup(G, gens);
        auto pres = choose_coset_representatives(G, H);
        auto chars = characters(H.abstract());
        auto phi = cocycle_phases(pres, chars);
        CHECK(cocycle_violations(pres, chars, phi) == 0);
        CHECK(check_character_table(lifted_characters(pres, chars, phi)).max() < 1e-12);
    }
}

TEST_CASE("congruence solver examples") {
    auto s1 = TwistSystem::from_integers({2, 2}, {{0, 1}, {1, 0}}, {1, 0}, {2, 2});
    CHECK(solve_congruence_system(s1) == std::vector<int>{0, 1});
    auto s2 = TwistSystem::from_integers({2}, {{1}}, {1}, {2});
    CHECK(solve_congruence_system(s2) == std::vector<int>{1});
    auto s3 = TwistSystem::from_integers({3}, {{1}}, {0}, {1});
    CHECK(solve_congruence_system(s3) == std::vector<int>{0});
    auto degenerate = TwistSystem::from_integers({2}, {{0}}, {0}, {1});
    CHECK_THROWS_AS(solve_congruence_system(degenerate), Error);
}

TEST_CASE("relaxed congruence solutions match brute force") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> orders;
        int total = 1;
        for (int l = 0; l < 3; ++l) {
            int n = std::uniform_int_distribution<int>(2, 4)(rng);
            if (total * n > 32) break;
            orders.push_back(n);
            total *= n;
        }
        std::size_t n = orders.size();
        std::vector<std::vector<std::int64_t>> r(n, std::vector<std::int64_t>(n));
        std::vector<std::int64_t> p(n), pd(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) r[j][i] = rng() % 5;
        for (std::size_t i = 0; i < n; ++i) {
            pd[i] = orders[i];
            p[i] = rng() % orders[i];
        }
        auto sys = TwistSystem::from_integers(orders, r, p, pd);
        auto expected = brute_force(sys);
        auto sol = solve_congruence_relaxed(sys);
        if (!sol) {
            CHECK(expected.empty());
            continue;
        }
        FiniteAbelianGroup K(orders);
        std::set<std::vector<int>> got;
        for (const auto& z : sol->kernel) got.insert(K.element(K.add(K.index(sol->k), K.index(z))));
        CHECK(got == expected);
        CHECK(*expected.begin() == sol->k);
    }
}
