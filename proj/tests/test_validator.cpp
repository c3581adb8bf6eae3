#include "doctest.h"

#include "fpres/errors.hpp"
#include "fpres/extension.hpp"
#include "fpres/generators.hpp"
#include "fpres/validator.hpp"

using namespace fpres;

namespace {

Theory with_bundle(const Theory& th, int elem, const FixedPointBundle& b) {
    auto dense = std::dynamic_pointer_cast<const DenseBundleSet>(th.bundles);
    REQUIRE(dense);
    auto all = dense->bundles();
    all[elem] = b;
    return {th.md, th.center, std::make_shared<DenseBundleSet>(th.md, th.center, all)};
}

std::vector<int> integer_spin_elements(const Theory& th) {
    std::vector<int> out;
    for (int e = 1; e < th.center->size(); ++e)
        if (th.center->spin(e) == Rational(0)) out.push_back(e);
    return out;
}

}  // namespace

TEST_CASE("one-by-one bundles satisfy every condition") {
    for (auto md : {su2(4), su2(8), suN(3, 3), suN(3, 6)}) {
        auto th = make_theory(md);
        auto rep = check_conditions(th, 1e-12);
        CHECK(rep.passes());
        CHECK(rep.at("{2}").checked > 0);
        CHECK(rep.at("spin-rule").checked > 0);
        CHECK(rep.at("GF").checked > 0);
    }
}

TEST_CASE("half-integer spin one-by-one bundles have non-real eta") {
    // {3} with the literal restriction of T fixes S^J = t^-3, so eta = t^-6 is
    // not real, while {5c} on a self-conjugate fixed point demands a real eta.
    for (auto md : {su2(2), ising(), su2(6)}) {
        auto th = make_theory(md);
        auto rep = check_conditions(th, 1e-12);
        CHECK_FALSE(rep.at("{5c}").pass);
        for (const auto& id : ConditionReport::ids())
            if (id != "{5c}") CHECK(rep.at(id).pass);
    }
    CHECK(std::abs(make_theory(su2(2)).bundles->eta(1, 1) - cplx(0, 1)) < 1e-14);
}

TEST_CASE("flipped eta is caught with a witness") {
    auto th = make_theory(su2(4));
    auto dense = std::dynamic_pointer_cast<const DenseBundleSet>(th.bundles);
    auto b = *dense->bundle(1);
    b.eta[0] = -b.eta[0];
    auto rep = check_conditions(with_bundle(th, 1, b));
    CHECK_FALSE(rep.passes());
    CHECK_FALSE(rep.at("{5}").pass);
    CHECK(rep.at("{5}").witness["a"] == "2");
    auto j = rep.to_json();
    CHECK(j["schema"] == "condition-report v1");
    CHECK(j["conditions"]["{5}"]["pass"] == false);
}

TEST_CASE("perturbed resolution matrix fails unitarity") {
    auto th = make_theory(su2(4));
    auto dense = std::dynamic_pointer_cast<const DenseBundleSet>(th.bundles);
    auto b = *dense->bundle(1);
    b.S(0, 0) *= 1.01;
    auto rep = check_conditions(with_bundle(th, 1, b));
    CHECK_FALSE(rep.at("{2}").pass);
    CHECK(rep.at("{2}").deviation > 0.01);
}

TEST_CASE("bundle JSON round trip and validation") {
    auto md = su2(4);
    auto th = make_theory(md);
    auto dense = std::dynamic_pointer_cast<const DenseBundleSet>(th.bundles);
    auto b = *dense->bundle(1);
    auto j = bundle_to_json(b, *md);
    CHECK(j["schema"] == "fp-bundle v1");
    CHECK(j["current"] == "4");
    auto back = bundle_from_json(json::parse(j.dump()), *md);
    CHECK(back.fixed == b.fixed);
    CHECK(back.F == b.F);
    CHECK((back.S - b.S).cwiseAbs().maxCoeff() == 0.0);
    CHECK(validate_bundles(md, {{4, back}}).passes());

    // twists are re-extracted when omitted
    j.erase("F");
    CHECK(validate_bundles(md, {{4, bundle_from_json(j, *md)}}).passes());

    auto bad = j;
    bad["S_J"][0][0] = json::array({0.5, 0.0});
    auto rep = validate_bundles(md, {{4, bundle_from_json(bad, *md)}});
    CHECK_FALSE(rep.at("{2}").pass);

    auto wrong = j;
    wrong["fixed_fields"] = json::array({"1"});
    CHECK_THROWS_AS(validate_bundles(md, {{4, bundle_from_json(wrong, *md)}}), Error);
    CHECK_THROWS_AS(bundle_from_json(json::parse("{\"schema\":\"fp-bundle v2\"}"), *md), Error);
    CHECK_THROWS_AS(bundle_from_json(json::parse("{\"schema\":\"fp-bundle v1\"}"), *md), Error);
}

TEST_CASE("product theories and twist rules") {
    auto th = tensor(tensor(make_theory(su2(4)), make_theory(su2(6))), make_theory(su2(2)));
    auto rep = check_conditions(th, 1e-8, integer_spin_elements(th));
    CHECK(rep.passes());
    CHECK(rep.at("{4a}").checked > 0);
    CHECK(rep.at("fsym").checked > 0);
    CHECK(rep.at("{6}").checked > 0);
    // half-integer factor currents only fail {5c}
    auto all = check_conditions(th);
    for (const auto& id : ConditionReport::ids())
        if (id != "{5c}") CHECK(all.at(id).pass);
    auto ii = tensor(make_theory(ising()), make_theory(ising()));
    CHECK(check_conditions(ii, 1e-8, integer_spin_elements(ii)).passes());
}

TEST_CASE("G equals F on trivial twists") {
    auto th = make_theory(su2(3));
    auto rep = check_GF(th, 0);
    CHECK(rep.passes());
}

TEST_CASE("resolved bundles after extension") {
    auto th = make_theory(su2(4));
    auto ext = extend(th, subgroup_of_currents(*th.center, {4}));
    auto et = ext.as_theory();
    CHECK(check_conditions(et).passes());
    auto fr = check_fusion_integrality(*ext.md);
    CHECK(fr.integral);
    CHECK(fr.to_json()["rows_scanned"] == 3);

    auto th3 = tensor(tensor(make_theory(su2(4)), make_theory(su2(6))), make_theory(su2(2)));
    auto ext3 = extend(th3, subgroup_of_currents(*th3.center, {th3.md->find("(4,6,2)")}));
    auto rep = check_conditions(ext3.as_theory());
    CHECK(rep.passes());
    CHECK(rep.at("GF").checked > 0);
    CHECK(check_fusion_integrality(*ext3.md).integral);
}

TEST_CASE("fusion integrality flags a perturbed S") {
    auto md = su2(3);
    Eigen::MatrixXcd S = md->S();
    S(1, 1) += 0.02;
    auto bad = ModularData::dense(md->labels(), md->h(), md->c(), S, md->conjugation());
    CHECK_FALSE(check_fusion_integrality(*bad).integral);
}

TEST_CASE("two-current twist table") {
    const auto& rows = twist_table();
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CAPTURE(i);
        auto r = realize_twist_row(rows[i]);
        CHECK(r.spins_match);
        CHECK(r.F_matches);
        CHECK(r.spin_rule);
        CHECK(r.diagonal_local);
        CHECK(r.twists_cancel);
        CHECK(r.GF);
        CHECK(r.passes());
    }
    // rows with unconstrained orders also realize at odd order
    for (std::size_t i : {0u, 2u, 3u}) {
        CAPTURE(i);
        auto r = realize_twist_row(rows[i], 3, rows[i].M_even ? 2 : 3);
        CHECK(r.levelN == 3);
        CHECK(r.passes());
    }
    CHECK_THROWS_AS(realize_twist_row(rows[5], 3, 2), Error);
    CHECK_THROWS_AS(realize_twist_row(rows[1], 3), Error);
}
