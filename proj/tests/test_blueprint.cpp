#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foliage/blueprint.hpp"
#include "foliage/pipeline.hpp"

using namespace foliage;

namespace {
SetExpr cozero() {
    return SetExpr::diff(SetExpr::full(), SetExpr::compact(CompactCode::zero_point()));
}
}  // namespace

TEST_CASE("cantor pairing") {
    CHECK(cantor_unpair(0) == std::pair<std::size_t, std::size_t>{0, 0});
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j)
            CHECK(cantor_unpair(cantor_pair(i, j)) == std::pair<std::size_t, std::size_t>{i, j});
}

TEST_CASE("region oracles for the zero-point complement") {
    GraftBlueprint bp(Seq{}, cozero(), 0);
    // Delta is the all-zero chain
    for (const Seq& d : bp.delta_members(Seq{}, 4))
        for (std::size_t i = 0; i < d.length(); ++i) CHECK(d.at(i) == 0);
    CHECK(bp.delta_members(Seq{}, 4).size() == 5);
    // MAX = {0^k n : k >= 0, n >= 1}
    CHECK(bp.in_max(Seq{1}));
    CHECK(bp.in_max(Seq{0, 0, 3}));
    CHECK(!bp.in_max(Seq{0, 0}));
    CHECK(!bp.in_max(Seq{1, 1}));  // inside, but the parent is already inside
    CHECK(bp.in_omega(Seq{1, 1}));
    CHECK(bp.in_explant(Seq{0}));
    CHECK(!bp.in_explant(Seq{}));

    // MAX is an antichain on the depth-4 window
    std::vector<Seq> maxes;
    std::vector<std::uint32_t> digits;
    std::function<void(Seq)> walk = [&](Seq s) {
        if (bp.in_max(s)) maxes.push_back(s);
        if (s.length() >= 4) return;
        for (std::uint32_t n = 0; n < 4; ++n) walk(s.extend(n));
    };
    walk(Seq{});
    for (std::size_t i = 0; i < maxes.size(); ++i)
        for (std::size_t j = i + 1; j < maxes.size(); ++j)
            CHECK(maxes[i].incomparable_with(maxes[j]));
}

TEST_CASE("blueprint below a nonempty root") {
    // v = <1>, O = S_<1> minus the compact point 1,0,0,...
    CompactCode point({{Seq{}, {1}}, {Seq{1}, {0}}, {Seq{1, 0}, {0}}}, 3);
    SetExpr o = SetExpr::intersect(SetExpr::diff(SetExpr::full(), SetExpr::compact(point)),
                                   SetExpr::cylinder(Seq{1}));
    GraftBlueprint bp(Seq{1}, o, 0);
    std::vector<Seq> deltas = bp.delta_members(Seq{1}, 4);
    CHECK(deltas == std::vector<Seq>{Seq{1}, Seq{1, 0}, Seq{1, 0, 0}, Seq{1, 0, 0, 0}});
    CHECK_THROWS_AS(GraftBlueprint(Seq{2}, o, 0), std::invalid_argument);  // O empty below <2>
    CHECK_THROWS_AS(GraftBlueprint(Seq{1}, SetExpr::cylinder(Seq{1}), 0),
                    std::invalid_argument);  // not a proper subset
}

TEST_CASE("partition fibers") {
    GraftBlueprint bp(Seq{}, cozero(), 0);
    // the first Omega son goes to the first Delta member
    Seq first = bp.omega_son_at(Seq{}, 0);
    CHECK(first == Seq{1});
    CHECK(bp.partition_assign(Seq{}, first) == bp.delta_at(Seq{}, 0));

    // round trips over the first 20 fiber members
    for (std::size_t i = 0; i < 3; ++i) {
        Seq d = bp.delta_at(Seq{}, i);
        for (const Seq& z : bp.partition_enum(Seq{}, d, 20)) {
            CHECK(bp.partition_assign(Seq{}, z) == d);
            CHECK(bp.fiber_contains(Seq{}, d, z));
        }
    }
    // distinct selectors give disjoint fibers
    Seq d0 = bp.delta_at(Seq{}, 0), d1 = bp.delta_at(Seq{}, 1);
    auto f0 = bp.partition_enum(Seq{}, d0, 20);
    auto f1 = bp.partition_enum(Seq{}, d1, 20);
    for (const Seq& z : f0) CHECK(!bp.fiber_contains(Seq{}, d1, z));
    for (const Seq& z : f1) CHECK(!bp.fiber_contains(Seq{}, d0, z));
    CHECK_THROWS_AS(bp.partition_assign(Seq{}, Seq{0}), std::invalid_argument);
}

TEST_CASE("sons and leaves") {
    GraftBlueprint bp(Seq{}, cozero(), 0);
    // sons of node_<>^0 are a determined infinite subset of {<n> : n >= 1}
    auto fiber = bp.partition_enum(Seq{}, Seq{}, 5);
    for (const Seq& z : fiber) {
        CHECK(z.length() == 1);
        CHECK(z.at(0) >= 1);
    }
    // the root leaf is O itself, shadow-checked at depth 4
    CHECK(shadow_equal(bp.leaf(BlueprintNode::make_root()), cozero(), 4, 4));
    // leaf of an implant node contains its fiber cylinders and sits inside O
    BlueprintNode imp0 = BlueprintNode::make_imp(Seq{0}, 1);
    SetExpr leaf = bp.leaf(imp0);
    CHECK(shadow_subset(leaf, cozero(), 4, 4));
    for (const BlueprintNode& s : bp.sons(imp0, 4, 0)) {
        if (s.kind == BlueprintNode::Kind::max)
            CHECK(leaf.classify(s.x) == NodeClass::inside);
        else
            CHECK(s == BlueprintNode::make_imp(Seq{0}, 0));
    }
    // materialized spine branches respect the |B| <= l(x)+3 bound
    for (const Seq& x : bp.delta_members(Seq{}, 3)) {
        std::size_t nodes_on_branch = 1 + (bp.level_of(x) + 1) + 1;
        CHECK(nodes_on_branch <= bp.level_of(x) + 3);
    }
    CHECK(bp.cut().classify(Seq{0, 0}) == NodeClass::split);
    CHECK(bp.cut().classify(Seq{1}) == NodeClass::outside);
}

TEST_CASE("blueprint laws at depth 4 width 4") {
    TruncParams tr;  // 4 / 4 / 2
    for (CheckRecord& r : verify_blueprint(GraftBlueprint(Seq{}, cozero(), 0), tr)) {
        INFO(r.id, ": ", r.detail, " ", r.witness_json);
        CHECK(r.status == Status::pass);
    }
}

TEST_CASE("preserves shoots witnesses") {
    GraftBlueprint bp(Seq{}, cozero(), 0);
    // p with prefix <1>, y = <>
    PreserveShootsWitness w = preserves_shoots_witness(bp, Seq{1, 0, 0, 0}, Seq{}, 6, 4);
    REQUIRE(w.ok);
    CHECK(w.zdot == Seq{1});
    CHECK(w.x.kind == BlueprintNode::Kind::imp);
    CHECK(w.d.drop(w.x.level) == Seq{});

    // p below a max node, y its parent
    PreserveShootsWitness w2 = preserves_shoots_witness(bp, Seq{0, 0, 2, 0}, Seq{0, 0}, 6, 4);
    REQUIRE(w2.ok);
    CHECK(w2.zdot == Seq{0, 0, 2});
    CHECK(w2.w == Seq{0, 0});

    // y outside Delta is a precondition error
    CHECK_THROWS_AS(preserves_shoots_witness(bp, Seq{1, 0}, Seq{1}, 6, 4), std::invalid_argument);
    // membership of the removed point in O never resolves
    PreserveShootsWitness w3 = preserves_shoots_witness(bp, Seq{0, 0}, Seq{}, 2, 4);
    CHECK(!w3.ok);
    // a definitely-outside sample: O below <1> misses everything off <1>
    CompactCode point({{Seq{}, {1}}, {Seq{1}, {0}}}, 2);
    SetExpr o2 = SetExpr::intersect(SetExpr::diff(SetExpr::full(), SetExpr::compact(point)),
                                    SetExpr::cylinder(Seq{1}));
    GraftBlueprint bp2(Seq{1}, o2, 0);
    CHECK_THROWS_AS(preserves_shoots_witness(bp2, Seq{2, 0}, Seq{1}, 6, 4),
                    std::invalid_argument);
}
