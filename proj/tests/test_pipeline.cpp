#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "foliage/json_io.hpp"
#include "foliage/pipeline.hpp"

using namespace foliage;

namespace {
SetExpr cozero() {
    return SetExpr::diff(SetExpr::full(), SetExpr::compact(CompactCode::zero_point()));
}
CompactCode ones_code(std::uint32_t depth) {
    std::map<Seq, std::vector<std::uint32_t>> t;
    Seq s;
    for (std::uint32_t k = 0; k < depth; ++k) {
        t[s] = {1};
        s = s.extend(1);
    }
    return CompactCode(std::move(t), depth);
}
}  // namespace

TEST_CASE("trivial step: a full open set changes nothing") {
    PipelineState st(TruncParams{});
    PipelineState next = pipeline_step(st, SetExpr::full());
    CHECK(next.z_stages().back().empty());
    CHECK(next.family().empty());
    CHECK(next.in_m(0, Seq{}));
    CHECK(shadow_empty(next.loss(), 4, 4));
}

TEST_CASE("density violation is rejected") {
    PipelineState st(TruncParams{});
    CHECK_THROWS_AS(pipeline_step(st, SetExpr::cylinder(Seq{0})), invariant_failure);
}

TEST_CASE("single point removal") {
    TruncParams tr;
    PipelineState st = pipeline_run({CompactCode::zero_point()}, 1, tr);
    CHECK(st.z_stages().front() == std::vector<Seq>{Seq{}});
    REQUIRE(st.family().size() == 1);

    // M_0 is the blueprint's MAX set: (g5) at the stratum
    for (const CheckRecord& r : verify_pipeline_invariants(st)) {
        INFO(r.id, ": ", r.detail);
        CHECK(r.status == Status::pass);
    }
    // loss fingerprint: the zero chain stays split
    Shadow sh = depth_shadow(st.loss(), 3, 3);
    CHECK(sh.split == std::set<Seq>{Seq{0, 0, 0}});
    CHECK(sh.inside.empty());
    // M membership
    CHECK(st.in_m(0, Seq{1}));
    CHECK(st.in_m(0, Seq{0, 0, 2}));
    CHECK(!st.in_m(0, Seq{}));
    CHECK(!st.in_m(0, Seq{0}));
}

TEST_CASE("two stages: the second root sits inside an earlier max region") {
    TruncParams tr;
    PipelineState st = pipeline_run({CompactCode::zero_point(), ones_code(4)}, 2, tr);
    REQUIRE(st.z_stages().size() == 2);
    // Z_1 lives below M_0
    for (const Seq& z : st.z_stages()[1]) CHECK(st.in_m(0, z));
    for (const CheckRecord& r : verify_pipeline_invariants(st)) {
        INFO(r.id, ": ", r.detail);
        CHECK(r.status == Status::pass);
    }
    // (g6): the loss covers both removed codes on the stratum
    SetExpr expected = SetExpr::unite(SetExpr::compact(CompactCode::zero_point()),
                                      SetExpr::intersect(SetExpr::compact(ones_code(4)),
                                                         cozero()));
    CHECK(shadow_subset(expected, st.loss(), 4, 4));
}

TEST_CASE("empty pipeline materializes the standard tree") {
    TruncParams tr;
    PipelineState st(tr);
    PiTree h = materialize_pi_tree(st, 3, 3);
    CHECK(h.nodes.size() == 1 + 3 + 9 + 27);
    for (NodeId id : h.tree.skeleton.node_ids()) {
        const PiNode& n = h.nodes[static_cast<std::size_t>(id)];
        REQUIRE(n.kind == PiNode::Kind::supp);
        CHECK(shadow_equal(h.tree.leaf_of(id), SetExpr::cylinder(n.seq), 3, 3));
    }
}

TEST_CASE("one point removal: sons of the root are implant spines") {
    TruncParams tr;
    PipelineState st = pipeline_run({CompactCode::zero_point()}, 1, tr);
    PiTree h = materialize_pi_tree(st, 5, 4);
    NodeId root = 0;
    for (NodeId s : h.tree.skeleton.sons_of(root)) {
        const PiNode& n = h.nodes[static_cast<std::size_t>(s)];
        CHECK(n.kind == PiNode::Kind::imp);
        CHECK(n.level == n.selector.length());  // top of each spine
    }
    // every materialized leaf excludes the removed point's cylinder chain:
    // outside everywhere except the root, which must still split
    Seq removed{0, 0, 0, 0, 0};
    for (NodeId id : h.tree.skeleton.node_ids()) {
        NodeClass c = h.tree.leaf_of(id).classify(removed);
        if (id == root)
            CHECK(c == NodeClass::split);
        else
            CHECK(c == NodeClass::outside);
    }
    for (const CheckRecord& r : verify_materialized(st, h, 5, 4)) {
        INFO(r.id, ": ", r.detail, " ", r.witness_json);
        CHECK(r.status == Status::pass);
    }
    // blueprint supp nodes carry their graft leaf minus the loss
    const GraftBlueprint& bp = st.family().front();
    CHECK(shadow_equal(h.tree.leaf_of(root),
                       SetExpr::diff(bp.leaf(BlueprintNode::make_root()), st.loss()), 4, 4));
}

TEST_CASE("monotone materialization") {
    TruncParams tr;
    PipelineState st = pipeline_run({CompactCode::zero_point()}, 1, tr);
    PiTree small = materialize_pi_tree(st, 4, 3);
    PiTree big = materialize_pi_tree(st, 5, 4);
    // every node of the small tree appears in the big one with the same leaf
    // on the smaller stratum
    std::size_t found = 0;
    for (NodeId id : small.tree.skeleton.node_ids()) {
        const PiNode& n = small.nodes[static_cast<std::size_t>(id)];
        for (NodeId jd : big.tree.skeleton.node_ids()) {
            const PiNode& m = big.nodes[static_cast<std::size_t>(jd)];
            if (m.kind != n.kind) continue;
            bool same = n.kind == PiNode::Kind::supp
                            ? m.seq == n.seq
                            : (m.stage == n.stage && m.root == n.root &&
                               m.selector == n.selector && m.level == n.level);
            if (!same) continue;
            ++found;
            CHECK(shadow_equal(small.tree.leaf_of(id), big.tree.leaf_of(jd), 4, 3));
            break;
        }
    }
    CHECK(found == small.nodes.size());
}

TEST_CASE("empty pipeline: the standard tree shoots into itself") {
    TruncParams tr;
    PipelineState st(tr);
    PiTree h = materialize_pi_tree(st, 5, 4);
    auto samples = make_shoot_samples(st, 10, 5);
    REQUIRE(samples.size() == 10);
    for (const ShootCertificate& c : shoots_into_check(st, h, samples)) {
        CHECK(c.ok);
        CHECK(c.case_name == "support");
        CHECK(c.exceptions == 0);
    }
}

TEST_CASE("shoot certificates") {
    TruncParams tr;
    PipelineState st = pipeline_run({CompactCode::zero_point()}, 1, tr);
    PiTree h = materialize_pi_tree(st, 5, 4);

    // identity case: a support node refines itself with no exceptions
    auto id = h.find_supp(Seq{1});
    REQUIRE(id.has_value());
    ShootCertificate cert = shoots_refinement(h, *id, Seq{1}, {}, 4, 4);
    INFO(cert.detail);
    CHECK(cert.ok);

    // sampled checks cover both proof cases
    auto samples = make_shoot_samples(st, 50, 42);
    REQUIRE(samples.size() == 50);
    auto certs = shoots_into_check(st, h, samples);
    std::size_t support = 0, blueprint = 0;
    for (const ShootCertificate& c : certs) {
        INFO(c.case_name, " y=", c.target.str(), ": ", c.detail);
        CHECK(c.ok);
        (c.case_name == "support" ? support : blueprint)++;
    }
    CHECK(support > 0);
    CHECK(blueprint > 0);
    for (const ShootCertificate& c : grows_into_subspace_check(st, h, samples)) CHECK(c.ok);

    // a sample inside the loss is a precondition error
    ShootSample bad{Seq{0, 0, 0, 0}, Seq{}};
    CHECK_THROWS_AS(shoots_into_check(st, h, {bad}), std::invalid_argument);
}

TEST_CASE("adversarial code placement keeps the invariants") {
    // a code living away from the zero chain, with mixed branching
    std::map<Seq, std::vector<std::uint32_t>> t{{Seq{}, {2}},
                                                {Seq{2}, {0, 1}},
                                                {Seq{2, 0}, {0}},
                                                {Seq{2, 1}, {1}}};
    CompactCode side(std::move(t), 3);
    TruncParams tr;
    PipelineState st = pipeline_run({CompactCode::zero_point(), side}, 2, tr);
    for (const CheckRecord& r : verify_pipeline_invariants(st)) {
        INFO(r.id, ": ", r.detail, " ", r.witness_json);
        CHECK(r.status == Status::pass);
    }
    PiTree h = materialize_pi_tree(st, 5, 4);
    for (const CheckRecord& r : verify_materialized(st, h, 5, 4)) {
        INFO(r.id, ": ", r.detail, " ", r.witness_json);
        CHECK(r.status == Status::pass);
    }
}

TEST_CASE("randomized compact codes keep the invariants") {
    std::mt19937_64 rng(271828);
    TruncParams tr;
    for (int round = 0; round < 12; ++round) {
        // random pruned table with values below 4, branching <= 2
        std::map<Seq, std::vector<std::uint32_t>> table;
        std::uint32_t depth = 1 + rng() % 3;
        std::vector<Seq> frontier{Seq{}};
        for (std::uint32_t lvl = 0; lvl < depth; ++lvl) {
            std::vector<Seq> next;
            for (const Seq& s : frontier) {
                std::set<std::uint32_t> vals{static_cast<std::uint32_t>(rng() % 4)};
                if (rng() % 2) vals.insert(static_cast<std::uint32_t>(rng() % 4));
                table[s] = {vals.begin(), vals.end()};
                if (lvl + 1 < depth)
                    for (std::uint32_t v : vals) next.push_back(s.extend(v));
            }
            frontier = std::move(next);
        }
        CompactCode code(std::move(table), depth);
        CAPTURE(round);
        PipelineState st = pipeline_run({CompactCode::zero_point(), code},
                                        1 + static_cast<std::size_t>(rng() % 2), tr);
        for (const CheckRecord& r : verify_pipeline_invariants(st)) {
            INFO(round, " ", r.id, ": ", r.detail, " ", r.witness_json);
            CHECK(r.status == Status::pass);
        }
        PiTree h = materialize_pi_tree(st, 4, 4);
        for (const CheckRecord& r : verify_materialized(st, h, 4, 4)) {
            INFO(round, " ", r.id, ": ", r.detail, " ", r.witness_json);
            CHECK(r.status == Status::pass);
        }
    }
}

TEST_CASE("deeper materialization stays consistent") {
    TruncParams tr;
    PipelineState st = pipeline_run({CompactCode::zero_point()}, 1, tr);
    PiTree h = materialize_pi_tree(st, 6, 4);
    CHECK(h.nodes.size() > 4000);
    Seq removed{0, 0, 0, 0, 0, 0};
    for (NodeId id : h.tree.skeleton.node_ids()) {
        NodeClass c = h.tree.leaf_of(id).classify(removed);
        if (id == 0)
            CHECK(c == NodeClass::split);
        else
            CHECK(c == NodeClass::outside);
    }
    // agrees with the depth-5 materialization on the common part
    PiTree small = materialize_pi_tree(st, 5, 4);
    for (NodeId id : small.tree.skeleton.node_ids()) {
        const PiNode& n = small.nodes[static_cast<std::size_t>(id)];
        if (n.kind != PiNode::Kind::supp) continue;
        auto big = h.find_supp(n.seq);
        REQUIRE(big.has_value());
        CHECK(shadow_equal(small.tree.leaf_of(id), h.tree.leaf_of(*big), 4, 4));
    }
}

TEST_CASE("deterministic replay") {
    TruncParams tr;
    auto run = [&] {
        PipelineState st = pipeline_run({CompactCode::zero_point(), ones_code(4)}, 2, tr);
        PiTree h = materialize_pi_tree(st, 5, 4);
        std::vector<CheckRecord> records = verify_pipeline_invariants(st);
        for (CheckRecord r : verify_materialized(st, h, 5, 4)) records.push_back(std::move(r));
        return report_json(records, Json{{"seed", 7}}).dump();
    };
    CHECK(run() == run());
}
