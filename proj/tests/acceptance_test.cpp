// Acceptance suite: one pass/fail line per criterion.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>

#include "foliage/json_io.hpp"
#include "foliage/law_suites.hpp"

using namespace foliage;

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int criterion, const char* name, bool ok, double secs, const std::string& note) {
    std::printf("[criterion %d] %s: %s (%.1fs%s%s)\n", criterion, name, ok ? "PASS" : "FAIL", secs,
                note.empty() ? "" : "; ", note.c_str());
    std::fflush(stdout);
}

SuiteContext ctx() {
    SuiteContext c;
    c.seed = 1;
    c.mode = ExecMode::parallel;
    c.trunc = TruncParams{};  // depth 4 / width 4 / threshold 2
    return c;
}

std::string first_failure(const SuiteResult& r) {
    for (const CheckRecord& rec : r.records)
        if (rec.status == Status::fail) return rec.id + ": " + rec.detail;
    return "";
}

CompactCode two_branch_code(std::uint32_t depth) {
    std::map<Seq, std::vector<std::uint32_t>> table;
    std::vector<Seq> frontier{Seq{}};
    for (std::uint32_t lvl = 0; lvl < depth; ++lvl) {
        std::vector<Seq> next;
        for (const Seq& s : frontier) {
            table[s] = {0, 1};
            next.push_back(s.extend(0));
            next.push_back(s.extend(1));
        }
        frontier = std::move(next);
    }
    return CompactCode(std::move(table), depth);
}

}  // namespace

TEST_CASE("criterion 1: order-theoretic law suite") {
    Stopwatch sw;
    SuiteResult r = run_suite("lemma-2.6", ctx());
    bool ok = r.passed() && r.instances == 1 + 3 + 16 + 125 + 1296;
    report(1, "lemma 2.6 over labeled forests <= 5 nodes", ok, sw.seconds(),
           std::to_string(r.instances) + " forests" +
               (r.passed() ? "" : "; " + first_failure(r)));
    CHECK(ok);
    CHECK(sw.seconds() < 30.0);
}

TEST_CASE("criterion 2: hybrid correctness against the closure oracle") {
    Stopwatch sw;
    SuiteResult axioms = run_suite("prop-5.8", ctx());
    SuiteResult sons = run_suite("prop-5.10", ctx());
    bool ok = axioms.passed() && sons.passed() && axioms.instances > 100000;
    report(2, "hybrid tree axioms, closure oracle, sons formula", ok, sw.seconds(),
           std::to_string(axioms.instances) + " consistent families" +
               (ok ? "" : "; " + first_failure(axioms) + first_failure(sons)));
    CHECK(ok);
    CHECK(sw.seconds() < 120.0);
}

TEST_CASE("criterion 3: foliage hybrid preservation") {
    Stopwatch sw;
    SuiteResult tier1 = run_suite("prop-5.17", ctx());
    SuiteResult tier2 = run_suite("prop-5.17-tier2", ctx());
    SuiteResult reb = run_suite("lemma-5.15", ctx());
    bool ok = tier1.passed() && tier2.passed() && reb.passed() && tier2.instances == 200;
    report(3, "prop 5.17 on tier-1 enumeration and 200 tier-2 instances", ok, sw.seconds(),
           std::to_string(tier1.instances) + " tier-1 families" +
               (ok ? "" : "; " + first_failure(tier1) + first_failure(tier2)));
    CHECK(ok);
}

TEST_CASE("criterion 4: blueprint fidelity at depth 4 / width 4") {
    Stopwatch sw;
    SetExpr opens[] = {
        SetExpr::diff(SetExpr::full(), SetExpr::compact(CompactCode::zero_point())),
        SetExpr::diff(SetExpr::full(), SetExpr::compact(two_branch_code(4)))};
    bool ok = true;
    std::string note;
    for (const SetExpr& o : opens) {
        GraftBlueprint bp(Seq{}, o, 0);
        for (const CheckRecord& r : verify_blueprint(bp, TruncParams{})) {
            if (r.status != Status::pass) {
                ok = false;
                note = r.id + ": " + r.detail;
            }
        }
    }
    report(4, "blueprint laws (a1-a11, b1-b5, c1-c3, 17.2, d1-d2, e1-e7)", ok, sw.seconds(), note);
    CHECK(ok);
    CHECK(sw.seconds() < 60.0);
}

TEST_CASE("criterion 5: pipeline invariants for 1, 2, 3 compact codes") {
    Stopwatch sw;
    SuiteResult r = run_suite("pipeline-invariants", ctx());
    bool ok = r.passed();
    report(5, "(g1)-(g6) after every stage", ok, sw.seconds(), ok ? "" : first_failure(r));
    CHECK(ok);
}

TEST_CASE("criterion 6: theorem 8.2 evidence for Y = Baire minus one point") {
    Stopwatch sw;
    TruncParams tr;
    PipelineState st = pipeline_run({CompactCode::zero_point()}, 1, tr);
    PiTree h = materialize_pi_tree(st, 5, 4);

    bool ok = true;
    std::string note;
    for (const CheckRecord& r : verify_materialized(st, h, 5, 4)) {
        if (r.status != Status::pass) {
            ok = false;
            note = r.id + ": " + r.detail;
        }
    }
    // every materialized leaf excludes the removed point's stratum cylinder;
    // the root leaf is the whole subspace and stays split there
    Seq removed{0, 0, 0, 0, 0};
    for (NodeId id : h.tree.skeleton.node_ids()) {
        NodeClass c = h.tree.leaf_of(id).classify(removed);
        if (id == 0 ? c == NodeClass::inside : c != NodeClass::outside) {
            ok = false;
            note = "leaf classification at the removed point, node " +
                   h.nodes[static_cast<std::size_t>(id)].str();
        }
    }
    report(6, "materialized pi-tree at depth 5 / width 4", ok, sw.seconds(), note);
    CHECK(ok);
    CHECK(sw.seconds() < 60.0);
}

TEST_CASE("criterion 7: shoots-into certificates on 50 samples") {
    Stopwatch sw;
    TruncParams tr;
    PipelineState st = pipeline_run({CompactCode::zero_point()}, 1, tr);
    PiTree h = materialize_pi_tree(st, 5, 4);
    std::vector<ShootSample> samples = make_shoot_samples(st, 50, 1);
    std::vector<ShootCertificate> certs = shoots_into_check(st, h, samples);
    std::size_t support = 0, blueprint = 0;
    bool ok = samples.size() == 50;
    std::string note;
    for (const ShootCertificate& c : certs) {
        if (!c.ok) {
            ok = false;
            note = "y=" + c.target.str() + ": " + c.detail;
        }
        (c.case_name == "support" ? support : blueprint)++;
    }
    ok = ok && support > 0 && blueprint > 0;
    // re-validation through the refinement checker for the support cases
    for (const ShootSample& s : samples) {
        auto id = h.find_supp(s.y);
        if (!id || st.blueprint_at(s.y)) continue;
        ShootCertificate again = shoots_refinement(h, *id, s.y, {}, 4, 4);
        if (!again.ok) {
            ok = false;
            note = "re-validation failed at y=" + s.y.str() + ": " + again.detail;
        }
    }
    report(7, "shoot refinement certificates (both proof cases)", ok, sw.seconds(),
           std::to_string(support) + " support / " + std::to_string(blueprint) + " blueprint" +
               (note.empty() ? "" : "; " + note));
    CHECK(ok);
}

TEST_CASE("criterion 8: byte-identical reports for identical config and seed") {
    Stopwatch sw;
    auto once = [] {
        TruncParams tr;
        PipelineState st = pipeline_run({CompactCode::zero_point(), two_branch_code(4)}, 2, tr);
        PiTree h = materialize_pi_tree(st, 5, 4);
        std::vector<CheckRecord> records = verify_pipeline_invariants(st);
        for (CheckRecord r : verify_materialized(st, h, 5, 4)) records.push_back(std::move(r));
        std::vector<ShootSample> samples = make_shoot_samples(st, 20, 3);
        for (const ShootCertificate& c : shoots_into_check(st, h, samples))
            records.push_back({"cert/" + c.target.str(), c.ok ? Status::pass : Status::fail,
                               c.case_name + " " + c.witness, ""});
        SuiteContext c = ctx();
        SuiteResult laws = run_suite("lemma-about-shoots", c);
        for (CheckRecord r : laws.records) records.push_back(std::move(r));
        return report_json(records, Json{{"seed", 3}}).dump() + pi_tree_to_json(h).dump();
    };
    std::string a = once();
    std::string b = once();
    bool ok = a == b;
    report(8, "determinism of reports and exports", ok, sw.seconds(), "");
    CHECK(ok);
}
