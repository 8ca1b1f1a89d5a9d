#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "foliage/json_io.hpp"

using namespace foliage;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spit(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

const char* kOneConfig =
    R"({"compacts":[{"table":{},"depth":0}],"stages":1,"trunc":{"depth":4,"width":4,"threshold":2}})";

int run_cli(const std::string& args) {
    const char* bin = std::getenv("FOLIAGE_CLI");
    REQUIRE(bin != nullptr);
    int code = std::system((std::string(bin) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(code);
}

}  // namespace

TEST_CASE("config parsing") {
    RunConfig cfg = parse_config(kOneConfig);
    CHECK(cfg.stages == 1);
    CHECK(cfg.trunc.depth == 4);
    CHECK(cfg.compacts.size() == 1);

    // minimal config: no compacts means zero stages
    RunConfig empty = parse_config("{}");
    CHECK(empty.stages == 0);

    CHECK_THROWS_AS(parse_config("not json"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"trunc":{"depth":0}})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"trunc":{"width":2,"threshold":3}})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"stages":2})"), config_error);
    // non-pruned compact table
    CHECK_THROWS_AS(parse_config(R"({"compacts":[{"table":{"":[]},"depth":1}]})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"compacts":[{"table":{"":[0]},"depth":2}]})"), config_error);
}

TEST_CASE("tree json round trip") {
    FinTree t = seq_tree(3, 2);
    Json j = tree_to_json(t);
    FinTree back = tree_from_json(j);
    CHECK(back.node_ids() == t.node_ids());
    for (NodeId id : t.node_ids()) {
        CHECK(back.parent_of(id) == t.parent_of(id));
        CHECK(back.label_of(id) == t.label_of(id));
    }
}

TEST_CASE("set expression json round trip on the closed subset") {
    SetExpr exprs[] = {
        SetExpr::empty(), SetExpr::full(), SetExpr::cylinder(Seq{1, 2}),
        SetExpr::compact(CompactCode::zero_point()),
        SetExpr::diff(SetExpr::full(), SetExpr::compact(CompactCode::zero_point())),
        SetExpr::unite(SetExpr::cylinder(Seq{0}), SetExpr::cylinder(Seq{1, 1}))};
    for (const SetExpr& e : exprs) {
        SetExpr back = set_expr_from_json(set_expr_to_json(e));
        CHECK(shadow_equal(e, back, 3, 3));
    }
    CHECK_THROWS_AS(set_expr_from_json(Json{{"op", "nope"}}), config_error);
}

TEST_CASE("compact code json uses stringified keys") {
    CompactCode c({{Seq{}, {0, 1}}, {Seq{0}, {0}}, {Seq{1}, {2}}}, 2);
    Json j = compact_to_json(c);
    CHECK(j["table"].contains(""));
    CHECK(j["table"].contains("0"));
    CHECK(j["table"]["1"] == Json::array({2}));
    CHECK(compact_from_json(j) == c);
}

TEST_CASE("dot export tags implants") {
    TruncParams tr;
    tr.depth = 3;
    tr.width = 3;
    PipelineState st = pipeline_run({CompactCode::zero_point()}, 1, tr);
    PiTree h = materialize_pi_tree(st, 3, 3);
    std::string dot = dot_export(h);
    CHECK(dot.find("style=dashed") != std::string::npos);
    CHECK(dot.find("digraph") != std::string::npos);
    Json j = pi_tree_to_json(h);
    CHECK(j.contains("loss"));
    bool has_imp = false;
    for (const auto& n : j["nodes"]) has_imp = has_imp || n["kind"] == "imp";
    CHECK(has_imp);
}

TEST_CASE("cli: run exits 0 and writes artifacts") {
    fs::path dir = fs::temp_directory_path() / "foliage-cli-run";
    fs::remove_all(dir);
    spit(dir / "cfg.json", kOneConfig);
    int code = run_cli("run --config " + (dir / "cfg.json").string() + " --out " +
                       (dir / "out").string());
    CHECK(code == 0);
    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(fs::exists(dir / "out" / "tree.json"));
    CHECK(fs::exists(dir / "out" / "tree.dot"));
    Json report = Json::parse(slurp(dir / "out" / "report.json"));
    for (const auto& c : report["checks"]) CHECK(c["status"] == "pass");
}

TEST_CASE("cli: empty config exports the truncated standard tree") {
    fs::path dir = fs::temp_directory_path() / "foliage-cli-empty";
    fs::remove_all(dir);
    spit(dir / "cfg.json", "{}");
    int code = run_cli("run --config " + (dir / "cfg.json").string() + " --out " +
                       (dir / "out").string());
    CHECK(code == 0);
    Json tree = Json::parse(slurp(dir / "out" / "tree.json"));
    // every node is a support node carrying its own cylinder
    for (const auto& n : tree["nodes"]) {
        CHECK(n["kind"] == "supp");
        REQUIRE(n["leaf"].contains("op"));
        bool cyl = n["leaf"]["op"] == "cyl" || n["leaf"]["op"] == "full";
        CHECK(cyl);
    }
}

TEST_CASE("cli: determinism across runs") {
    fs::path dir = fs::temp_directory_path() / "foliage-cli-det";
    fs::remove_all(dir);
    spit(dir / "cfg.json", kOneConfig);
    std::string base = std::string(std::getenv("FOLIAGE_CLI"));
    REQUIRE(std::system((base + " run --config " + (dir / "cfg.json").string() + " --seed 9 --out " +
                         (dir / "a").string() + " > /dev/null")
                            .c_str()) == 0);
    REQUIRE(std::system((base + " run --config " + (dir / "cfg.json").string() + " --seed 9 --out " +
                         (dir / "b").string() + " > /dev/null")
                            .c_str()) == 0);
    CHECK(slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json"));
    CHECK(slurp(dir / "a" / "tree.json") == slurp(dir / "b" / "tree.json"));
}

TEST_CASE("cli: corrupted family fixture exits 1 with a witness") {
    fs::path dir = fs::temp_directory_path() / "foliage-cli-fixture";
    fs::remove_all(dir);
    std::string cfg = std::string(kOneConfig);
    cfg.insert(cfg.size() - 1, R"(,"corrupt_family_fixture":true)");
    spit(dir / "cfg.json", cfg);
    int code = run_cli("run --config " + (dir / "cfg.json").string() + " --out " +
                       (dir / "out").string());
    CHECK(code == 1);
    Json report = Json::parse(slurp(dir / "out" / "report.json"));
    bool witnessed = false;
    for (const auto& c : report["checks"])
        if (c["status"] == "fail" && c.contains("witness")) witnessed = true;
    CHECK(witnessed);
}

TEST_CASE("cli: two-stage run verifies stage blueprints") {
    fs::path dir = fs::temp_directory_path() / "foliage-cli-two";
    fs::remove_all(dir);
    spit(dir / "cfg.json",
         R"({"compacts":[{"table":{},"depth":0},)"
         R"({"table":{"":[1],"1":[1],"1,1":[1]},"depth":3}],)"
         R"("trunc":{"depth":4,"width":4,"threshold":2}})");
    int code = run_cli("run --config " + (dir / "cfg.json").string() + " --out " +
                       (dir / "out").string());
    CHECK(code == 0);
    Json report = Json::parse(slurp(dir / "out" / "report.json"));
    std::size_t blueprint_checks = 0, stage1 = 0;
    for (const auto& c : report["checks"]) {
        std::string id = c["id"].get<std::string>();
        if (id.rfind("blueprint[", 0) == 0) ++blueprint_checks;
        if (id.rfind("n=1/", 0) == 0) ++stage1;
        CHECK(c["status"] == "pass");
    }
    CHECK(blueprint_checks > 30);  // several blueprints, many law records each
    CHECK(stage1 >= 7);            // the g-records of the second stage
}

TEST_CASE("tier-2 foliage serialization carries symbolic leaves") {
    FoliageTree<BaireUniverse> s = std_tree({2, 2});
    Json j = foliage_to_json(s);
    REQUIRE(j["nodes"].size() == 3);
    for (const auto& n : j["nodes"]) CHECK(n.contains("leaf"));
}

TEST_CASE("cli: verify-laws serial equals parallel, unknown suite rejected") {
    fs::path dir = fs::temp_directory_path() / "foliage-cli-laws";
    fs::remove_all(dir);
    spit(dir / "cfg.json", kOneConfig);
    std::string base = std::string(std::getenv("FOLIAGE_CLI")) + " verify-laws --config " +
                       (dir / "cfg.json").string() + " --suite lemma-2.6,pi-refines-transitive";
    REQUIRE(std::system((base + " --seed 5 --out " + (dir / "par").string() + " > /dev/null").c_str()) ==
            0);
    REQUIRE(std::system(
                (base + " --seed 5 --serial --out " + (dir / "ser").string() + " > /dev/null").c_str()) ==
            0);
    CHECK(slurp(dir / "par" / "report.json") == slurp(dir / "ser" / "report.json"));
    CHECK(run_cli("verify-laws --config " + (dir / "cfg.json").string() + " --suite lemma-9.9") ==
          3);
}

TEST_CASE("witness json replays as a regression fixture") {
    // serialize a family, rebuild it from the witness schema, re-validate
    FinTree host = seq_tree(3, 2);
    std::vector<FinTree::Entry> e{{seq_tree_id(Seq{0}, 2), std::nullopt, Seq{0}},
                                  {100, seq_tree_id(Seq{0}, 2), std::nullopt},
                                  {seq_tree_id(Seq{0, 0}, 2), 100, Seq{0, 0}},
                                  {seq_tree_id(Seq{0, 1}, 2), 100, Seq{0, 1}}};
    GraftSpec g{FinTree::build(e), {seq_tree_id(Seq{0, 0}, 2), seq_tree_id(Seq{0, 1}, 2)}};
    ConsistentFamily fam = consistent_family(host, {g});
    REQUIRE(fam.valid());
    Json j = family_to_json(fam);

    FinTree host2 = tree_from_json(j["host"]);
    std::vector<GraftSpec> grafts;
    for (const auto& gj : j["grafts"]) {
        NodeSet maxel;
        for (const auto& m : gj["maxel"]) maxel.insert(m.get<NodeId>());
        grafts.push_back(GraftSpec{tree_from_json(gj["implant"]), maxel});
    }
    ConsistentFamily replay = consistent_family(host2, grafts);
    REQUIRE(replay.valid());
    HybridClosure a = hybrid_closure_oracle(fam);
    HybridClosure b = hybrid_closure_oracle(replay);
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i)
        for (std::size_t k = 0; k < a.nodes.size(); ++k) CHECK(a.rel[i][k] == b.rel[i][k]);
}

TEST_CASE("cli: export and bad config") {
    fs::path dir = fs::temp_directory_path() / "foliage-cli-export";
    fs::remove_all(dir);
    spit(dir / "cfg.json", kOneConfig);
    CHECK(run_cli("export --config " + (dir / "cfg.json").string() + " --format json --out " +
                  (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out" / "tree.json"));
    spit(dir / "bad.json", "{\"trunc\":{\"depth\":0}}");
    CHECK(run_cli("run --config " + (dir / "bad.json").string()) == 3);
    CHECK(run_cli("run --config " + (dir / "missing.json").string()) == 3);
}
