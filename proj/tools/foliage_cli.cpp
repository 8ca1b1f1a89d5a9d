#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "foliage/json_io.hpp"
#include "foliage/law_suites.hpp"

namespace fs = std::filesystem;
using namespace foliage;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUndecidable = 2;
constexpr int kExitIo = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

fs::path resolve_out_dir(const RunConfig& cfg, const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("FOLIAGE_OUT")) return env;
    return "out";
}

Json config_echo(const RunConfig& cfg, std::uint64_t seed) {
    Json compacts = Json::array();
    for (const CompactCode& c : cfg.compacts) compacts.push_back(compact_to_json(c));
    return Json{{"compacts", compacts},
                {"stages", cfg.stages},
                {"trunc",
                 Json{{"depth", cfg.trunc.depth},
                      {"width", cfg.trunc.width},
                      {"threshold", cfg.trunc.threshold},
                      {"root_slack", cfg.trunc.root_slack}}},
                {"seed", seed}};
}

int exit_code_for(const std::vector<CheckRecord>& records) {
    bool undecidable = false;
    for (const CheckRecord& r : records) {
        if (r.status == Status::fail) return kExitFail;
        if (r.status == Status::undecidable) undecidable = true;
    }
    return undecidable ? kExitUndecidable : kExitPass;
}

/// Runs the recursion collecting the per-stage invariant records instead of
/// aborting on the first violation.
PipelineState run_collecting(const RunConfig& cfg, std::vector<CheckRecord>& records) {
    PipelineState state(cfg.trunc);
    for (std::size_t i = 0; i < cfg.stages; ++i) {
        SetExpr u = SetExpr::diff(SetExpr::full(), SetExpr::compact(cfg.compacts[i]));
        state = pipeline_advance(state, u);
        for (CheckRecord r : verify_pipeline_invariants(state)) {
            r.id = "n=" + std::to_string(i) + "/" + r.id;
            records.push_back(std::move(r));
        }
    }
    return state;
}

void inject_corrupt_family(std::vector<CheckRecord>& records) {
    // test fixture: a family with duplicate roots must be rejected, and the
    // rejection carries a replayable witness
    FinTree host = seq_tree(3, 2);
    auto mk = [&](NodeId imp) {
        std::vector<FinTree::Entry> e{{1, std::nullopt, std::nullopt},
                                      {imp, 1, std::nullopt},
                                      {3, imp, std::nullopt}};
        return GraftSpec{FinTree::build(e), {3}};
    };
    std::vector<GraftSpec> specs{mk(100), mk(200)};
    ConsistentFamily fam = consistent_family(host, specs);
    CheckRecord r;
    r.id = "fixture/corrupt-family";
    r.status = Status::fail;  // the fixture is meant to fail the run
    if (fam.valid()) {
        r.detail = "corrupted family was accepted";
    } else {
        r.detail = "fixture family rejected as expected (duplicate roots)";
        Json grafts = Json::array();
        for (const auto& g : specs) {
            Json gj{{"root", 1}};
            gj["maxel"] = Json::array({3});
            gj["implant"] = tree_to_json(g.tree);
            grafts.push_back(gj);
        }
        r.witness_json = Json{{"host", tree_to_json(host)}, {"grafts", grafts}}.dump();
    }
    records.push_back(std::move(r));
}

int cmd_run(const RunConfig& cfg, const fs::path& out_dir, std::uint64_t seed) {
    std::vector<CheckRecord> records;
    PipelineState state = run_collecting(cfg, records);

    // construction laws of the first few materialized blueprints
    std::size_t shown = 0;
    for (const GraftBlueprint& bp : state.family()) {
        if (++shown > 8) break;
        for (CheckRecord r : verify_blueprint(bp, cfg.trunc)) {
            r.id = "blueprint[v=" + bp.root().key() + ",n=" + std::to_string(bp.stage()) + "]/" +
                   r.id;
            records.push_back(std::move(r));
        }
    }

    std::size_t mat_depth = cfg.trunc.depth + 1;
    PiTree h = materialize_pi_tree(state, mat_depth, cfg.trunc.width);
    for (CheckRecord r : verify_materialized(state, h, mat_depth, cfg.trunc.width)) {
        r.id = "materialized/" + r.id;
        records.push_back(std::move(r));
    }

    std::vector<ShootSample> samples = make_shoot_samples(state, 50, seed);
    std::vector<ShootCertificate> certs = shoots_into_check(state, h, samples);
    std::size_t support = 0, blueprint = 0;
    Status shoots_status = Status::pass;
    std::string shoots_detail;
    for (const ShootCertificate& c : certs) {
        if (!c.ok) {
            // truncation cut-offs are inconclusive, anything else refutes
            if (c.truncated && shoots_status != Status::fail)
                shoots_status = Status::undecidable;
            else
                shoots_status = Status::fail;
            shoots_detail = "sample y=" + c.target.str() + ": " + c.detail;
        }
        (c.case_name == "support" ? support : blueprint)++;
    }
    records.push_back({"shoots-into", shoots_status,
                       std::to_string(support) + " support / " + std::to_string(blueprint) +
                           " blueprint certificates" +
                           (shoots_detail.empty() ? "" : "; " + shoots_detail),
                       ""});
    std::vector<ShootCertificate> gcerts = grows_into_subspace_check(state, h, samples);
    bool grows_ok = true;
    for (const ShootCertificate& c : gcerts) grows_ok = grows_ok && c.ok;
    records.push_back({"grows-into", grows_ok ? Status::pass : Status::fail,
                       "cylinder-base composition over the same samples", ""});

    if (cfg.corrupt_family_fixture) inject_corrupt_family(records);

    write_file(out_dir / "tree.json", pi_tree_to_json(h).dump(2) + "\n");
    write_file(out_dir / "tree.dot", dot_export(h));
    Json params = config_echo(cfg, seed);
    params["materialize_depth"] = mat_depth;
    write_file(out_dir / "report.json", report_json(records, params).dump(2) + "\n");
    return exit_code_for(records);
}

int cmd_verify_laws(const RunConfig& cfg, const std::vector<std::string>& suites,
                    const fs::path& out_dir, std::uint64_t seed, ExecMode mode) {
    SuiteContext ctx;
    ctx.seed = seed;
    ctx.mode = mode;
    ctx.trunc = cfg.trunc;
    std::vector<CheckRecord> records;
    for (const std::string& id : suites) {
        SuiteResult res = run_suite(id, ctx);
        for (CheckRecord r : res.records) {
            r.id = res.suite == r.id ? r.id : res.suite + "/" + r.id;
            records.push_back(std::move(r));
        }
        std::cout << res.suite << ": " << (res.passed() ? "pass" : "FAIL") << " ("
                  << res.instances << " instances)\n";
    }
    Json params = config_echo(cfg, seed);
    params["suites"] = suites;
    write_file(out_dir / "report.json", report_json(records, params).dump(2) + "\n");
    return exit_code_for(records);
}

int cmd_export(const RunConfig& cfg, const std::string& format, const fs::path& out_dir) {
    std::vector<CheckRecord> ignored;
    PipelineState state = run_collecting(cfg, ignored);
    PiTree h = materialize_pi_tree(state, cfg.trunc.depth + 1, cfg.trunc.width);
    if (format == "dot")
        write_file(out_dir / "tree.dot", dot_export(h));
    else if (format == "json")
        write_file(out_dir / "tree.json", pi_tree_to_json(h).dump(2) + "\n");
    else
        throw config_error("unknown export format: " + format);
    return kExitPass;
}

}  // namespace

int run_main(int argc, char** argv) {
    CLI::App app{"tree-grafting engine for the Baire space"};
    app.require_subcommand(1);

    std::string config_path, out_dir_cli, suites_arg, format = "dot";
    std::uint64_t seed_cli = 0;
    bool serial = false;

    CLI::App* run = app.add_subcommand("run", "run the rebuilding pipeline and its checks");
    run->add_option("--config", config_path, "config JSON")->required();
    run->add_option("--out", out_dir_cli, "output directory");
    CLI::Option* run_seed = run->add_option("--seed", seed_cli, "sample seed");

    CLI::App* laws = app.add_subcommand("verify-laws", "run law suites");
    laws->add_option("--config", config_path, "config JSON")->required();
    laws->add_option("--suite", suites_arg, "comma-separated suite ids")->required();
    CLI::Option* laws_seed = laws->add_option("--seed", seed_cli, "suite seed");
    laws->add_option("--out", out_dir_cli, "output directory");
    laws->add_flag("--serial", serial, "serial reference execution");

    CLI::App* exp = app.add_subcommand("export", "materialize and export the tree");
    exp->add_option("--config", config_path, "config JSON")->required();
    exp->add_option("--format", format, "dot|json");
    exp->add_option("--out", out_dir_cli, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = parse_config(read_file(config_path));
        bool seed_given = (run_seed && run_seed->count() > 0) || (laws_seed && laws_seed->count() > 0);
        std::uint64_t seed = seed_given ? seed_cli : cfg.seed;
        fs::path out = resolve_out_dir(cfg, out_dir_cli);

        if (app.got_subcommand(run)) return cmd_run(cfg, out, seed);
        if (app.got_subcommand(laws)) {
            std::vector<std::string> suites;
            std::size_t pos = 0;
            while (pos <= suites_arg.size()) {
                std::size_t comma = suites_arg.find(',', pos);
                std::string id = suites_arg.substr(
                    pos, comma == std::string::npos ? std::string::npos : comma - pos);
                if (!id.empty()) suites.push_back(id);
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            return cmd_verify_laws(cfg, suites, out, seed,
                                   serial ? ExecMode::serial : ExecMode::parallel);
        }
        if (app.got_subcommand(exp)) return cmd_export(cfg, format, out);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitIo;
    } catch (const unknown_suite& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    } catch (const invariant_failure& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitIo;
}

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (...) {
        std::cerr << "error: unexpected failure\n";
        return kExitIo;
    }
}
