#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "foliage/foliage_hybrid.hpp"
#include "foliage/pipeline.hpp"

namespace foliage {

using Json = nlohmann::ordered_json;

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// CLI run configuration; the JSON schema is
/// {"compacts":[{"table":{"": [..], ..},"depth":d}, ..],
///  "stages":n, "trunc":{"depth":d,"width":w,"threshold":m}}
/// plus optional "suites", "seed", "out".
struct RunConfig {
    std::vector<CompactCode> compacts;
    std::size_t stages = 0;
    TruncParams trunc;
    std::vector<std::string> suites;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool corrupt_family_fixture = false;  // test hook: inject an inconsistent family
};

RunConfig parse_config(const std::string& text);

Json seq_to_json(const Seq& s);
Seq seq_from_json(const Json& j);

Json compact_to_json(const CompactCode& code);
CompactCode compact_from_json(const Json& j);

Json set_expr_to_json(const SetExpr& e);
/// Parses the closed subset of the schema (no family unions).
SetExpr set_expr_from_json(const Json& j);

Json tree_to_json(const FinTree& t);
FinTree tree_from_json(const Json& j);

/// Tier-1 foliage tree: leaves as sorted point lists.
Json foliage_to_json(const FoliageTree<FiniteUniverse>& f, const FiniteUniverse& u);
/// Tier-2 foliage tree: leaves as symbolic expressions.
Json foliage_to_json(const FoliageTree<BaireUniverse>& f);

/// Family serialization: host plus per-graft root, maxel ids and implant
/// subtree.
Json family_to_json(const ConsistentFamily& fam);

Json pi_tree_to_json(const PiTree& h);

std::string dot_export(const FinTree& t);
std::string dot_export(const PiTree& h);

Json report_json(const std::vector<CheckRecord>& records, const Json& parameters);

}  // namespace foliage
