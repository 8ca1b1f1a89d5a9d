#include "foliage/json_io.hpp"

#include <algorithm>
#include <sstream>

namespace foliage {

Json seq_to_json(const Seq& s) {
    Json j = Json::array();
    for (auto v : s.items()) j.push_back(v);
    return j;
}

Seq seq_from_json(const Json& j) {
    if (!j.is_array()) throw config_error("sequence must be an array of naturals");
    std::vector<std::uint32_t> vals;
    for (const auto& v : j) {
        if (!v.is_number_unsigned()) throw config_error("sequence entries must be naturals");
        vals.push_back(v.get<std::uint32_t>());
    }
    return Seq(std::move(vals));
}

Json compact_to_json(const CompactCode& code) {
    Json table = Json::object();
    for (const auto& [key, vals] : code.table()) table[key.key()] = vals;
    return Json{{"table", table}, {"depth", code.table_depth()}};
}

CompactCode compact_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("depth") || !j.contains("table"))
        throw config_error("compact code needs 'table' and 'depth'");
    if (!j["depth"].is_number_unsigned()) throw config_error("compact depth must be a natural");
    std::map<Seq, std::vector<std::uint32_t>> table;
    for (const auto& [key, vals] : j["table"].items()) {
        std::vector<std::uint32_t> vs;
        for (const auto& v : vals) {
            if (!v.is_number_unsigned()) throw config_error("allowed values must be naturals");
            vs.push_back(v.get<std::uint32_t>());
        }
        table[Seq::parse_key(key)] = std::move(vs);
    }
    try {
        return CompactCode(std::move(table), j["depth"].get<std::uint32_t>());
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("compact code: ") + e.what());
    }
}

RunConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("malformed JSON: ") + e.what());
    }
    RunConfig cfg;
    if (j.contains("compacts")) {
        if (!j["compacts"].is_array()) throw config_error("'compacts' must be an array");
        for (const auto& c : j["compacts"]) cfg.compacts.push_back(compact_from_json(c));
    }
    if (j.contains("stages")) {
        if (!j["stages"].is_number_unsigned()) throw config_error("'stages' must be a natural");
        cfg.stages = j["stages"].get<std::size_t>();
    } else {
        cfg.stages = cfg.compacts.size();
    }
    if (cfg.stages > cfg.compacts.size())
        throw config_error("'stages' exceeds the number of compact codes");
    if (j.contains("trunc")) {
        const Json& t = j["trunc"];
        if (t.contains("depth")) cfg.trunc.depth = t["depth"].get<std::size_t>();
        if (t.contains("width")) cfg.trunc.width = t["width"].get<std::size_t>();
        if (t.contains("threshold")) cfg.trunc.threshold = t["threshold"].get<std::size_t>();
        if (t.contains("root_slack")) cfg.trunc.root_slack = t["root_slack"].get<std::size_t>();
    }
    if (cfg.trunc.depth == 0 || cfg.trunc.width == 0 || cfg.trunc.threshold == 0)
        throw config_error("truncation parameters must be positive");
    if (cfg.trunc.threshold > cfg.trunc.width)
        throw config_error("threshold must not exceed width");
    if (j.contains("suites"))
        for (const auto& s : j["suites"]) cfg.suites.push_back(s.get<std::string>());
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("corrupt_family_fixture"))
        cfg.corrupt_family_fixture = j["corrupt_family_fixture"].get<bool>();
    return cfg;
}

Json set_expr_to_json(const SetExpr& e) {
    switch (e.op()) {
        case SetExpr::Op::empty: return Json{{"op", "empty"}};
        case SetExpr::Op::full: return Json{{"op", "full"}};
        case SetExpr::Op::cylinder: return Json{{"op", "cyl"}, {"seq", seq_to_json(e.cylinder_seq())}};
        case SetExpr::Op::compact: {
            Json j = compact_to_json(e.compact_code());
            j["op"] = "compact";
            return Json{{"op", "compact"}, {"table", j["table"]}, {"depth", j["depth"]}};
        }
        case SetExpr::Op::family: {
            const CylFamily& f = e.family_oracle();
            Json sample = Json::array();
            for (std::size_t i = 0; i < 4; ++i) sample.push_back(seq_to_json(f.member_at(i)));
            return Json{{"op", "cylfam"},
                        {"base", seq_to_json(f.base())},
                        {"desc", f.describe()},
                        {"sample", sample}};
        }
        case SetExpr::Op::union_:
            return Json{{"op", "union"},
                        {"args", Json::array({set_expr_to_json(e.arg(0)), set_expr_to_json(e.arg(1))})}};
        case SetExpr::Op::intersect:
            return Json{{"op", "inter"},
                        {"args", Json::array({set_expr_to_json(e.arg(0)), set_expr_to_json(e.arg(1))})}};
        case SetExpr::Op::diff:
            return Json{{"op", "diff"},
                        {"args", Json::array({set_expr_to_json(e.arg(0)), set_expr_to_json(e.arg(1))})}};
    }
    throw std::logic_error("set_expr_to_json: unknown op");
}

SetExpr set_expr_from_json(const Json& j) {
    const std::string op = j.at("op").get<std::string>();
    if (op == "empty") return SetExpr::empty();
    if (op == "full") return SetExpr::full();
    if (op == "cyl") return SetExpr::cylinder(seq_from_json(j.at("seq")));
    if (op == "compact") return SetExpr::compact(compact_from_json(j));
    if (op == "union" || op == "inter" || op == "diff") {
        const Json& args = j.at("args");
        if (!args.is_array() || args.size() != 2)
            throw config_error("set expression '" + op + "' needs two arguments");
        SetExpr a = set_expr_from_json(args[0]);
        SetExpr b = set_expr_from_json(args[1]);
        if (op == "union") return SetExpr::unite(a, b);
        if (op == "inter") return SetExpr::intersect(a, b);
        return SetExpr::diff(a, b);
    }
    throw config_error("unknown set expression op '" + op + "'");
}

Json tree_to_json(const FinTree& t) {
    Json nodes = Json::array();
    for (NodeId id : t.node_ids()) {
        Json n{{"id", id}};
        n["label"] = t.label_of(id) ? seq_to_json(*t.label_of(id)) : Json(nullptr);
        n["parent"] = t.parent_of(id) ? Json(*t.parent_of(id)) : Json(nullptr);
        nodes.push_back(n);
    }
    return Json{{"nodes", nodes}};
}

FinTree tree_from_json(const Json& j) {
    std::vector<FinTree::Entry> entries;
    for (const auto& n : j.at("nodes")) {
        FinTree::Entry e;
        e.id = n.at("id").get<NodeId>();
        if (n.contains("label") && !n["label"].is_null()) e.label = seq_from_json(n["label"]);
        if (n.contains("parent") && !n["parent"].is_null()) e.parent = n["parent"].get<NodeId>();
        entries.push_back(std::move(e));
    }
    return FinTree::build(entries);
}

Json foliage_to_json(const FoliageTree<FiniteUniverse>& f, const FiniteUniverse& u) {
    Json j = tree_to_json(f.skeleton);
    for (auto& n : j["nodes"]) {
        Json pts = Json::array();
        for (auto p : u.points_of(f.leaf_of(n["id"].get<NodeId>()))) pts.push_back(p);
        n["leaf"] = pts;
    }
    return j;
}

Json foliage_to_json(const FoliageTree<BaireUniverse>& f) {
    Json j = tree_to_json(f.skeleton);
    for (auto& n : j["nodes"]) n["leaf"] = set_expr_to_json(f.leaf_of(n["id"].get<NodeId>()));
    return j;
}

Json family_to_json(const ConsistentFamily& fam) {
    Json grafts = Json::array();
    for (std::size_t i = 0; i < fam.grafts.size(); ++i) {
        Json g{{"root", fam.anatomy[i].root}};
        Json maxel = Json::array();
        for (NodeId m : fam.anatomy[i].maxel) maxel.push_back(m);
        g["maxel"] = maxel;
        g["implant"] = tree_to_json(fam.grafts[i].tree);
        grafts.push_back(g);
    }
    return Json{{"host", tree_to_json(*fam.host)}, {"grafts", grafts}};
}

Json pi_tree_to_json(const PiTree& h) {
    Json j = tree_to_json(h.tree.skeleton);
    for (auto& n : j["nodes"]) {
        NodeId id = n["id"].get<NodeId>();
        const PiNode& pn = h.nodes[static_cast<std::size_t>(id)];
        n["kind"] = pn.kind == PiNode::Kind::supp ? "supp" : "imp";
        if (pn.kind == PiNode::Kind::imp) {
            n["stage"] = pn.stage;
            n["graft_root"] = seq_to_json(pn.root);
            n["selector"] = seq_to_json(pn.selector);
            n["level"] = pn.level;
        }
        n["leaf"] = set_expr_to_json(h.tree.leaf_of(id));
    }
    j["loss"] = set_expr_to_json(h.loss);
    return j;
}

namespace {
std::string dot_label(const std::string& s) {
    std::string out;
    for (char c : s)
        if (c == '"')
            out += "\\\"";
        else
            out += c;
    return out;
}
}  // namespace

std::string dot_export(const FinTree& t) {
    std::ostringstream os;
    os << "digraph tree {\n  rankdir=TB;\n  node [shape=ellipse];\n";
    for (NodeId id : t.node_ids()) {
        std::string label = t.label_of(id) ? t.label_of(id)->str() : std::to_string(id);
        os << "  n" << id << " [label=\"" << dot_label(label) << "\"];\n";
    }
    for (NodeId id : t.node_ids())
        if (auto p = t.parent_of(id)) os << "  n" << *p << " -> n" << id << ";\n";
    os << "}\n";
    return os.str();
}

std::string dot_export(const PiTree& h) {
    std::ostringstream os;
    os << "digraph pitree {\n  rankdir=TB;\n";
    for (NodeId id : h.tree.skeleton.node_ids()) {
        const PiNode& pn = h.nodes[static_cast<std::size_t>(id)];
        if (pn.kind == PiNode::Kind::supp)
            os << "  n" << id << " [shape=ellipse,label=\"" << dot_label(pn.seq.str()) << "\"];\n";
        else
            os << "  n" << id << " [shape=box,style=dashed,label=\"" << dot_label(pn.str())
               << "\"];\n";
    }
    for (NodeId id : h.tree.skeleton.node_ids())
        if (auto p = h.tree.skeleton.parent_of(id)) os << "  n" << *p << " -> n" << id << ";\n";
    os << "}\n";
    return os.str();
}

Json report_json(const std::vector<CheckRecord>& records, const Json& parameters) {
    std::vector<CheckRecord> sorted = records;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
    Json checks = Json::array();
    for (const CheckRecord& r : sorted) {
        Json c{{"id", r.id}, {"status", to_string(r.status)}, {"detail", r.detail}};
        if (!r.witness_json.empty()) {
            // witnesses reuse the input schemas so a failure replays directly
            Json w = Json::parse(r.witness_json, nullptr, false);
            c["witness"] = w.is_discarded() ? Json(r.witness_json) : w;
        }
        checks.push_back(c);
    }
    return Json{{"parameters", parameters}, {"checks", checks}};
}

}  // namespace foliage
