#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foliage/fin_tree.hpp"

namespace foliage {

/// A graft for a host tree: a tree whose root and maxel nodes are shared
/// with the host and whose implant nodes are fresh.  The maxel set is
/// declared rather than derived, so a finite tree can stand for an infinite
/// graft: declared maxels must be maximal in the given tree, but a fresh
/// node that happens to be maximal simply represents a node with
/// unmaterialized descendants.
struct GraftSpec {
    FinTree tree;
    NodeSet maxel;
};

enum class GraftClause {
    more_than_one_node,   // (a)
    has_least_node,       // (b)
    ends_in_host,         // (c) root and maxels are host nodes
    maxel_below_root,     // (d)
    maxel_antichain,      // (e)
    implant_fresh,        // (f)
    maxel_maximal,        // declared maxels maximal in the graft tree
};

inline const char* to_string(GraftClause c) {
    switch (c) {
        case GraftClause::more_than_one_node: return "a:more-than-one-node";
        case GraftClause::has_least_node: return "b:least-node";
        case GraftClause::ends_in_host: return "c:ends-in-host";
        case GraftClause::maxel_below_root: return "d:maxel-below-root";
        case GraftClause::maxel_antichain: return "e:maxel-antichain";
        case GraftClause::implant_fresh: return "f:implant-fresh";
        case GraftClause::maxel_maximal: return "maxel-maximal";
    }
    return "?";
}

/// Result of validating one graft against a host.  Violations are data;
/// downstream builders refuse to run on anatomies with violations.
struct GraftAnatomy {
    NodeId root = -1;
    NodeSet maxel;
    NodeSet implant;
    NodeSet explant;
    std::vector<GraftClause> violations;

    bool valid() const { return violations.empty(); }
};

GraftAnatomy graft_anatomy(const FinTree& host, const GraftSpec& g);

enum class FamilyClause {
    grafts_valid,       // (a)
    implants_disjoint,  // (b)
    roots_compatible,   // (c)
};

struct ConsistentFamily {
    const FinTree* host = nullptr;
    std::vector<GraftSpec> grafts;
    std::vector<GraftAnatomy> anatomy;
    NodeSet support;
    // first violating pair and clause, if any
    std::optional<std::pair<std::pair<int, int>, FamilyClause>> violation;

    bool valid() const { return !violation.has_value(); }
};

ConsistentFamily consistent_family(const FinTree& host, std::vector<GraftSpec> grafts);

/// A node of a hybrid: either a surviving host node or an implant node of
/// one of the grafts.  Graft roots and maxels are Supp nodes.
struct HybridNode {
    enum class Kind { supp, graft } kind;
    int graft = -1;  // index into the family, for Kind::graft
    NodeId node = -1;

    static HybridNode supp(NodeId n) { return {Kind::supp, -1, n}; }
    static HybridNode impl(int g, NodeId n) { return {Kind::graft, g, n}; }

    bool operator==(const HybridNode&) const = default;
    bool operator<(const HybridNode& o) const {
        if (kind != o.kind) return kind == Kind::supp;
        if (graft != o.graft) return graft < o.graft;
        return node < o.node;
    }

    std::string str() const {
        if (kind == Kind::supp) return "supp:" + std::to_string(node);
        return "impl:" + std::to_string(graft) + ":" + std::to_string(node);
    }
};

/// The five-case order of Definition of the hybrid, evaluated literally.
OrderRel hybrid_relate(const ConsistentFamily& fam, const HybridNode& x, const HybridNode& y);

/// Explicit hybrid tree: node ids are indices into `nodes`.
struct HybridTree {
    FinTree tree;
    std::vector<HybridNode> nodes;

    NodeId id_of(const HybridNode& h) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i] == h) return static_cast<NodeId>(i);
        throw std::invalid_argument("HybridTree: unknown hybrid node " + h.str());
    }
};

/// Builds the hybrid as an explicit FinTree.  Throws on inconsistent
/// families.
HybridTree hybrid_build(const ConsistentFamily& fam);

/// Independent oracle: the transitive closure of the union of the host and
/// graft orders restricted to the hybrid node set.
struct HybridClosure {
    std::vector<HybridNode> nodes;
    std::vector<std::vector<OrderRel>> rel;  // rel[i][j] between nodes[i], nodes[j]

    std::size_t index_of(const HybridNode& h) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i] == h) return i;
        throw std::invalid_argument("HybridClosure: unknown node " + h.str());
    }
};

HybridClosure hybrid_closure_oracle(const ConsistentFamily& fam);

OrderRel hybrid_relate_closure_oracle(const ConsistentFamily& fam, const HybridNode& x,
                                      const HybridNode& y);

/// Decomposition of a hybrid branch per graft, plus its support part.
struct BranchTrace {
    std::map<int, NodeSet> per_graft;  // graft index -> hybrid node ids of B in that graft
    NodeSet support_part;              // hybrid node ids
    bool per_graft_branches = true;    // each per-graft part is a branch of its graft
    bool support_cofinal = true;       // support part is hybrid-cofinal in B
};

BranchTrace branch_trace(const ConsistentFamily& fam, const HybridTree& h, const NodeSet& branch);

}  // namespace foliage
