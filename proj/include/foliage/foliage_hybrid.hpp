#pragma once

#include <optional>
#include <vector>

#include "foliage/foliage_tree.hpp"
#include "foliage/graft.hpp"

namespace foliage {

/// A foliage graft: leaves attached to a graft skeleton.
template <class U>
struct FoliageGraft {
    GraftSpec skeleton;
    std::map<NodeId, typename U::Set> leaf;
};

enum class FoliageGraftClause {
    graft_nonincreasing,  // (a)
    skeleton_graft,       // (b)
    root_leaf_included,   // (c)
    maxel_leaf_agrees,    // (d)
};

inline const char* to_string(FoliageGraftClause c) {
    switch (c) {
        case FoliageGraftClause::graft_nonincreasing: return "a:nonincreasing";
        case FoliageGraftClause::skeleton_graft: return "b:skeleton-graft";
        case FoliageGraftClause::root_leaf_included: return "c:root-leaf-included";
        case FoliageGraftClause::maxel_leaf_agrees: return "d:maxel-leaf-agrees";
    }
    return "?";
}

template <class U>
struct FoliageGraftCheck {
    GraftAnatomy anatomy;
    typename U::Set cut;
    std::vector<FoliageGraftClause> violations;
    bool is_foliage_graft() const { return violations.empty() && anatomy.valid(); }
};

/// Validates Definition clauses (a)-(d) for a foliage graft and computes the
/// cut.  The host must be nonincreasing.
template <class U>
FoliageGraftCheck<U> foliage_graft_check(const FoliageTree<U>& f, const U& u,
                                         const FoliageGraft<U>& g) {
    if (foliage_flags(f, u).nonincreasing == Tri::no)
        throw std::invalid_argument("foliage_graft_check: host is not nonincreasing");

    FoliageGraftCheck<U> out;
    out.cut = u.empty_set();
    out.anatomy = graft_anatomy(f.skeleton, g.skeleton);
    if (!out.anatomy.valid()) {
        out.violations.push_back(FoliageGraftClause::skeleton_graft);
        return out;
    }

    FoliageTree<U> gt{g.skeleton.tree, g.leaf};
    if (foliage_flags(gt, u).nonincreasing == Tri::no)
        out.violations.push_back(FoliageGraftClause::graft_nonincreasing);

    NodeId r = out.anatomy.root;
    if (u.subset(gt.leaf_of(r), f.leaf_of(r)) == Tri::no)
        out.violations.push_back(FoliageGraftClause::root_leaf_included);
    for (NodeId m : out.anatomy.maxel) {
        if (u.equal(gt.leaf_of(m), f.leaf_of(m)) == Tri::no) {
            out.violations.push_back(FoliageGraftClause::maxel_leaf_agrees);
            break;
        }
    }
    if (out.violations.empty()) out.cut = u.diff(f.leaf_of(r), gt.leaf_of(r));
    return out;
}

template <class U>
struct FoliageFamily {
    ConsistentFamily skeletons;
    std::vector<FoliageGraft<U>> grafts;
    typename U::Set loss;
    bool valid = false;
    std::string error;
};

/// Validates a family of foliage grafts (pairwise distinct skeletons plus a
/// consistent skeleton family) and accumulates the loss.
template <class U>
FoliageFamily<U> foliage_family(const FoliageTree<U>& f, const U& u,
                                std::vector<FoliageGraft<U>> grafts) {
    FoliageFamily<U> fam;
    fam.loss = u.empty_set();
    fam.grafts = std::move(grafts);

    for (std::size_t i = 0; i < fam.grafts.size(); ++i) {
        auto check = foliage_graft_check(f, u, fam.grafts[i]);
        if (!check.is_foliage_graft()) {
            fam.error = "graft " + std::to_string(i) + " fails " +
                        (check.violations.empty() ? "skeleton clauses"
                                                  : to_string(check.violations.front()));
            return fam;
        }
        fam.loss = u.unite(fam.loss, check.cut);
    }

    // (b) pairwise distinct skeletons: same node set and parent map means same tree
    for (std::size_t i = 0; i < fam.grafts.size(); ++i)
        for (std::size_t j = i + 1; j < fam.grafts.size(); ++j) {
            const FinTree& a = fam.grafts[i].skeleton.tree;
            const FinTree& b = fam.grafts[j].skeleton.tree;
            bool same = a.node_ids() == b.node_ids();
            if (same)
                for (NodeId n : a.node_ids())
                    if (a.parent_of(n) != b.parent_of(n)) same = false;
            if (same) {
                fam.error = "grafts " + std::to_string(i) + "," + std::to_string(j) +
                            " have identical skeletons";
                return fam;
            }
        }

    std::vector<GraftSpec> specs;
    for (const auto& g : fam.grafts) specs.push_back(g.skeleton);
    fam.skeletons = consistent_family(f.skeleton, std::move(specs));
    if (!fam.skeletons.valid()) {
        fam.error = "skeleton family inconsistent";
        return fam;
    }
    fam.valid = true;
    return fam;
}

template <class U>
struct FoliageHybrid {
    HybridTree hybrid;
    FoliageTree<U> tree;
};

/// The foliage hybrid: hybrid skeleton, leaves diminished by the loss.
/// Implant nodes keep their graft leaf, support nodes their host leaf.
template <class U>
FoliageHybrid<U> foliage_hybrid_build(const FoliageTree<U>& f, const U& u,
                                      const FoliageFamily<U>& fam) {
    if (!fam.valid) throw std::invalid_argument("foliage_hybrid_build: " + fam.error);
    FoliageHybrid<U> out;
    out.hybrid = hybrid_build(fam.skeletons);
    out.tree.skeleton = out.hybrid.tree;
    for (std::size_t i = 0; i < out.hybrid.nodes.size(); ++i) {
        const HybridNode& hn = out.hybrid.nodes[i];
        typename U::Set base = hn.kind == HybridNode::Kind::supp
                                   ? f.leaf_of(hn.node)
                                   : fam.grafts[hn.graft].leaf.at(hn.node);
        out.tree.leaf[static_cast<NodeId>(i)] = u.diff(base, fam.loss);
    }
    return out;
}

}  // namespace foliage
