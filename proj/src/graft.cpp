#include "foliage/graft.hpp"

#include <algorithm>

namespace foliage {

GraftAnatomy graft_anatomy(const FinTree& host, const GraftSpec& g) {
    GraftAnatomy a;
    const FinTree& t = g.tree;

    if (t.size() <= 1) a.violations.push_back(GraftClause::more_than_one_node);
    if (!t.has_least_node()) {
        a.violations.push_back(GraftClause::has_least_node);
        return a;
    }
    a.root = t.least_node();
    a.maxel = g.maxel;

    NodeSet structural_max = t.maxel();
    for (NodeId m : g.maxel) {
        if (!t.contains(m) || !structural_max.count(m)) {
            a.violations.push_back(GraftClause::maxel_maximal);
            break;
        }
    }

    // (c) root and maxels live in the host
    bool ends_ok = host.contains(a.root);
    for (NodeId m : g.maxel) ends_ok = ends_ok && host.contains(m);
    if (!ends_ok) {
        a.violations.push_back(GraftClause::ends_in_host);
        return a;
    }

    // implant = nodes minus root minus declared maxel
    for (NodeId n : t.node_ids())
        if (n != a.root && !g.maxel.count(n)) a.implant.insert(n);

    // (d) maxels strictly below the root in the host
    for (NodeId m : g.maxel) {
        if (host.relate(a.root, m) != OrderRel::less) {
            a.violations.push_back(GraftClause::maxel_below_root);
            break;
        }
    }

    // (e) maxel is an antichain in the host
    if (!host.is_antichain(g.maxel)) a.violations.push_back(GraftClause::maxel_antichain);

    // (f) implant disjoint from the host
    for (NodeId i : a.implant) {
        if (host.contains(i)) {
            a.violations.push_back(GraftClause::implant_fresh);
            break;
        }
    }

    if (a.valid()) {
        NodeSet below_max = host.footline(g.maxel, Region::down);
        for (NodeId d : host.region(a.root, Region::down))
            if (!below_max.count(d)) a.explant.insert(d);
    }
    return a;
}

ConsistentFamily consistent_family(const FinTree& host, std::vector<GraftSpec> grafts) {
    ConsistentFamily fam;
    fam.host = &host;
    fam.grafts = std::move(grafts);
    for (std::size_t i = 0; i < fam.grafts.size(); ++i) {
        fam.anatomy.push_back(graft_anatomy(host, fam.grafts[i]));
        if (!fam.anatomy.back().valid() && !fam.violation)
            fam.violation = {{static_cast<int>(i), -1}, FamilyClause::grafts_valid};
    }
    if (fam.violation) return fam;

    for (std::size_t i = 0; i < fam.grafts.size() && !fam.violation; ++i) {
        for (std::size_t j = i + 1; j < fam.grafts.size() && !fam.violation; ++j) {
            const GraftAnatomy& d = fam.anatomy[i];
            const GraftAnatomy& e = fam.anatomy[j];
            // (b) implants pairwise disjoint
            for (NodeId n : d.implant) {
                if (e.implant.count(n)) {
                    fam.violation = {{static_cast<int>(i), static_cast<int>(j)},
                                     FamilyClause::implants_disjoint};
                    break;
                }
            }
            if (fam.violation) break;
            // (c) root condition
            bool ok = host.relate(d.root, e.root) == OrderRel::incomparable ||
                      host.footline(e.maxel, Region::down).count(d.root) ||
                      host.footline(d.maxel, Region::down).count(e.root);
            if (!ok)
                fam.violation = {{static_cast<int>(i), static_cast<int>(j)},
                                 FamilyClause::roots_compatible};
        }
    }
    if (fam.violation) return fam;

    NodeSet cut_out;
    for (const auto& a : fam.anatomy) cut_out.insert(a.explant.begin(), a.explant.end());
    for (NodeId n : host.node_ids())
        if (!cut_out.count(n)) fam.support.insert(n);
    return fam;
}

namespace {

void require_valid(const ConsistentFamily& fam) {
    if (!fam.valid() || fam.host == nullptr)
        throw std::invalid_argument("hybrid: family is not consistent");
}

void require_node(const ConsistentFamily& fam, const HybridNode& h) {
    if (h.kind == HybridNode::Kind::supp) {
        if (!fam.support.count(h.node))
            throw std::invalid_argument("hybrid: " + h.str() + " is not a support node");
        return;
    }
    if (h.graft < 0 || h.graft >= static_cast<int>(fam.grafts.size()) ||
        !fam.anatomy[static_cast<std::size_t>(h.graft)].implant.count(h.node))
        throw std::invalid_argument("hybrid: " + h.str() + " is not an implant node");
}

bool hybrid_less(const ConsistentFamily& fam, const HybridNode& x, const HybridNode& y) {
    const FinTree& host = *fam.host;
    using Kind = HybridNode::Kind;

    if (x.kind == Kind::supp && y.kind == Kind::supp)  // (b1)
        return host.relate(x.node, y.node) == OrderRel::less;

    if (x.kind == Kind::graft && y.kind == Kind::graft && x.graft == y.graft)  // (b2)
        return fam.grafts[x.graft].tree.relate(x.node, y.node) == OrderRel::less;

    if (x.kind == Kind::supp && y.kind == Kind::graft)  // (b3)
        return host.leq(x.node, fam.anatomy[y.graft].root);

    if (x.kind == Kind::graft && y.kind == Kind::supp) {  // (b4)
        const GraftAnatomy& g = fam.anatomy[x.graft];
        if (!host.footline(g.maxel, Region::down).count(y.node)) return false;
        NodeId r = host.root_in_antichain(y.node, g.maxel);
        return fam.grafts[x.graft].tree.relate(x.node, r) == OrderRel::less;
    }

    // (b5): distinct grafts
    const GraftAnatomy& d = fam.anatomy[x.graft];
    const GraftAnatomy& e = fam.anatomy[y.graft];
    if (!host.footline(d.maxel, Region::down).count(e.root)) return false;
    NodeId r = host.root_in_antichain(e.root, d.maxel);
    return fam.grafts[x.graft].tree.relate(x.node, r) == OrderRel::less;
}

std::vector<HybridNode> hybrid_node_list(const ConsistentFamily& fam) {
    std::vector<HybridNode> nodes;
    for (NodeId s : fam.support) nodes.push_back(HybridNode::supp(s));
    for (std::size_t g = 0; g < fam.grafts.size(); ++g)
        for (NodeId i : fam.anatomy[g].implant)
            nodes.push_back(HybridNode::impl(static_cast<int>(g), i));
    return nodes;
}

}  // namespace

OrderRel hybrid_relate(const ConsistentFamily& fam, const HybridNode& x, const HybridNode& y) {
    require_valid(fam);
    require_node(fam, x);
    require_node(fam, y);
    if (x == y) return OrderRel::equal;
    if (hybrid_less(fam, x, y)) return OrderRel::less;
    if (hybrid_less(fam, y, x)) return OrderRel::greater;
    return OrderRel::incomparable;
}

HybridTree hybrid_build(const ConsistentFamily& fam) {
    require_valid(fam);
    HybridTree h;
    h.nodes = hybrid_node_list(fam);
    const std::size_t n = h.nodes.size();

    // parent = the maximal strict ancestor under the five-case order
    std::vector<FinTree::Entry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        std::optional<NodeId> parent;
        std::size_t best_rank = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !hybrid_less(fam, h.nodes[j], h.nodes[i])) continue;
            std::size_t rank = 0;  // nr. of strict ancestors of j
            for (std::size_t k = 0; k < n; ++k)
                if (k != j && hybrid_less(fam, h.nodes[k], h.nodes[j])) ++rank;
            if (!parent || rank > best_rank) {
                parent = static_cast<NodeId>(j);
                best_rank = rank;
            }
        }
        std::optional<Seq> label;
        if (h.nodes[i].kind == HybridNode::Kind::supp)
            label = fam.host->label_of(h.nodes[i].node);
        else
            label = fam.grafts[h.nodes[i].graft].tree.label_of(h.nodes[i].node);
        entries.push_back({static_cast<NodeId>(i), parent, label});
    }
    h.tree = FinTree::build(entries);

    // the parent-map reconstruction is faithful only if the five-case order
    // is the ancestor order it induces; cross-check
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            OrderRel direct = hybrid_relate(fam, h.nodes[i], h.nodes[j]);
            OrderRel via = h.tree.relate(static_cast<NodeId>(i), static_cast<NodeId>(j));
            if (direct != via)
                throw std::logic_error("hybrid_build: five-case order is not tree-like");
        }
    return h;
}

HybridClosure hybrid_closure_oracle(const ConsistentFamily& fam) {
    require_valid(fam);
    HybridClosure out;
    out.nodes = hybrid_node_list(fam);
    const std::size_t n = out.nodes.size();

    // base relation: (<_T union all <_G) restricted to H x H.
    // Graft nodes of G are its implants plus root and maxels, which live in
    // H as supp nodes.
    auto in_graft = [&](const HybridNode& h, std::size_t g, NodeId& as) {
        if (h.kind == HybridNode::Kind::graft) {
            if (h.graft != static_cast<int>(g)) return false;
            as = h.node;
            return true;
        }
        const GraftAnatomy& a = fam.anatomy[g];
        if (h.node == a.root || a.maxel.count(h.node)) {
            as = h.node;
            return true;
        }
        return false;
    };

    std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (out.nodes[i].kind == HybridNode::Kind::supp &&
                out.nodes[j].kind == HybridNode::Kind::supp &&
                fam.host->relate(out.nodes[i].node, out.nodes[j].node) == OrderRel::less)
                rel[i][j] = true;
            for (std::size_t g = 0; g < fam.grafts.size(); ++g) {
                NodeId gi, gj;
                if (in_graft(out.nodes[i], g, gi) && in_graft(out.nodes[j], g, gj) &&
                    fam.grafts[g].tree.relate(gi, gj) == OrderRel::less)
                    rel[i][j] = true;
            }
        }

    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!rel[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (rel[k][j]) rel[i][j] = true;
        }

    out.rel.assign(n, std::vector<OrderRel>(n, OrderRel::incomparable));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                out.rel[i][j] = OrderRel::equal;
            else if (rel[i][j] && rel[j][i])
                throw std::logic_error("closure oracle: not antisymmetric");
            else if (rel[i][j])
                out.rel[i][j] = OrderRel::less;
            else if (rel[j][i])
                out.rel[i][j] = OrderRel::greater;
        }
    return out;
}

OrderRel hybrid_relate_closure_oracle(const ConsistentFamily& fam, const HybridNode& x,
                                      const HybridNode& y) {
    HybridClosure c = hybrid_closure_oracle(fam);
    return c.rel[c.index_of(x)][c.index_of(y)];
}

BranchTrace branch_trace(const ConsistentFamily& fam, const HybridTree& h, const NodeSet& branch) {
    require_valid(fam);
    {
        auto all = h.tree.branches();
        if (std::find(all.begin(), all.end(), branch) == all.end())
            throw std::invalid_argument("branch_trace: not a branch of the hybrid");
    }
    BranchTrace out;
    for (NodeId hb : branch) {
        const HybridNode& hn = h.nodes[static_cast<std::size_t>(hb)];
        if (hn.kind == HybridNode::Kind::supp) {
            out.support_part.insert(hb);
            for (std::size_t g = 0; g < fam.grafts.size(); ++g) {
                const GraftAnatomy& a = fam.anatomy[g];
                if (hn.node == a.root || a.maxel.count(hn.node))
                    out.per_graft[static_cast<int>(g)].insert(hb);
            }
        } else {
            out.per_graft[hn.graft].insert(hb);
        }
    }

    for (auto& [g, part] : out.per_graft) {
        NodeSet graft_nodes;
        for (NodeId hb : part) graft_nodes.insert(h.nodes[static_cast<std::size_t>(hb)].node);
        auto gb = fam.grafts[g].tree.branches();
        if (std::find(gb.begin(), gb.end(), graft_nodes) == gb.end())
            out.per_graft_branches = false;
    }

    for (NodeId hb : branch) {
        bool covered = false;
        for (NodeId c : out.support_part)
            if (h.tree.leq(hb, c)) {
                covered = true;
                break;
            }
        if (!covered) out.support_cofinal = false;
    }
    return out;
}

}  // namespace foliage
