#include "foliage/pipeline.hpp"

#include <deque>

namespace foliage {

SetExpr PipelineState::opens_meet() const {
    SetExpr acc = SetExpr::full();
    for (const SetExpr& u : opens_) acc = SetExpr::intersect(acc, u);
    return acc;
}

bool PipelineState::in_m(int n, const Seq& y) const {
    if (n < 0) return y.empty();
    if (n > stage()) throw std::invalid_argument("in_m: stage not reached");
    // DP over the prefixes of y through the stages:
    //   Z_k membership needs M_{k-1}; the new part of M_k at p_i needs a
    //   Z_k root among the proper prefixes plus minimality in U_k.
    std::size_t len = y.length();
    std::vector<Seq> prefix;
    for (std::size_t i = 0; i <= len; ++i) prefix.push_back(y.restrict(i));
    std::vector<char> m_prev(len + 1, 0);
    m_prev[0] = 1;  // M_{-1} = { <> }
    for (int k = 0; k <= n; ++k) {
        const SetExpr& u = opens_[static_cast<std::size_t>(k)];
        std::vector<NodeClass> cls(len + 1);
        for (std::size_t i = 0; i <= len; ++i) cls[i] = u.classify(prefix[i]);
        std::vector<char> z(len + 1, 0);
        for (std::size_t i = 0; i <= len; ++i)
            z[i] = static_cast<char>(m_prev[i] && cls[i] == NodeClass::split);
        std::vector<char> m(len + 1, 0);
        bool z_seen = false;
        for (std::size_t i = 0; i <= len; ++i) {
            bool fresh = z_seen && cls[i] == NodeClass::inside &&
                         (i == 0 || cls[i - 1] != NodeClass::inside);
            m[i] = static_cast<char>((m_prev[i] && !z[i]) || fresh);
            z_seen = z_seen || z[i];
        }
        m_prev = std::move(m);
    }
    return m_prev[len];
}

bool PipelineState::in_z(int n, const Seq& y) const {
    if (n < 0 || n > stage()) return false;
    return in_m(n - 1, y) &&
           opens_[static_cast<std::size_t>(n)].classify(y) == NodeClass::split;
}

bool PipelineState::m_below(int n, const Seq& y) const {
    // members of M_n strictly below y are inside-minimal successors of split
    // nodes of some U_i; scan those within the window
    std::size_t cap = trunc_.root_window() + 1;
    for (int i = 0; i <= n; ++i) {
        const SetExpr& u = opens_[static_cast<std::size_t>(i)];
        // split nodes extending y (the split region is prefix-closed, so
        // walk from y if y itself splits)
        if (u.classify(y) != NodeClass::split) continue;
        std::vector<Seq> level{y};
        while (!level.empty() && level.front().length() < cap) {
            std::vector<Seq> next;
            for (const Seq& d : level) {
                std::vector<std::uint32_t> splits = u.split_successors(d);
                // probe past every split value any stage owns at d, so a
                // successor surviving all stages is always sampled
                std::uint32_t probe = static_cast<std::uint32_t>(trunc_.width) + 2;
                for (int j = 0; j <= n; ++j) {
                    auto s = opens_[static_cast<std::size_t>(j)].split_successors(d);
                    if (!s.empty())
                        probe = std::max(probe, s.back() + static_cast<std::uint32_t>(
                                                               trunc_.width) + 2);
                }
                for (std::uint32_t v = 0; v < probe; ++v) {
                    Seq z = d.extend(v);
                    if (u.classify(z) == NodeClass::inside && in_m(n, z)) return true;
                }
                for (std::uint32_t v : splits) next.push_back(d.extend(v));
            }
            level = std::move(next);
        }
    }
    return false;
}

const GraftBlueprint* PipelineState::blueprint_at(const Seq& root) const {
    for (const GraftBlueprint& bp : family_)
        if (bp.root() == root) return &bp;
    return nullptr;
}

PipelineState pipeline_advance(const PipelineState& state, const SetExpr& u_next) {
    const TruncParams& tr = state.trunc_;
    if (!pi_dense_at(u_next, Seq{}, tr.depth, tr.width, tr.threshold))
        throw invariant_failure(
            "density-violation: next open set is not pi-dense at the declared truncation");

    PipelineState next = state;
    int n = state.stage() + 1;
    next.opens_.push_back(u_next);

    std::vector<Seq> z;
    for (const Seq& d : split_region(u_next, tr.root_window()))
        if (state.in_m(n - 1, d)) z.push_back(d);

    for (const Seq& v : z) {
        GraftBlueprint bp(v, SetExpr::intersect(u_next, SetExpr::cylinder(v)), n);
        next.loss_ = SetExpr::unite(next.loss_, bp.cut());
        next.family_.push_back(std::move(bp));
    }
    next.z_stages_.push_back(std::move(z));
    return next;
}

PipelineState pipeline_step(const PipelineState& state, const SetExpr& u_next) {
    PipelineState next = pipeline_advance(state, u_next);
    for (const CheckRecord& r : verify_pipeline_invariants(next))
        if (r.status == Status::fail)
            throw invariant_failure("invariant " + r.id + " failed: " + r.detail);
    return next;
}

PipelineState pipeline_run(const std::vector<CompactCode>& compacts, std::size_t stages,
                           const TruncParams& trunc) {
    if (stages > compacts.size())
        throw std::invalid_argument("pipeline_run: more stages than compact codes");
    PipelineState state(trunc);
    for (std::size_t i = 0; i < stages; ++i)
        state = pipeline_step(state, SetExpr::diff(SetExpr::full(), SetExpr::compact(compacts[i])));
    return state;
}

// ---------------------------------------------------------------------------
// materialization

PiTree materialize_pi_tree(const PipelineState& state, std::size_t depth, std::size_t width) {
    if (depth < 2) throw std::invalid_argument("materialize_pi_tree: depth must be at least 2");
    PiTree out;
    out.loss = state.loss();
    // implant selectors stop one level short of the stratum: fiber bases
    // then stay short enough that every materialized leaf resolves on it
    const std::size_t sel_cap = depth - 1;

    auto in_some_explant = [&](const Seq& z) {
        for (const GraftBlueprint& bp : state.family())
            if (bp.root().is_prefix_of(z) && !(bp.root() == z) && bp.in_delta(z)) return true;
        return false;
    };

    std::vector<FinTree::Entry> entries;
    std::map<NodeId, SetExpr> leaves;

    std::deque<std::pair<PiNode, std::optional<NodeId>>> queue;
    queue.push_back({PiNode{PiNode::Kind::supp, Seq{}, -1, {}, {}, 0, false}, std::nullopt});

    while (!queue.empty()) {
        auto [node, parent] = queue.front();
        queue.pop_front();
        NodeId id = static_cast<NodeId>(out.nodes.size());

        SetExpr base_leaf;
        std::vector<PiNode> sons;
        if (node.kind == PiNode::Kind::supp) {
            const Seq& y = node.seq;
            base_leaf = SetExpr::cylinder(y);
            node.sons_complete = y.length() < depth;
            if (y.length() < depth) {
                if (const GraftBlueprint* bp = state.blueprint_at(y)) {
                    for (const Seq& x : bp->delta_members(y, sel_cap))
                        sons.push_back(PiNode{PiNode::Kind::imp, {}, bp->stage(), y, x,
                                              bp->level_of(x), false});
                } else {
                    for (std::uint32_t v = 0; v < width; ++v) {
                        Seq z = y.extend(v);
                        if (!in_some_explant(z))
                            sons.push_back(PiNode{PiNode::Kind::supp, z, -1, {}, {}, 0, false});
                    }
                }
            }
        } else {
            const GraftBlueprint* bp = state.blueprint_at(node.root);
            if (!bp) throw std::logic_error("materialize: missing blueprint");
            base_leaf = bp->leaf(BlueprintNode::make_imp(node.selector, node.level));
            Seq base = node.selector.drop(node.level);
            bool spine_ok =
                node.level >= 1 && node.selector.length() - (node.level - 1) <= depth - 1;
            node.sons_complete = node.level == 0 || spine_ok;
            if (spine_ok)
                sons.push_back(PiNode{PiNode::Kind::imp, {}, node.stage, node.root,
                                      node.selector, node.level - 1, false});
            for (std::uint32_t v = 0; v < width; ++v) {
                Seq z = base.extend(v);
                if (bp->in_omega(z) && bp->fiber_contains(base, node.selector, z))
                    sons.push_back(PiNode{PiNode::Kind::supp, z, -1, {}, {}, 0, false});
            }
        }

        out.nodes.push_back(node);
        std::optional<Seq> label =
            node.kind == PiNode::Kind::supp ? std::optional<Seq>(node.seq) : std::nullopt;
        entries.push_back({id, parent, label});
        leaves.emplace(id, SetExpr::diff(base_leaf, out.loss));
        for (PiNode& s : sons) queue.push_back({std::move(s), id});
    }

    out.tree.skeleton = FinTree::build(entries);
    out.tree.leaf = std::move(leaves);
    return out;
}

}  // namespace foliage
