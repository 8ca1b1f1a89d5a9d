#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "foliage/seq.hpp"

namespace foliage {

using NodeId = int;
using NodeSet = std::set<NodeId>;

struct node_not_found : std::invalid_argument {
    explicit node_not_found(NodeId id)
        : std::invalid_argument("node not found: " + std::to_string(id)) {}
};

/// Relation of two nodes under the strict ancestor order.
enum class OrderRel { less, greater, equal, incomparable };

inline const char* to_string(OrderRel r) {
    switch (r) {
        case OrderRel::less: return "less";
        case OrderRel::greater: return "greater";
        case OrderRel::equal: return "equal";
        case OrderRel::incomparable: return "incomparable";
    }
    return "?";
}

enum class Region { up, down, up_closed, down_closed };

/// A finite explicit tree (or forest): opaque node ids with parent links and
/// optional Seq labels.  The strict order is "proper ancestor of"; a parent
/// map always induces a tree, so construction only has to reject cycles.
/// Immutable after build.
class FinTree {
public:
    struct Entry {
        NodeId id;
        std::optional<NodeId> parent;
        std::optional<Seq> label;
    };

    FinTree() = default;

    static FinTree build(const std::vector<Entry>& entries) {
        FinTree t;
        std::map<NodeId, Entry> sorted;
        for (const auto& e : entries) {
            if (!sorted.emplace(e.id, e).second)
                throw std::invalid_argument("FinTree: duplicate node id " + std::to_string(e.id));
        }
        for (auto& [id, e] : sorted) {
            t.index_[id] = static_cast<int>(t.ids_.size());
            t.ids_.push_back(id);
            t.labels_.push_back(e.label);
        }
        t.parent_.assign(t.ids_.size(), -1);
        for (auto& [id, e] : sorted) {
            if (!e.parent) continue;
            auto it = t.index_.find(*e.parent);
            if (it == t.index_.end())
                throw std::invalid_argument("FinTree: parent of " + std::to_string(id) +
                                            " is not a node");
            if (*e.parent == id) throw std::invalid_argument("FinTree: self-parent");
            t.parent_[t.index_[id]] = it->second;
        }
        t.finish();
        return t;
    }

    std::size_t size() const { return ids_.size(); }
    const std::vector<NodeId>& node_ids() const { return ids_; }
    bool contains(NodeId id) const { return index_.count(id) != 0; }

    std::optional<NodeId> parent_of(NodeId id) const {
        int p = parent_[idx(id)];
        return p < 0 ? std::nullopt : std::optional<NodeId>(ids_[p]);
    }

    const std::optional<Seq>& label_of(NodeId id) const { return labels_[idx(id)]; }

    /// Node id carrying the given label, if any.
    std::optional<NodeId> find_label(const Seq& s) const {
        for (std::size_t i = 0; i < ids_.size(); ++i)
            if (labels_[i] && *labels_[i] == s) return ids_[i];
        return std::nullopt;
    }

    // -- order queries -----------------------------------------------------

    OrderRel relate(NodeId x, NodeId y) const {
        int xi = idx(x), yi = idx(y);
        if (xi == yi) return OrderRel::equal;
        if (is_ancestor(xi, yi)) return OrderRel::less;
        if (is_ancestor(yi, xi)) return OrderRel::greater;
        return OrderRel::incomparable;
    }

    bool less(NodeId x, NodeId y) const { return relate(x, y) == OrderRel::less; }
    bool leq(NodeId x, NodeId y) const {
        auto r = relate(x, y);
        return r == OrderRel::less || r == OrderRel::equal;
    }

    NodeSet region(NodeId x, Region kind) const {
        int xi = idx(x);
        NodeSet out;
        switch (kind) {
            case Region::up:
            case Region::up_closed:
                for (int p = (kind == Region::up ? parent_[xi] : xi); p >= 0; p = parent_[p])
                    out.insert(ids_[p]);
                break;
            case Region::down:
            case Region::down_closed:
                for (std::size_t i = 0; i < ids_.size(); ++i)
                    if (is_ancestor(xi, static_cast<int>(i))) out.insert(ids_[i]);
                if (kind == Region::down_closed) out.insert(x);
                break;
        }
        return out;
    }

    /// Union of closed regions over every node of A.
    NodeSet footline(const NodeSet& a, Region direction) const {
        Region closed = (direction == Region::up || direction == Region::up_closed)
                            ? Region::up_closed
                            : Region::down_closed;
        NodeSet out;
        for (NodeId v : a) {
            NodeSet r = region(v, closed);
            out.insert(r.begin(), r.end());
        }
        return out;
    }

    /// Open interval (x, y): strict descendants of x that are strict
    /// ancestors of y.
    NodeSet interval(NodeId x, NodeId y) const {
        NodeSet down = region(x, Region::down);
        NodeSet up = region(y, Region::up);
        NodeSet out;
        std::set_intersection(down.begin(), down.end(), up.begin(), up.end(),
                              std::inserter(out, out.begin()));
        return out;
    }

    NodeSet sons_of(NodeId x) const {
        NodeSet out;
        for (int c : children_[idx(x)]) out.insert(ids_[c]);
        return out;
    }

    std::size_t height_of(NodeId x) const { return static_cast<std::size_t>(height_[idx(x)]); }

    std::map<std::size_t, NodeSet> levels() const {
        std::map<std::size_t, NodeSet> out;
        for (std::size_t i = 0; i < ids_.size(); ++i)
            out[static_cast<std::size_t>(height_[i])].insert(ids_[i]);
        return out;
    }

    /// Least h with an empty level; 0 for the empty tree.
    std::size_t tree_height() const {
        std::size_t h = 0;
        for (std::size_t i = 0; i < ids_.size(); ++i)
            h = std::max(h, static_cast<std::size_t>(height_[i]) + 1);
        return h;
    }

    NodeSet maxel() const {
        NodeSet out;
        for (std::size_t i = 0; i < ids_.size(); ++i)
            if (children_[i].empty()) out.insert(ids_[i]);
        return out;
    }

    NodeSet minel() const {
        NodeSet out;
        for (std::size_t i = 0; i < ids_.size(); ++i)
            if (parent_[i] < 0) out.insert(ids_[i]);
        return out;
    }

    bool has_least_node() const { return ids_.size() > 0 && minel().size() == 1; }

    NodeId least_node() const {
        NodeSet m = minel();
        if (m.size() != 1) throw std::logic_error("FinTree: no least node");
        return *m.begin();
    }

    /// All maximal chains.  For finite trees these are exactly the closed
    /// ancestor sets of maximal nodes.
    std::vector<NodeSet> branches() const {
        std::vector<NodeSet> out;
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            if (!children_[i].empty()) continue;
            out.push_back(region(ids_[i], Region::up_closed));
        }
        return out;
    }

    bool is_antichain(const NodeSet& a) const {
        for (auto i = a.begin(); i != a.end(); ++i)
            for (auto j = std::next(i); j != a.end(); ++j)
                if (relate(*i, *j) != OrderRel::incomparable) return false;
        return true;
    }

    bool is_chain(const NodeSet& a) const {
        for (auto i = a.begin(); i != a.end(); ++i)
            for (auto j = std::next(i); j != a.end(); ++j)
                if (relate(*i, *j) == OrderRel::incomparable) return false;
        return true;
    }

    /// The unique r in the antichain A with r <= x.
    NodeId root_in_antichain(NodeId x, const NodeSet& a) const {
        if (!is_antichain(a)) throw std::invalid_argument("root_in_antichain: A is not an antichain");
        std::optional<NodeId> found;
        for (NodeId r : a) {
            if (leq(r, x)) {
                found = r;
                break;  // at most one: distinct candidates would be comparable
            }
        }
        if (!found) throw std::invalid_argument("root_in_antichain: x is not below A");
        return *found;
    }

    struct ShapeFlags {
        bool bounded_chains = true;  // always true for finite trees
        bool kappa_branching = false;
        bool truncated_alpha_kappa = false;
    };

    /// Truncated alpha,kappa-tree test: isomorphic to (^{<depth}kappa, subset).
    ShapeFlags shape_flags(std::size_t kappa, std::size_t depth) const {
        ShapeFlags f;
        f.kappa_branching = true;
        for (std::size_t i = 0; i < ids_.size(); ++i)
            if (!children_[i].empty() && children_[i].size() != kappa) f.kappa_branching = false;
        f.truncated_alpha_kappa = has_least_node() && tree_height() == depth;
        if (f.truncated_alpha_kappa) {
            for (std::size_t i = 0; i < ids_.size(); ++i) {
                std::size_t h = static_cast<std::size_t>(height_[i]);
                if (h + 1 < depth && children_[i].size() != kappa) f.truncated_alpha_kappa = false;
                if (h + 1 == depth && !children_[i].empty()) f.truncated_alpha_kappa = false;
            }
        }
        return f;
    }

private:
    int idx(NodeId id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw node_not_found(id);
        return it->second;
    }

    bool is_ancestor(int a, int b) const {
        for (int p = parent_[b]; p >= 0; p = parent_[p])
            if (p == a) return true;
        return false;
    }

    void finish() {
        // cycle check: follow parents, must terminate within size() steps
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            std::size_t steps = 0;
            for (int p = parent_[i]; p >= 0; p = parent_[p])
                if (++steps > ids_.size())
                    throw std::invalid_argument("FinTree: parent relation has a cycle");
        }
        children_.assign(ids_.size(), {});
        for (std::size_t i = 0; i < ids_.size(); ++i)
            if (parent_[i] >= 0) children_[parent_[i]].push_back(static_cast<int>(i));
        height_.assign(ids_.size(), 0);
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            int h = 0;
            for (int p = parent_[i]; p >= 0; p = parent_[p]) ++h;
            height_[i] = h;
        }
    }

    std::vector<NodeId> ids_;
    std::vector<int> parent_;
    std::vector<std::optional<Seq>> labels_;
    std::vector<std::vector<int>> children_;
    std::vector<int> height_;
    std::map<NodeId, int> index_;
};

/// The truncated tree (^{<depth}width, subset) with BFS node ids and Seq
/// labels; id 0 is the empty sequence.
FinTree seq_tree(std::size_t depth, std::size_t width);

/// Id of the node labelled s inside a seq_tree(depth, width).
NodeId seq_tree_id(const Seq& s, std::size_t width);

}  // namespace foliage
