#pragma once

#include <map>
#include <optional>
#include <vector>

#include "foliage/fin_tree.hpp"
#include "foliage/universe.hpp"

namespace foliage {

/// A foliage tree: a skeleton with a leaf (a set from some universe U)
/// attached to each node.
template <class U>
struct FoliageTree {
    using Set = typename U::Set;

    FinTree skeleton;
    std::map<NodeId, Set> leaf;

    const Set& leaf_of(NodeId x) const {
        auto it = leaf.find(x);
        if (it == leaf.end()) throw node_not_found(x);
        return it->second;
    }
};

/// Intersection of leaves over a nonempty node set.
template <class U>
typename U::Set fruit_of(const FoliageTree<U>& f, const U& u, const NodeSet& a) {
    if (a.empty()) throw std::invalid_argument("fruit_of: empty node set");
    auto it = a.begin();
    typename U::Set acc = f.leaf_of(*it);
    for (++it; it != a.end(); ++it) acc = u.intersect(acc, f.leaf_of(*it));
    return acc;
}

/// Union of leaves over a node set (the whole tree if A is all nodes).
template <class U>
typename U::Set flesh_of(const FoliageTree<U>& f, const U& u, const NodeSet& a) {
    typename U::Set acc = u.empty_set();
    for (NodeId x : a) acc = u.unite(acc, f.leaf_of(x));
    return acc;
}

template <class U>
typename U::Set flesh(const FoliageTree<U>& f, const U& u) {
    typename U::Set acc = u.empty_set();
    for (NodeId x : f.skeleton.node_ids()) acc = u.unite(acc, f.leaf_of(x));
    return acc;
}

/// Union of branch fruits.
template <class U>
typename U::Set yield_of(const FoliageTree<U>& f, const U& u) {
    typename U::Set acc = u.empty_set();
    for (const NodeSet& b : f.skeleton.branches()) acc = u.unite(acc, fruit_of(f, u, b));
    return acc;
}

/// Nodes whose leaf contains the point.  Throws undecidable_at_depth if some
/// membership cannot be classified (tier 2 only).
template <class U>
NodeSet scope_of(const FoliageTree<U>& f, const U& u, const typename U::Point& p) {
    NodeSet out;
    for (NodeId x : f.skeleton.node_ids()) {
        Tri t = u.contains(f.leaf_of(x), p);
        if (t == Tri::unknown)
            throw undecidable_at_depth("scope_of: membership unresolved at node " +
                                       std::to_string(x));
        if (t == Tri::yes) out.insert(x);
    }
    return out;
}

/// Explicit shoot family at z: unions of leaves over cofinite subsets of
/// sons(z).  For a finite explicit tree every subset is cofinite, so the
/// family lists all of them; callers on lazy trees go through the
/// sufficient-condition checkers instead of this enumeration.
template <class U>
std::vector<typename U::Set> shoot_family(const FoliageTree<U>& f, const U& u, NodeId z) {
    NodeSet son_set = f.skeleton.sons_of(z);
    std::vector<NodeId> sons(son_set.begin(), son_set.end());
    if (sons.size() > 16) throw std::invalid_argument("shoot_family: too many sons to enumerate");
    std::vector<typename U::Set> fam;
    for (std::uint32_t mask = 0; mask < (1u << sons.size()); ++mask) {
        typename U::Set acc = u.empty_set();
        for (std::size_t i = 0; i < sons.size(); ++i)
            if (mask & (1u << i)) acc = u.unite(acc, f.leaf_of(sons[i]));
        fam.push_back(acc);
    }
    return fam;
}

/// Width-cut representative of the shoot at z: the leaf union over the
/// materialized sons outside the exception set.  Shoot members over the
/// unenumerated tail are never listed; downstream refinement checks consume
/// them through the finite-exception sufficient condition.
template <class U>
typename U::Set shoot_representative(const FoliageTree<U>& f, const U& u, NodeId z,
                                     const NodeSet& exceptions = {}) {
    typename U::Set acc = u.empty_set();
    for (NodeId s : f.skeleton.sons_of(z))
        if (!exceptions.count(s)) acc = u.unite(acc, f.leaf_of(s));
    return acc;
}

/// gamma pi-refines delta: every nonempty member of delta contains some
/// nonempty member of gamma.
template <class U>
Tri pi_refines(const U& u, const std::vector<typename U::Set>& gamma,
               const std::vector<typename U::Set>& delta) {
    Tri all = Tri::yes;
    for (const auto& d : delta) {
        Tri de = u.empty(d);
        if (de == Tri::yes) continue;
        if (de == Tri::unknown) {
            all = tri_and(all, Tri::unknown);
            continue;
        }
        Tri found = Tri::no;
        for (const auto& g : gamma) {
            Tri ok = tri_and(tri_not(u.empty(g)), u.subset(g, d));
            found = tri_or(found, ok);
            if (found == Tri::yes) break;
        }
        all = tri_and(all, found);
        if (all == Tri::no) return Tri::no;
    }
    return all;
}

/// The Definition-3.4 predicates, each evaluated literally.
struct FoliageFlags {
    Tri nonempty_leaves = Tri::unknown;
    Tri nonincreasing = Tri::unknown;
    Tri splittable = Tri::unknown;
    Tri complete = Tri::unknown;
    Tri strict_branches = Tri::unknown;
    Tri locally_strict = Tri::unknown;
    Tri open_in_universe = Tri::unknown;
};

template <class U>
FoliageFlags foliage_flags(const FoliageTree<U>& f, const U& u) {
    FoliageFlags fl;
    const auto& ids = f.skeleton.node_ids();

    fl.nonempty_leaves = Tri::yes;
    fl.open_in_universe = Tri::yes;
    for (NodeId x : ids) {
        fl.nonempty_leaves = tri_and(fl.nonempty_leaves, tri_not(u.empty(f.leaf_of(x))));
        fl.open_in_universe = tri_and(fl.open_in_universe, u.open(f.leaf_of(x)));
    }

    fl.nonincreasing = Tri::yes;
    fl.splittable = Tri::yes;
    for (NodeId x : ids) {
        for (NodeId y : ids) {
            OrderRel r = f.skeleton.relate(x, y);
            if (r == OrderRel::less)
                fl.nonincreasing = tri_and(fl.nonincreasing, u.subset(f.leaf_of(y), f.leaf_of(x)));
            if (r == OrderRel::incomparable && x < y)
                fl.splittable = tri_and(fl.splittable, u.disjoint(f.leaf_of(x), f.leaf_of(y)));
        }
    }

    fl.complete = tri_of(!ids.empty());
    fl.strict_branches = tri_of(!ids.empty());
    for (const NodeSet& b : f.skeleton.branches()) {
        typename U::Set fr = fruit_of(f, u, b);
        fl.complete = tri_and(fl.complete, tri_not(u.empty(fr)));
        fl.strict_branches = tri_and(fl.strict_branches, u.singleton(fr));
    }

    fl.locally_strict = Tri::yes;
    for (NodeId x : ids) {
        NodeSet sons = f.skeleton.sons_of(x);
        if (sons.empty()) continue;
        typename U::Set un = flesh_of(f, u, sons);
        fl.locally_strict = tri_and(fl.locally_strict, u.equal(f.leaf_of(x), un));
        for (auto i = sons.begin(); i != sons.end(); ++i)
            for (auto j = std::next(i); j != sons.end(); ++j)
                fl.locally_strict =
                    tri_and(fl.locally_strict, u.disjoint(f.leaf_of(*i), f.leaf_of(*j)));
        if (fl.locally_strict == Tri::no) break;
    }
    return fl;
}

/// A is F-cofinal in B: A is a subset of B and every member of B lies below
/// some member of A.
template <class U>
bool is_cofinal_in(const FoliageTree<U>& f, const NodeSet& a, const NodeSet& b) {
    for (NodeId x : a)
        if (!b.count(x)) return false;
    for (NodeId y : b) {
        bool covered = false;
        for (NodeId x : a)
            if (f.skeleton.leq(y, x)) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

}  // namespace foliage
