#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foliage/seq.hpp"
#include "foliage/universe.hpp"

namespace foliage {

/// Tri-state verdict of a symbolic set at a node x of the Baire tree.
///   inside:  S_x is contained in the set
///   outside: S_x misses the set
///   split:   S_x contains both a member and a non-member
enum class NodeClass { inside, outside, split };

inline const char* to_string(NodeClass c) {
    switch (c) {
        case NodeClass::inside: return "inside";
        case NodeClass::outside: return "outside";
        case NodeClass::split: return "split";
    }
    return "?";
}

/// A finitely presented compact subset of the Baire space: a finite pruned
/// table of allowed successor values, continued beyond table_depth by the
/// single value 0.  The coded set is {p : forall n, p(n) in allowed(p|n)}.
class CompactCode {
public:
    CompactCode(std::map<Seq, std::vector<std::uint32_t>> table, std::uint32_t table_depth);

    /// The singleton {0^omega}.
    static CompactCode zero_point() { return CompactCode({}, 0); }

    bool in_tree(const Seq& x) const;
    std::vector<std::uint32_t> allowed(const Seq& prefix) const;
    std::uint32_t table_depth() const { return table_depth_; }
    std::uint32_t max_branching() const { return max_branching_; }
    const std::map<Seq, std::vector<std::uint32_t>>& table() const { return table_; }

    bool operator==(const CompactCode& o) const {
        return table_depth_ == o.table_depth_ && table_ == o.table_;
    }

private:
    std::map<Seq, std::vector<std::uint32_t>> table_;
    std::uint32_t table_depth_;
    std::uint32_t max_branching_;
};

/// Oracle for an infinite union of sibling cylinders: all members are sons
/// of a fixed base node.  Implementations must be pure; `proper` asserts the
/// member set is infinite and co-infinite among the base's sons, which is
/// what certifies split verdicts above the base.
class CylFamily {
public:
    virtual ~CylFamily() = default;
    virtual Seq base() const = 0;
    /// Membership for sons of base (callers pass s with base ⊆ s, |s| = |base|+1).
    virtual bool contains(const Seq& s) const = 0;
    /// i-th member in ascending order of last value.
    virtual Seq member_at(std::size_t i) const = 0;
    virtual std::string describe() const = 0;
};

/// Immutable symbolic subset of the Baire space with a total, sound
/// tri-state classification.  Union/intersection verdicts combine pointwise
/// (join/meet); the constructions used here (cylinders, compact codes,
/// sibling-cylinder families with pairwise distinct bases, differences of
/// open sets by compact-bounded sets) keep those combinations sound.
class SetExpr {
public:
    enum class Op { empty, full, cylinder, compact, family, union_, intersect, diff };

    SetExpr() : SetExpr(empty()) {}

    static SetExpr empty();
    static SetExpr full();
    static SetExpr cylinder(const Seq& s);
    static SetExpr compact(CompactCode code);
    static SetExpr family(std::shared_ptr<const CylFamily> fam);
    static SetExpr unite(SetExpr a, SetExpr b);
    static SetExpr intersect(SetExpr a, SetExpr b);
    static SetExpr diff(SetExpr a, SetExpr b);

    NodeClass classify(const Seq& x) const;

    /// The finitely many successor values n with classify(x^<n>) == split.
    std::vector<std::uint32_t> split_successors(const Seq& x) const;

    Op op() const;
    const Seq& cylinder_seq() const;
    const CompactCode& compact_code() const;
    const CylFamily& family_oracle() const;
    SetExpr arg(std::size_t i) const;

    /// Open / compact-bounded by construction (used for "open in X" flags
    /// and for bounding fruits).
    bool open_by_construction() const;
    bool compact_bounded() const;

    /// A cylinder S_u known to contain the denotation (structural bound;
    /// not necessarily tight).  nullopt means no bound beyond S_<>.
    std::optional<Seq> bounding_cylinder() const;

    std::string str() const;

    struct Node;  // implementation detail, defined in the translation unit

private:
    explicit SetExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Point membership for a point given as a finite prefix with an
/// eventually-0 tail: walks classifications down to max_depth.
Tri member_point(const SetExpr& e, const Seq& prefix, std::size_t max_depth);

/// Classification fingerprint on the stratum of all sequences of the given
/// length with values below width.  Shadow equality is the truncated set
/// equality used for all tier-2 set assertions.
struct Shadow {
    std::set<Seq> inside;
    std::set<Seq> split;
    bool operator==(const Shadow&) const = default;
};

Shadow depth_shadow(const SetExpr& e, std::size_t depth, std::size_t width);

/// No subset violation visible on the stratum.
bool shadow_subset(const SetExpr& a, const SetExpr& b, std::size_t depth, std::size_t width);
/// No intersection certified on the stratum.
bool shadow_disjoint(const SetExpr& a, const SetExpr& b, std::size_t depth, std::size_t width);
bool shadow_equal(const SetExpr& a, const SetExpr& b, std::size_t depth, std::size_t width);
/// Nothing inside or split on the stratum.
bool shadow_empty(const SetExpr& e, std::size_t depth, std::size_t width);

/// Truncated pi-density of e at x: every extension y of x with length(y) <=
/// depth (values below width) has at least `threshold` successor values
/// n < width whose cylinder classifies inside.
bool pi_dense_at(const SetExpr& e, const Seq& x, std::size_t depth, std::size_t width,
                 std::size_t threshold);

/// The split region of an expression is a finitely-branching prefix-closed
/// tree; returns its nodes up to max_len, in length-then-lex order.
std::vector<Seq> split_region(const SetExpr& e, std::size_t max_len);

/// Tier-2 leaf universe: symbolic Baire sets with every set predicate
/// evaluated as a shadow query at the declared (depth, width).
class BaireUniverse {
public:
    using Set = SetExpr;
    using Point = Seq;  // prefix with eventually-0 tail

    BaireUniverse(std::size_t depth, std::size_t width) : depth_(depth), width_(width) {}

    std::size_t depth() const { return depth_; }
    std::size_t width() const { return width_; }

    Set empty_set() const { return SetExpr::empty(); }
    Set full() const { return SetExpr::full(); }
    Set intersect(const Set& a, const Set& b) const { return SetExpr::intersect(a, b); }
    Set unite(const Set& a, const Set& b) const { return SetExpr::unite(a, b); }
    Set diff(const Set& a, const Set& b) const { return SetExpr::diff(a, b); }

    Tri empty(const Set& a) const { return tri_of(shadow_empty(a, depth_, width_)); }
    Tri subset(const Set& a, const Set& b) const {
        return tri_of(shadow_subset(a, b, depth_, width_));
    }
    Tri disjoint(const Set& a, const Set& b) const {
        return tri_of(shadow_disjoint(a, b, depth_, width_));
    }
    Tri equal(const Set& a, const Set& b) const {
        return tri_of(shadow_equal(a, b, depth_, width_));
    }
    Tri singleton(const Set&) const { return Tri::unknown; }  // not decidable at truncation
    Tri contains(const Set& a, const Point& p) const { return member_point(a, p, depth_); }
    Tri open(const Set& a) const {
        return a.open_by_construction() ? Tri::yes : Tri::unknown;
    }

private:
    std::size_t depth_;
    std::size_t width_;
};

}  // namespace foliage
