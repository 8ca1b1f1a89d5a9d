#include "foliage/baire_set.hpp"

#include <algorithm>

namespace foliage {

// ---------------------------------------------------------------------------
// CompactCode

CompactCode::CompactCode(std::map<Seq, std::vector<std::uint32_t>> table,
                         std::uint32_t table_depth)
    : table_(std::move(table)), table_depth_(table_depth) {
    max_branching_ = 1;
    if (table_depth_ == 0) {
        if (!table_.empty())
            throw std::invalid_argument("CompactCode: depth 0 admits no table entries");
        return;
    }
    // prunedness: keys are exactly the reachable prefixes shorter than the
    // table depth, each with a nonempty sorted value set
    if (!table_.count(Seq{}))
        throw std::invalid_argument("CompactCode: missing root entry");
    std::set<Seq> reachable{Seq{}};
    for (const auto& [key, vals] : table_) {
        if (key.length() >= table_depth_)
            throw std::invalid_argument("CompactCode: key at or beyond table depth: " + key.str());
        if (vals.empty())
            throw std::invalid_argument("CompactCode: empty allowed set at " + key.str());
        if (!std::is_sorted(vals.begin(), vals.end()) ||
            std::adjacent_find(vals.begin(), vals.end()) != vals.end())
            throw std::invalid_argument("CompactCode: values must be sorted and unique at " +
                                        key.str());
        max_branching_ = std::max<std::uint32_t>(max_branching_,
                                                 static_cast<std::uint32_t>(vals.size()));
        if (key.length() + 1 < table_depth_)
            for (auto v : vals) reachable.insert(key.extend(v));
    }
    for (const Seq& r : reachable)
        if (!table_.count(r))
            throw std::invalid_argument("CompactCode: unpruned node (no entry) at " + r.str());
    for (const auto& [key, vals] : table_)
        if (!reachable.count(key))
            throw std::invalid_argument("CompactCode: unreachable entry at " + key.str());
}

std::vector<std::uint32_t> CompactCode::allowed(const Seq& prefix) const {
    if (prefix.length() >= table_depth_) return {0};
    auto it = table_.find(prefix);
    if (it == table_.end())
        throw std::invalid_argument("CompactCode: prefix not in tree: " + prefix.str());
    return it->second;
}

bool CompactCode::in_tree(const Seq& x) const {
    for (std::size_t i = 0; i < x.length(); ++i) {
        std::uint32_t a = x.at(i);
        if (i >= table_depth_) {
            if (a != 0) return false;
            continue;
        }
        auto it = table_.find(x.restrict(i));
        if (it == table_.end()) return false;
        if (!std::binary_search(it->second.begin(), it->second.end(), a)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// SetExpr

struct SetExpr::Node {
    Op op;
    Seq seq;                                   // cylinder
    std::optional<CompactCode> code;           // compact
    std::shared_ptr<const CylFamily> fam;      // family
    std::shared_ptr<const Node> lhs, rhs;      // union / intersect / diff
    bool open = false;
    bool compact_bounded = false;
};

namespace {

std::shared_ptr<const SetExpr::Node> make_node(SetExpr::Node n) {
    return std::make_shared<const SetExpr::Node>(std::move(n));
}
}  // namespace

SetExpr SetExpr::empty() {
    static const auto n = make_node({Op::empty, {}, {}, {}, {}, {}, true, true});
    return SetExpr(n);
}

SetExpr SetExpr::full() {
    static const auto n = make_node({Op::full, {}, {}, {}, {}, {}, true, false});
    return SetExpr(n);
}

SetExpr SetExpr::cylinder(const Seq& s) {
    if (s.empty()) return full();
    return SetExpr(make_node({Op::cylinder, s, {}, {}, {}, {}, true, false}));
}

SetExpr SetExpr::compact(CompactCode code) {
    return SetExpr(make_node({Op::compact, {}, std::move(code), {}, {}, {}, false, true}));
}

SetExpr SetExpr::family(std::shared_ptr<const CylFamily> fam) {
    if (!fam) throw std::invalid_argument("SetExpr::family: null oracle");
    return SetExpr(make_node({Op::family, {}, {}, std::move(fam), {}, {}, true, false}));
}

SetExpr SetExpr::unite(SetExpr a, SetExpr b) {
    if (a.op() == Op::empty) return b;
    if (b.op() == Op::empty) return a;
    if (a.op() == Op::full || b.op() == Op::full) return full();
    SetExpr::Node n{Op::union_, {}, {}, {}, a.node_, b.node_,
                    a.node_->open && b.node_->open,
                    a.node_->compact_bounded && b.node_->compact_bounded};
    return SetExpr(make_node(std::move(n)));
}

SetExpr SetExpr::intersect(SetExpr a, SetExpr b) {
    if (a.op() == Op::empty || b.op() == Op::empty) return empty();
    if (a.op() == Op::full) return b;
    if (b.op() == Op::full) return a;
    if (a.op() == Op::cylinder && b.op() == Op::cylinder) {
        const Seq& c = a.cylinder_seq();
        const Seq& d = b.cylinder_seq();
        if (c.is_prefix_of(d)) return b;
        if (d.is_prefix_of(c)) return a;
        return empty();
    }
    // S_c ∩ (P \ Q) = (S_c ∩ P) \ Q keeps differences outermost, which is
    // what makes the compact-difference classification rule applicable
    if (a.op() == Op::cylinder && b.op() == Op::diff)
        return diff(intersect(a, SetExpr(b.node_->lhs)), SetExpr(b.node_->rhs));
    if (b.op() == Op::cylinder && a.op() == Op::diff)
        return diff(intersect(b, SetExpr(a.node_->lhs)), SetExpr(a.node_->rhs));
    SetExpr::Node n{Op::intersect, {}, {}, {}, a.node_, b.node_,
                    a.node_->open && b.node_->open,
                    a.node_->compact_bounded || b.node_->compact_bounded};
    return SetExpr(make_node(std::move(n)));
}

SetExpr SetExpr::diff(SetExpr a, SetExpr b) {
    if (a.op() == Op::empty || b.op() == Op::full) return empty();
    if (b.op() == Op::empty) return a;
    SetExpr::Node n{Op::diff, {}, {}, {}, a.node_, b.node_,
                    a.node_->open && !b.node_->open && b.node_->compact_bounded,
                    a.node_->compact_bounded};
    return SetExpr(make_node(std::move(n)));
}

SetExpr::Op SetExpr::op() const { return node_->op; }
const Seq& SetExpr::cylinder_seq() const { return node_->seq; }
const CompactCode& SetExpr::compact_code() const { return *node_->code; }
const CylFamily& SetExpr::family_oracle() const { return *node_->fam; }
SetExpr SetExpr::arg(std::size_t i) const { return SetExpr(i == 0 ? node_->lhs : node_->rhs); }
bool SetExpr::open_by_construction() const { return node_->open; }
bool SetExpr::compact_bounded() const { return node_->compact_bounded; }

namespace {

NodeClass join(NodeClass a, NodeClass b) {  // union
    if (a == NodeClass::inside || b == NodeClass::inside) return NodeClass::inside;
    if (a == NodeClass::outside) return b;
    if (b == NodeClass::outside) return a;
    return NodeClass::split;
}

NodeClass meet(NodeClass a, NodeClass b) {  // intersection
    if (a == NodeClass::outside || b == NodeClass::outside) return NodeClass::outside;
    if (a == NodeClass::inside) return b;
    if (b == NodeClass::inside) return a;
    return NodeClass::split;
}

NodeClass invert(NodeClass a) {  // complement
    if (a == NodeClass::inside) return NodeClass::outside;
    if (a == NodeClass::outside) return NodeClass::inside;
    return NodeClass::split;
}

NodeClass classify_family(const CylFamily& f, const Seq& x) {
    Seq base = f.base();
    std::size_t stratum = base.length() + 1;
    if (x.length() >= stratum) {
        if (!base.is_prefix_of(x)) return NodeClass::outside;
        return f.contains(x.restrict(stratum)) ? NodeClass::inside : NodeClass::outside;
    }
    // x is at or above the base; members exist below (proper family), and a
    // non-member son of the base escapes the union
    return x.is_prefix_of(base) ? NodeClass::split : NodeClass::outside;
}

}  // namespace

NodeClass SetExpr::classify(const Seq& x) const {
    switch (node_->op) {
        case Op::empty: return NodeClass::outside;
        case Op::full: return NodeClass::inside;
        case Op::cylinder: {
            const Seq& c = node_->seq;
            if (c.is_prefix_of(x)) return NodeClass::inside;
            if (x.is_prefix_of(c)) return NodeClass::split;
            return NodeClass::outside;
        }
        case Op::compact:
            // no cylinder fits inside a compact subset of the Baire space,
            // and pruned tables guarantee a member through every tree node
            return node_->code->in_tree(x) ? NodeClass::split : NodeClass::outside;
        case Op::family: return classify_family(*node_->fam, x);
        case Op::union_: return join(SetExpr(node_->lhs).classify(x), SetExpr(node_->rhs).classify(x));
        case Op::intersect:
            return meet(SetExpr(node_->lhs).classify(x), SetExpr(node_->rhs).classify(x));
        case Op::diff:
            return meet(SetExpr(node_->lhs).classify(x), invert(SetExpr(node_->rhs).classify(x)));
    }
    return NodeClass::outside;
}

std::vector<std::uint32_t> SetExpr::split_successors(const Seq& x) const {
    std::set<std::uint32_t> cand;
    switch (node_->op) {
        case Op::empty:
        case Op::full: return {};
        case Op::cylinder: {
            const Seq& c = node_->seq;
            if (x.proper_prefix_of(c)) cand.insert(c.at(x.length()));
            break;
        }
        case Op::compact: {
            if (node_->code->in_tree(x))
                for (auto v : node_->code->allowed(x)) cand.insert(v);
            break;
        }
        case Op::family: {
            Seq base = node_->fam->base();
            if (x.proper_prefix_of(base)) cand.insert(base.at(x.length()));
            break;
        }
        case Op::union_:
        case Op::intersect:
        case Op::diff: {
            for (auto v : SetExpr(node_->lhs).split_successors(x)) cand.insert(v);
            for (auto v : SetExpr(node_->rhs).split_successors(x)) cand.insert(v);
            break;
        }
    }
    std::vector<std::uint32_t> out;
    for (auto v : cand)
        if (classify(x.extend(v)) == NodeClass::split) out.push_back(v);
    return out;
}

std::optional<Seq> SetExpr::bounding_cylinder() const {
    switch (node_->op) {
        case Op::empty:
        case Op::full:
        case Op::compact: return std::nullopt;
        case Op::cylinder: return node_->seq;
        case Op::family: return node_->fam->base();
        case Op::union_: {
            auto a = SetExpr(node_->lhs).bounding_cylinder();
            auto b = SetExpr(node_->rhs).bounding_cylinder();
            if (!a || !b) return std::nullopt;
            // longest common prefix
            std::size_t n = 0;
            while (n < a->length() && n < b->length() && a->at(n) == b->at(n)) ++n;
            return a->restrict(n);
        }
        case Op::intersect: {
            auto a = SetExpr(node_->lhs).bounding_cylinder();
            auto b = SetExpr(node_->rhs).bounding_cylinder();
            if (!a) return b;
            if (!b) return a;
            return a->length() >= b->length() ? a : b;
        }
        case Op::diff: return SetExpr(node_->lhs).bounding_cylinder();
    }
    return std::nullopt;
}

std::string SetExpr::str() const {
    switch (node_->op) {
        case Op::empty: return "0";
        case Op::full: return "N";
        case Op::cylinder: return "S" + node_->seq.str();
        case Op::compact: return "K[d=" + std::to_string(node_->code->table_depth()) + "]";
        case Op::family: return "U{" + node_->fam->describe() + "}";
        case Op::union_: return "(" + SetExpr(node_->lhs).str() + " u " + SetExpr(node_->rhs).str() + ")";
        case Op::intersect:
            return "(" + SetExpr(node_->lhs).str() + " n " + SetExpr(node_->rhs).str() + ")";
        case Op::diff: return "(" + SetExpr(node_->lhs).str() + " \\ " + SetExpr(node_->rhs).str() + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// point membership, shadows, pi-density

Tri member_point(const SetExpr& e, const Seq& prefix, std::size_t max_depth) {
    Seq x = prefix;
    for (;;) {
        switch (e.classify(x)) {
            case NodeClass::inside: return Tri::yes;
            case NodeClass::outside: return Tri::no;
            case NodeClass::split: break;
        }
        if (x.length() >= max_depth) return Tri::unknown;
        x = x.extend(0);  // eventually-0 tail policy
    }
}

namespace {
template <class Fn>
void for_stratum(std::size_t depth, std::size_t width, Fn&& fn) {
    std::vector<std::uint32_t> digits(depth, 0);
    for (;;) {
        fn(Seq(digits));
        std::size_t i = 0;
        while (i < depth && ++digits[i] == width) digits[i++] = 0;
        if (i == depth) break;
    }
}
}  // namespace

Shadow depth_shadow(const SetExpr& e, std::size_t depth, std::size_t width) {
    Shadow sh;
    if (width == 0) return sh;
    for_stratum(depth, width, [&](const Seq& q) {
        switch (e.classify(q)) {
            case NodeClass::inside: sh.inside.insert(q); break;
            case NodeClass::split: sh.split.insert(q); break;
            case NodeClass::outside: break;
        }
    });
    return sh;
}

bool shadow_subset(const SetExpr& a, const SetExpr& b, std::size_t depth, std::size_t width) {
    bool ok = true;
    for_stratum(depth, width, [&](const Seq& q) {
        if (!ok) return;
        NodeClass ca = a.classify(q), cb = b.classify(q);
        if (ca == NodeClass::inside && cb != NodeClass::inside) ok = false;
        if (ca == NodeClass::split && cb == NodeClass::outside) ok = false;
    });
    return ok;
}

bool shadow_disjoint(const SetExpr& a, const SetExpr& b, std::size_t depth, std::size_t width) {
    bool ok = true;
    for_stratum(depth, width, [&](const Seq& q) {
        if (!ok) return;
        NodeClass ca = a.classify(q), cb = b.classify(q);
        if (ca == NodeClass::inside && cb != NodeClass::outside) ok = false;
        if (cb == NodeClass::inside && ca != NodeClass::outside) ok = false;
    });
    return ok;
}

bool shadow_equal(const SetExpr& a, const SetExpr& b, std::size_t depth, std::size_t width) {
    bool ok = true;
    for_stratum(depth, width, [&](const Seq& q) {
        if (ok && a.classify(q) != b.classify(q)) ok = false;
    });
    return ok;
}

bool shadow_empty(const SetExpr& e, std::size_t depth, std::size_t width) {
    bool ok = true;
    for_stratum(depth, width, [&](const Seq& q) {
        if (ok && e.classify(q) != NodeClass::outside) ok = false;
    });
    return ok;
}

std::vector<Seq> split_region(const SetExpr& e, std::size_t max_len) {
    std::vector<Seq> out;
    if (e.classify(Seq{}) != NodeClass::split) return out;
    std::vector<Seq> level{Seq{}};
    while (!level.empty()) {
        out.insert(out.end(), level.begin(), level.end());
        if (level.front().length() >= max_len) break;
        std::vector<Seq> next;
        for (const Seq& d : level)
            for (std::uint32_t n : e.split_successors(d)) next.push_back(d.extend(n));
        level = std::move(next);
    }
    return out;
}

bool pi_dense_at(const SetExpr& e, const Seq& x, std::size_t depth, std::size_t width,
                 std::size_t threshold) {
    if (threshold > width) return false;
    if (x.length() > depth) return true;
    std::vector<Seq> frontier{x};
    while (!frontier.empty()) {
        std::vector<Seq> next;
        for (const Seq& y : frontier) {
            std::size_t inside = 0;
            for (std::uint32_t n = 0; n < width; ++n)
                if (e.classify(y.extend(n)) == NodeClass::inside) ++inside;
            if (inside < threshold) return false;
            if (y.length() < depth)
                for (std::uint32_t n = 0; n < width; ++n) next.push_back(y.extend(n));
        }
        frontier = std::move(next);
    }
    return true;
}

}  // namespace foliage
