#include "foliage/blueprint.hpp"

#include <algorithm>

namespace foliage {

namespace {
constexpr std::size_t kScanCap = 1u << 20;
constexpr std::size_t kLevelCap = 512;
}  // namespace

GraftBlueprint::GraftBlueprint(Seq root, SetExpr o, int stage) {
    NodeClass c = o.classify(root);
    if (c == NodeClass::inside)
        throw std::invalid_argument("GraftBlueprint: O covers S_v, not a proper subset");
    if (c == NodeClass::outside)
        throw std::invalid_argument("GraftBlueprint: O has empty trace below v");
    core_ = std::make_shared<Core>();
    core_->v = std::move(root);
    core_->o = std::move(o);
    core_->stage = stage;
}

std::uint32_t GraftBlueprint::level_of(const Seq& x) const {
    if (!core_->v.is_prefix_of(x))
        throw std::invalid_argument("level_of: not an extension of the root");
    return static_cast<std::uint32_t>(x.length() - core_->v.length());
}

bool GraftBlueprint::in_omega(const Seq& z) const {
    return core_->v.is_prefix_of(z) && core_->o.classify(z) == NodeClass::inside;
}

bool GraftBlueprint::in_delta(const Seq& z) const {
    return core_->v.is_prefix_of(z) && core_->o.classify(z) != NodeClass::inside;
}

bool GraftBlueprint::in_max(const Seq& z) const {
    if (!in_omega(z)) return false;
    if (z.length() == core_->v.length()) return false;  // cannot happen: v is in Delta
    return !in_omega(z.drop(1));
}

Seq GraftBlueprint::omega_son_at(const Seq& w, std::size_t k) const {
    std::size_t seen = 0;
    for (std::size_t n = 0; n < kScanCap; ++n) {
        Seq z = w.extend(static_cast<std::uint32_t>(n));
        if (core_->o.classify(z) == NodeClass::inside) {
            if (seen == k) return z;
            ++seen;
        }
    }
    throw undecidable_at_depth("omega_son_at: scan cap reached below " + w.str());
}

std::optional<std::size_t> GraftBlueprint::omega_son_rank(const Seq& w, const Seq& z) const {
    if (z.length() != w.length() + 1 || !w.is_prefix_of(z)) return std::nullopt;
    if (core_->o.classify(z) != NodeClass::inside) return std::nullopt;
    std::size_t rank = 0;
    for (std::uint32_t n = 0; n < z.back(); ++n)
        if (core_->o.classify(w.extend(n)) == NodeClass::inside) ++rank;
    return rank;
}

std::vector<Seq> GraftBlueprint::delta_level(const Seq& w, std::size_t j) const {
    std::lock_guard<std::mutex> lock(core_->mu);
    auto& levels = core_->delta_levels[w];
    if (levels.empty()) {
        if (!(core_->v.is_prefix_of(w)) || core_->o.classify(w) == NodeClass::inside)
            throw std::invalid_argument("delta enumeration: w is not in Delta: " + w.str());
        levels.push_back({w});
    }
    while (levels.size() <= j) {
        if (levels.size() > kLevelCap)
            throw undecidable_at_depth("delta enumeration: level cap below " + w.str());
        std::vector<Seq> next;
        for (const Seq& d : levels.back())
            for (std::uint32_t n : core_->o.split_successors(d)) next.push_back(d.extend(n));
        levels.push_back(std::move(next));
    }
    return levels[j];
}

Seq GraftBlueprint::delta_at(const Seq& w, std::size_t i) const {
    std::size_t seen = 0;
    for (std::size_t j = 0; j <= kLevelCap; ++j) {
        std::vector<Seq> lvl = delta_level(w, j);
        if (i < seen + lvl.size()) return lvl[i - seen];
        seen += lvl.size();
    }
    throw undecidable_at_depth("delta_at: index unreachable below " + w.str());
}

std::optional<std::size_t> GraftBlueprint::delta_rank(const Seq& w, const Seq& d) const {
    if (!w.is_prefix_of(d) || !in_delta(d)) return std::nullopt;
    std::size_t rank = 0;
    std::size_t depth = d.length() - w.length();
    for (std::size_t j = 0; j < depth; ++j) rank += delta_level(w, j).size();
    std::vector<Seq> lvl = delta_level(w, depth);
    auto it = std::find(lvl.begin(), lvl.end(), d);
    if (it == lvl.end()) return std::nullopt;
    return rank + static_cast<std::size_t>(it - lvl.begin());
}

std::vector<Seq> GraftBlueprint::delta_members(const Seq& w, std::size_t max_len) const {
    std::vector<Seq> out;
    for (std::size_t j = 0; w.length() + j <= max_len; ++j) {
        std::vector<Seq> lvl = delta_level(w, j);
        out.insert(out.end(), lvl.begin(), lvl.end());
    }
    return out;
}

Seq GraftBlueprint::partition_assign(const Seq& w, const Seq& z) const {
    auto rank = omega_son_rank(w, z);
    if (!rank) throw std::invalid_argument("partition_assign: z is not in Omega_w");
    auto [i, j] = cantor_unpair(*rank);
    (void)j;
    return delta_at(w, i);
}

std::vector<Seq> GraftBlueprint::partition_enum(const Seq& w, const Seq& d,
                                                std::size_t count) const {
    auto i = delta_rank(w, d);
    if (!i) throw std::invalid_argument("partition_enum: d is not in Delta_w");
    std::vector<Seq> out;
    for (std::size_t j = 0; j < count; ++j) out.push_back(omega_son_at(w, cantor_pair(*i, j)));
    return out;
}

bool GraftBlueprint::fiber_contains(const Seq& w, const Seq& d, const Seq& z) const {
    auto rank = omega_son_rank(w, z);
    if (!rank) return false;
    auto i = delta_rank(w, d);
    if (!i) return false;
    return cantor_unpair(*rank).first == *i;
}

/// Fiber Omega_{w,d} as a cylinder-family oracle.
class FiberFamily final : public CylFamily {
public:
    FiberFamily(std::shared_ptr<GraftBlueprint::Core> core, Seq w, Seq d, std::size_t d_rank)
        : core_(std::move(core)), w_(std::move(w)), d_(std::move(d)), d_rank_(d_rank) {}

    Seq base() const override { return w_; }

    bool contains(const Seq& s) const override {
        GraftBlueprint bp = rewrap();
        auto rank = bp.omega_son_rank(w_, s);
        return rank && cantor_unpair(*rank).first == d_rank_;
    }

    Seq member_at(std::size_t i) const override {
        return rewrap().omega_son_at(w_, cantor_pair(d_rank_, i));
    }

    std::string describe() const override {
        return "fiber(v=" + core_->v.str() + ",n=" + std::to_string(core_->stage) +
               ",w=" + w_.str() + ",d=" + d_.str() + ")";
    }

private:
    GraftBlueprint rewrap() const {
        GraftBlueprint bp(core_->v, core_->o, core_->stage);
        bp.core_ = core_;
        return bp;
    }
    std::shared_ptr<GraftBlueprint::Core> core_;
    Seq w_, d_;
    std::size_t d_rank_;
};

SetExpr GraftBlueprint::fiber_family(const Seq& w, const Seq& d) const {
    auto i = delta_rank(w, d);
    if (!i) throw std::invalid_argument("fiber_family: d is not in Delta_w");
    return SetExpr::family(std::make_shared<FiberFamily>(core_, w, d, *i));
}

std::vector<BlueprintNode> GraftBlueprint::sons(const BlueprintNode& n, std::size_t width,
                                                std::size_t sel_len) const {
    std::vector<BlueprintNode> out;
    switch (n.kind) {
        case BlueprintNode::Kind::root:
            for (const Seq& x : delta_members(core_->v, sel_len))
                out.push_back(BlueprintNode::make_imp(x, level_of(x)));
            break;
        case BlueprintNode::Kind::imp: {
            const Seq& x = n.x;
            Seq w = x.drop(n.level);
            if (n.level >= 1) out.push_back(BlueprintNode::make_imp(x, n.level - 1));
            for (std::uint32_t v = 0; v < width; ++v) {
                Seq z = w.extend(v);
                if (in_omega(z) && fiber_contains(w, x, z))
                    out.push_back(BlueprintNode::make_max(z));
            }
            break;
        }
        case BlueprintNode::Kind::max: break;
    }
    return out;
}

SetExpr GraftBlueprint::leaf(const BlueprintNode& n) const {
    switch (n.kind) {
        case BlueprintNode::Kind::root: return core_->o;
        case BlueprintNode::Kind::max: return SetExpr::cylinder(n.x);
        case BlueprintNode::Kind::imp: {
            SetExpr acc = SetExpr::empty();
            for (std::uint32_t j = 0; j <= n.level; ++j)
                acc = SetExpr::unite(acc, fiber_family(n.x.drop(j), n.x));
            return acc;
        }
    }
    return SetExpr::empty();
}

PreserveShootsWitness preserves_shoots_witness(const GraftBlueprint& bp, const Seq& p,
                                               const Seq& y, std::size_t depth,
                                               std::size_t width) {
    PreserveShootsWitness wit;
    if (!bp.in_delta(y)) throw std::invalid_argument("preserves_shoots: y is not in Delta");
    if (!y.is_prefix_of(p)) throw std::invalid_argument("preserves_shoots: p is not below y");
    Tri in_o = member_point(bp.open_set(), p, depth + bp.root().length() + 4);
    if (in_o == Tri::no) throw std::invalid_argument("preserves_shoots: sample outside O");
    if (in_o == Tri::unknown) {
        wit.detail = "membership of p in O unresolved at depth";
        return wit;
    }

    // locate the minimal inside prefix zdot of p (0-extended), then apply
    // the recipe: w = zdot minus its last entry, d = the fiber selector of
    // zdot over w, x = Imp(d, length(d) - length(y)).
    Seq z = y;
    while (bp.open_set().classify(z) != NodeClass::inside) {
        z = z.length() < p.length() ? p.restrict(z.length() + 1) : z.extend(0);
        if (z.length() > depth + bp.root().length() + 8) {
            wit.detail = "no inside prefix found within depth";
            return wit;
        }
    }
    while (z.length() > y.length() && bp.in_omega(z.drop(1))) z = z.drop(1);
    wit.zdot = z;
    wit.w = z.drop(1);
    wit.d = bp.partition_assign(wit.w, wit.zdot);
    if (wit.d.length() < y.length()) {
        wit.detail = "selector shorter than y (cannot happen: y <= w <= d)";
        return wit;
    }
    std::uint32_t l = static_cast<std::uint32_t>(wit.d.length() - y.length());
    wit.x = BlueprintNode::make_imp(wit.d, l);

    // certificate (*): p lies in the leaf of x, and all sons of x except the
    // spine child lie in sons_S(y) with leaf = cylinder
    if (!(wit.d.drop(l) == y)) {
        wit.detail = "fiber base of the witness is not y";
        return wit;
    }
    if (member_point(bp.leaf(wit.x), p, depth + bp.root().length() + 4) != Tri::yes) {
        wit.detail = "p not certified inside leaf(x)";
        return wit;
    }
    for (const BlueprintNode& s : bp.sons(wit.x, width, 0)) {
        if (s.kind == BlueprintNode::Kind::imp) {
            ++wit.exception_count;  // the spine child, the finite exception set
            continue;
        }
        // fiber members are sons of y in the standard tree with leaf S_z
        if (!(s.x.length() == y.length() + 1 && y.is_prefix_of(s.x))) {
            wit.detail = "fiber member " + s.x.str() + " is not a son of y";
            return wit;
        }
    }
    if (wit.exception_count > 1) {
        wit.detail = "more than one spine exception";
        return wit;
    }
    wit.ok = true;
    return wit;
}

}  // namespace foliage
