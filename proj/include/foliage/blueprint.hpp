#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "foliage/baire_set.hpp"

namespace foliage {

/// Cantor pairing, used to split each son set Omega_x into infinitely many
/// infinite fibers deterministically.
inline std::size_t cantor_pair(std::size_t i, std::size_t j) {
    std::size_t t = i + j;
    return t * (t + 1) / 2 + j;
}
inline std::pair<std::size_t, std::size_t> cantor_unpair(std::size_t k) {
    std::size_t t = 0;
    while ((t + 1) * (t + 2) / 2 <= k) ++t;
    std::size_t j = k - t * (t + 1) / 2;
    return {t - j, j};
}

/// A node of the lazy graft: the root v, an implant node Imp(x, l) for
/// x in Delta and 0 <= l <= l(x), or a maximal node Max(z) for z in MAX.
struct BlueprintNode {
    enum class Kind { root, imp, max };
    Kind kind = Kind::root;
    Seq x;                    // imp: the selector in Delta; max: the node z
    std::uint32_t level = 0;  // imp only

    static BlueprintNode make_root() { return {Kind::root, Seq{}, 0}; }
    static BlueprintNode make_imp(Seq sel, std::uint32_t l) { return {Kind::imp, std::move(sel), l}; }
    static BlueprintNode make_max(Seq z) { return {Kind::max, std::move(z), 0}; }

    bool operator==(const BlueprintNode&) const = default;
    bool operator<(const BlueprintNode& o) const {
        if (kind != o.kind) return static_cast<int>(kind) < static_cast<int>(o.kind);
        if (!(x == o.x)) return x < o.x;
        return level < o.level;
    }

    std::string str() const {
        switch (kind) {
            case Kind::root: return "root";
            case Kind::imp: return "imp(" + x.str() + "," + std::to_string(level) + ")";
            case Kind::max: return "max(" + x.str() + ")";
        }
        return "?";
    }
};

/// The lazy graft G(v, n) of the main construction: for an open set O that
/// classifies split at v, the oracles for Omega (cylinders inside O below
/// v), Delta (the split region), MAX (minimal Omega nodes), the canonical
/// enumerations, the pairing-based partition of each Omega_x, and the sons /
/// leaf structure of the implant.
class GraftBlueprint {
public:
    /// Throws std::invalid_argument unless classify(o, root) == split
    /// (inside means O is not a proper subset of S_root, outside means O has
    /// empty trace below root).
    GraftBlueprint(Seq root, SetExpr o, int stage);

    const Seq& root() const { return core_->v; }
    const SetExpr& open_set() const { return core_->o; }
    int stage() const { return core_->stage; }

    /// l(x) = length(x) - length(v).
    std::uint32_t level_of(const Seq& x) const;

    // -- region oracles (arguments are extensions of the root) --------------
    bool in_omega(const Seq& z) const;
    bool in_delta(const Seq& z) const;
    bool in_max(const Seq& z) const;
    bool in_explant(const Seq& z) const { return in_delta(z) && !(z == core_->v); }

    // -- canonical enumerations ---------------------------------------------
    /// k-th son of w lying in Omega, by ascending last value.
    Seq omega_son_at(const Seq& w, std::size_t k) const;
    std::optional<std::size_t> omega_son_rank(const Seq& w, const Seq& z) const;
    /// i-th member of Delta_w in length-then-lex order (Delta_w starts at w).
    Seq delta_at(const Seq& w, std::size_t i) const;
    std::optional<std::size_t> delta_rank(const Seq& w, const Seq& d) const;
    /// All members of Delta_w with length <= max_len.
    std::vector<Seq> delta_members(const Seq& w, std::size_t max_len) const;

    // -- the partition (Omega_w into fibers Omega_{w,d}) ---------------------
    Seq partition_assign(const Seq& w, const Seq& z) const;
    std::vector<Seq> partition_enum(const Seq& w, const Seq& d, std::size_t count) const;
    bool fiber_contains(const Seq& w, const Seq& d, const Seq& z) const;
    /// The fiber as a symbolic union of cylinders.
    SetExpr fiber_family(const Seq& w, const Seq& d) const;

    // -- implant structure ----------------------------------------------------
    /// Materialized sons: fiber members with last value < width; Delta
    /// selectors with length <= sel_len (root only).
    std::vector<BlueprintNode> sons(const BlueprintNode& n, std::size_t width,
                                    std::size_t sel_len) const;
    SetExpr leaf(const BlueprintNode& n) const;

    /// cut(S, G) = S_v \ O.
    SetExpr cut() const { return SetExpr::diff(SetExpr::cylinder(core_->v), core_->o); }

private:
    struct Core {
        Seq v;
        SetExpr o;
        int stage;
        mutable std::mutex mu;
        // Delta_w levels cache: levels[w][j] = members of Delta_w of length |w|+j
        mutable std::map<Seq, std::vector<std::vector<Seq>>> delta_levels;
    };

    std::vector<Seq> delta_level(const Seq& w, std::size_t j) const;
    std::shared_ptr<Core> core_;

    friend class FiberFamily;
};

/// Witness produced by the preserves-shoots recipe: the implant node x whose
/// shoot pi-refines shoot_S(y), together with the intermediate data of the
/// construction.
struct PreserveShootsWitness {
    bool ok = false;
    std::string detail;
    BlueprintNode x;
    Seq zdot, w, d;
    std::size_t exception_count = 0;
};

/// Runs the constructive argument for "G preserves shoots of S" on one
/// sample: p (a point of O, given as a prefix) and y in Delta with p in S_y.
/// Validates the resulting certificate by direct enumeration.
PreserveShootsWitness preserves_shoots_witness(const GraftBlueprint& bp, const Seq& p,
                                               const Seq& y, std::size_t depth,
                                               std::size_t width);

}  // namespace foliage
