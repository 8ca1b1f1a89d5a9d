#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace foliage {

/// Three-valued verdict used wherever tier-2 truncation can be inconclusive.
/// Tier-1 (finite sets) always answers yes or no.
enum class Tri { yes, no, unknown };

inline Tri tri_of(bool b) { return b ? Tri::yes : Tri::no; }
inline Tri tri_not(Tri t) {
    if (t == Tri::yes) return Tri::no;
    if (t == Tri::no) return Tri::yes;
    return Tri::unknown;
}
inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::no || b == Tri::no) return Tri::no;
    if (a == Tri::yes && b == Tri::yes) return Tri::yes;
    return Tri::unknown;
}
inline Tri tri_or(Tri a, Tri b) {
    if (a == Tri::yes || b == Tri::yes) return Tri::yes;
    if (a == Tri::no && b == Tri::no) return Tri::no;
    return Tri::unknown;
}
inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        case Tri::unknown: return "unknown";
    }
    return "?";
}

struct undecidable_at_depth : std::runtime_error {
    explicit undecidable_at_depth(const std::string& what) : std::runtime_error(what) {}
};

/// Subset of a small finite point universe, as a bitmask.
struct PointSet {
    std::uint32_t bits = 0;
    bool operator==(const PointSet&) const = default;
};

/// Tier-1 leaf universe: explicit finite sets over {0..npoints-1}.  All
/// queries are exact, so every Tri answer is definite.
class FiniteUniverse {
public:
    using Set = PointSet;
    using Point = std::uint32_t;

    explicit FiniteUniverse(unsigned npoints) : npoints_(npoints) {
        if (npoints > 31) throw std::invalid_argument("FiniteUniverse: at most 31 points");
    }

    unsigned npoints() const { return npoints_; }

    Set empty_set() const { return {0}; }
    Set full() const { return {static_cast<std::uint32_t>((1u << npoints_) - 1)}; }
    Set of(std::initializer_list<Point> pts) const {
        Set s{0};
        for (Point p : pts) s.bits |= bit(p);
        return s;
    }

    Set intersect(Set a, Set b) const { return {a.bits & b.bits}; }
    Set unite(Set a, Set b) const { return {a.bits | b.bits}; }
    Set diff(Set a, Set b) const { return {a.bits & ~b.bits}; }

    Tri empty(Set a) const { return tri_of(a.bits == 0); }
    Tri subset(Set a, Set b) const { return tri_of((a.bits & ~b.bits) == 0); }
    Tri disjoint(Set a, Set b) const { return tri_of((a.bits & b.bits) == 0); }
    Tri equal(Set a, Set b) const { return tri_of(a.bits == b.bits); }
    Tri singleton(Set a) const { return tri_of(a.bits != 0 && (a.bits & (a.bits - 1)) == 0); }
    Tri contains(Set a, Point p) const { return tri_of((a.bits & bit(p)) != 0); }
    Tri open(Set) const { return Tri::yes; }  // discrete: every set is open

    std::vector<Point> points_of(Set a) const {
        std::vector<Point> out;
        for (Point p = 0; p < npoints_; ++p)
            if (a.bits & bit(p)) out.push_back(p);
        return out;
    }

private:
    static std::uint32_t bit(Point p) { return 1u << p; }
    unsigned npoints_;
};

}  // namespace foliage
