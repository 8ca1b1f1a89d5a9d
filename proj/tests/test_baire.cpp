#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "foliage/baire_set.hpp"
#include "foliage/std_tree.hpp"

using namespace foliage;

namespace {
CompactCode two_branch_code(std::uint32_t depth) {
    std::map<Seq, std::vector<std::uint32_t>> table;
    std::vector<Seq> frontier{Seq{}};
    for (std::uint32_t lvl = 0; lvl < depth; ++lvl) {
        std::vector<Seq> next;
        for (const Seq& s : frontier) {
            table[s] = {0, 1};
            next.push_back(s.extend(0));
            next.push_back(s.extend(1));
        }
        frontier = std::move(next);
    }
    return CompactCode(std::move(table), depth);
}
}  // namespace

TEST_CASE("compact code validation") {
    CHECK_NOTHROW(CompactCode::zero_point());
    CHECK_NOTHROW(two_branch_code(3));
    // empty allowed set
    CHECK_THROWS_AS(CompactCode({{Seq{}, {}}}, 1), std::invalid_argument);
    // unpruned: missing the entry the root value leads to
    CHECK_THROWS_AS(CompactCode({{Seq{}, {0}}}, 2), std::invalid_argument);
    // unreachable entry
    CHECK_THROWS_AS(CompactCode({{Seq{}, {0}}, {Seq{0}, {0}}, {Seq{3}, {0}}}, 2),
                    std::invalid_argument);
    // unsorted values
    CHECK_THROWS_AS(CompactCode({{Seq{}, {1, 0}}}, 1), std::invalid_argument);
    CompactCode z = CompactCode::zero_point();
    CHECK(z.in_tree(Seq{0, 0, 0}));
    CHECK(!z.in_tree(Seq{0, 1}));
    CHECK(z.max_branching() == 1);
    CHECK(two_branch_code(3).max_branching() == 2);
}

TEST_CASE("classification") {
    CHECK(SetExpr::cylinder(Seq{0}).classify(Seq{0, 1}) == NodeClass::inside);
    CHECK(SetExpr::cylinder(Seq{0}).classify(Seq{1}) == NodeClass::outside);
    CHECK(SetExpr::cylinder(Seq{0, 1}).classify(Seq{0}) == NodeClass::split);

    SetExpr zero = SetExpr::compact(CompactCode::zero_point());
    CHECK(zero.classify(Seq{0, 0}) == NodeClass::split);
    CHECK(zero.classify(Seq{1}) == NodeClass::outside);

    SetExpr cozero = SetExpr::diff(SetExpr::full(), zero);
    CHECK(cozero.classify(Seq{1}) == NodeClass::inside);
    CHECK(cozero.classify(Seq{0, 0}) == NodeClass::split);

    CHECK(SetExpr::empty().classify(Seq{}) == NodeClass::outside);
    CHECK(SetExpr::full().classify(Seq{}) == NodeClass::inside);
    // cylinder of the empty sequence is the full space
    CHECK(SetExpr::cylinder(Seq{}).op() == SetExpr::Op::full);

    // split successors are finite and exact
    CHECK(zero.split_successors(Seq{0}) == std::vector<std::uint32_t>{0});
    CHECK(two_branch_code(3).in_tree(Seq{1, 0}));
    CHECK(SetExpr::compact(two_branch_code(3)).split_successors(Seq{}) ==
          std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("point membership walk") {
    SetExpr cozero = SetExpr::diff(SetExpr::full(), SetExpr::compact(CompactCode::zero_point()));
    CHECK(member_point(cozero, Seq{1}, 6) == Tri::yes);
    CHECK(member_point(cozero, Seq{0, 0}, 6) == Tri::unknown);  // the removed point itself
    CHECK(member_point(SetExpr::compact(CompactCode::zero_point()), Seq{1}, 6) == Tri::no);
}

TEST_CASE("depth shadows") {
    Shadow full = depth_shadow(SetExpr::full(), 1, 3);
    CHECK(full.inside == std::set<Seq>{Seq{0}, Seq{1}, Seq{2}});
    CHECK(full.split.empty());

    SetExpr cozero = SetExpr::diff(SetExpr::full(), SetExpr::compact(CompactCode::zero_point()));
    Shadow sh = depth_shadow(cozero, 2, 2);
    CHECK(sh.split == std::set<Seq>{Seq{0, 0}});
    CHECK(sh.inside == std::set<Seq>{Seq{0, 1}, Seq{1, 0}, Seq{1, 1}});

    Shadow none = depth_shadow(SetExpr::empty(), 3, 2);
    CHECK(none.inside.empty());
    CHECK(none.split.empty());
}

TEST_CASE("shadow boolean coherence") {
    // shadows of unions/intersections/differences are the pointwise
    // join/meet of shadows, on randomized expressions
    std::mt19937_64 rng(2024);
    auto random_expr = [&](auto&& self, int depth) -> SetExpr {
        switch (rng() % (depth > 0 ? 6 : 3)) {
            case 0: return SetExpr::cylinder(Seq{static_cast<std::uint32_t>(rng() % 3)});
            case 1:
                return SetExpr::cylinder(Seq{static_cast<std::uint32_t>(rng() % 3),
                                             static_cast<std::uint32_t>(rng() % 3)});
            case 2:
                return rng() % 2 ? SetExpr::compact(CompactCode::zero_point())
                                 : SetExpr::compact(two_branch_code(2));
            case 3: return SetExpr::unite(self(self, depth - 1), self(self, depth - 1));
            case 4: return SetExpr::intersect(self(self, depth - 1),
                                              SetExpr::cylinder(Seq{static_cast<std::uint32_t>(
                                                  rng() % 3)}));
            default:
                return SetExpr::diff(self(self, depth - 1),
                                     SetExpr::compact(CompactCode::zero_point()));
        }
    };
    auto join = [](NodeClass a, NodeClass b) {
        if (a == NodeClass::inside || b == NodeClass::inside) return NodeClass::inside;
        if (a == NodeClass::outside) return b;
        if (b == NodeClass::outside) return a;
        return NodeClass::split;
    };
    for (int i = 0; i < 200; ++i) {
        SetExpr a = random_expr(random_expr, 2);
        SetExpr b = random_expr(random_expr, 2);
        SetExpr un = SetExpr::unite(a, b);
        std::vector<std::uint32_t> digits(3, 0);
        for (;;) {
            Seq q(digits);
            CHECK(un.classify(q) == join(a.classify(q), b.classify(q)));
            std::size_t k = 0;
            while (k < 3 && ++digits[k] == 3) digits[k++] = 0;
            if (k == 3) break;
        }
    }
}

TEST_CASE("classification agrees with point sampling") {
    // inside nodes contain every sampled point; outside nodes none
    std::mt19937_64 rng(99);
    SetExpr exprs[] = {
        SetExpr::diff(SetExpr::full(), SetExpr::compact(CompactCode::zero_point())),
        SetExpr::unite(SetExpr::cylinder(Seq{1}), SetExpr::compact(two_branch_code(2))),
        SetExpr::diff(SetExpr::cylinder(Seq{0}), SetExpr::compact(two_branch_code(3))),
    };
    for (const SetExpr& e : exprs) {
        for (int i = 0; i < 300; ++i) {
            std::vector<std::uint32_t> digits;
            std::size_t len = rng() % 5;
            for (std::size_t k = 0; k < len; ++k)
                digits.push_back(static_cast<std::uint32_t>(rng() % 3));
            Seq p(digits);
            Tri member = member_point(e, p, 10);
            if (member == Tri::unknown) continue;
            // the point is the 0-tail extension of p; its membership must
            // respect every classification on the prefix chain
            for (std::size_t k = 0; k <= p.length(); ++k) {
                NodeClass c = e.classify(p.restrict(k));
                if (c == NodeClass::inside) CHECK(member == Tri::yes);
                if (c == NodeClass::outside) CHECK(member == Tri::no);
            }
        }
    }
}

TEST_CASE("pi density") {
    CHECK(pi_dense_at(SetExpr::full(), Seq{}, 3, 4, 4));
    SetExpr cozero = SetExpr::diff(SetExpr::full(), SetExpr::compact(CompactCode::zero_point()));
    CHECK(pi_dense_at(cozero, Seq{}, 4, 4, 3));  // at most one bad successor anywhere
    CHECK(!pi_dense_at(SetExpr::cylinder(Seq{0}), Seq{}, 2, 3, 1));
    // analytic guarantee: width >= branching + threshold
    SetExpr cotwo = SetExpr::diff(SetExpr::full(), SetExpr::compact(two_branch_code(3)));
    CHECK(pi_dense_at(cotwo, Seq{}, 4, 2 + 2, 2));
    // pi-dense implies dense: below every window node something classifies
    // not-outside
    std::vector<std::uint32_t> digits(3, 0);
    for (;;) {
        Seq q(digits);
        bool some_inside = false;
        for (std::uint32_t n = 0; n < 4; ++n)
            if (cozero.classify(q.extend(n)) != NodeClass::outside) some_inside = true;
        CHECK(some_inside);
        std::size_t k = 0;
        while (k < 3 && ++digits[k] == 4) digits[k++] = 0;
        if (k == 3) break;
    }
}

TEST_CASE("compact complements are pi-dense once width clears the branching") {
    std::mt19937_64 rng(31337);
    for (int round = 0; round < 40; ++round) {
        std::map<Seq, std::vector<std::uint32_t>> table;
        std::uint32_t depth = 1 + rng() % 3;
        std::vector<Seq> frontier{Seq{}};
        std::uint32_t branching = 1;
        for (std::uint32_t lvl = 0; lvl < depth; ++lvl) {
            std::vector<Seq> next;
            for (const Seq& s : frontier) {
                std::set<std::uint32_t> vals{static_cast<std::uint32_t>(rng() % 4)};
                if (rng() % 2) vals.insert(static_cast<std::uint32_t>(rng() % 4));
                branching = std::max<std::uint32_t>(branching,
                                                    static_cast<std::uint32_t>(vals.size()));
                table[s] = {vals.begin(), vals.end()};
                if (lvl + 1 < depth)
                    for (std::uint32_t v : vals) next.push_back(s.extend(v));
            }
            frontier = std::move(next);
        }
        CompactCode code(std::move(table), depth);
        SetExpr cocode = SetExpr::diff(SetExpr::full(), SetExpr::compact(code));
        const std::size_t threshold = 2;
        CAPTURE(round);
        CHECK(pi_dense_at(cocode, Seq{}, 4, code.max_branching() + threshold, threshold));
    }
}

TEST_CASE("seq drop spec cases") {
    CHECK(Seq{2, 0, 1}.drop(1) == Seq{2, 0});
    Seq x{3, 1, 4, 1};
    CHECK(x.drop(0) == x);
    Seq v{3, 1};
    CHECK(x.drop(x.length() - v.length()) == v);
}

TEST_CASE("standard tree views") {
    FoliageTree<BaireUniverse> one = std_tree({1, 2});
    CHECK(one.skeleton.size() == 1);
    CHECK(one.leaf_of(0).op() == SetExpr::Op::full);

    FoliageTree<BaireUniverse> two = std_tree({2, 2});
    SetExpr split_union =
        SetExpr::unite(two.leaf_of(seq_tree_id(Seq{0}, 2)), two.leaf_of(seq_tree_id(Seq{1}, 2)));
    CHECK(shadow_equal(split_union, two.leaf_of(0), 1, 2));
}

TEST_CASE("normalized intersections stay classifiable") {
    // U cap S_x normalizes so the compact difference rule applies
    SetExpr u = SetExpr::diff(SetExpr::full(), SetExpr::compact(CompactCode::zero_point()));
    SetExpr o = SetExpr::intersect(u, SetExpr::cylinder(Seq{0}));
    CHECK(o.op() == SetExpr::Op::diff);
    CHECK(o.classify(Seq{0, 1}) == NodeClass::inside);
    CHECK(o.classify(Seq{1}) == NodeClass::outside);
    CHECK(o.classify(Seq{0, 0}) == NodeClass::split);
    CHECK(o.open_by_construction());
    CHECK(SetExpr::compact(CompactCode::zero_point()).compact_bounded());
}
