#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "foliage/fin_tree.hpp"

namespace foliage {

struct bound_exceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Restartable enumerator of every labeled forest-shaped parent map on the
/// node set {0..n-1}, in deterministic mixed-radix order.  Each node's digit
/// ranges over {none, 0, .., n-1} minus self; assignments whose parent chains
/// cycle are skipped.  The count is (n+1)^(n-1) by Cayley's formula.
class ForestEnumerator {
public:
    static constexpr std::size_t kDefaultBound = 6;

    explicit ForestEnumerator(std::size_t n, std::size_t bound = kDefaultBound) : n_(n) {
        if (n == 0 || n > bound) throw bound_exceeded("ForestEnumerator: n out of bounds");
        reset();
    }

    void reset() {
        digits_.assign(n_, 0);
        done_ = false;
        fresh_ = true;
    }

    /// Produces the next forest; returns nullopt when exhausted.
    std::optional<FinTree> next() {
        while (!done_) {
            if (!fresh_) advance();
            fresh_ = false;
            if (done_) break;
            std::optional<FinTree> t = materialize();
            if (t) return t;
        }
        return std::nullopt;
    }

    std::vector<FinTree> all() {
        reset();
        std::vector<FinTree> out;
        while (auto t = next()) out.push_back(std::move(*t));
        return out;
    }

private:
    // digit d for node i: 0 = no parent, k >= 1 = parent (k-1 adjusted past i)
    std::optional<NodeId> parent_for(std::size_t i) const {
        std::uint32_t d = digits_[i];
        if (d == 0) return std::nullopt;
        NodeId p = static_cast<NodeId>(d - 1);
        if (p >= static_cast<NodeId>(i)) ++p;  // skip self
        return p;
    }

    void advance() {
        for (std::size_t i = 0; i < n_; ++i) {
            if (digits_[i] + 1 < n_) {  // n digits per node: none + (n-1) parents
                ++digits_[i];
                return;
            }
            digits_[i] = 0;
        }
        done_ = true;
    }

    std::optional<FinTree> materialize() const {
        // reject cycles cheaply before building
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t steps = 0;
            std::optional<NodeId> p = parent_for(i);
            while (p) {
                if (++steps > n_) return std::nullopt;
                p = parent_for(static_cast<std::size_t>(*p));
            }
        }
        std::vector<FinTree::Entry> entries;
        entries.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i)
            entries.push_back({static_cast<NodeId>(i), parent_for(i), std::nullopt});
        return FinTree::build(entries);
    }

    std::size_t n_;
    std::vector<std::uint32_t> digits_;
    bool done_ = false;
    bool fresh_ = true;
};

inline std::vector<FinTree> enumerate_small_trees(std::size_t n,
                                                  std::size_t bound = ForestEnumerator::kDefaultBound) {
    return ForestEnumerator(n, bound).all();
}

}  // namespace foliage
