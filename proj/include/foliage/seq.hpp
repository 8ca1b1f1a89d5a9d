#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace foliage {

/// A finite sequence of naturals; the node type of the Baire tree.
/// Sequences are ordered by end-extension: s <= t iff t restricted to
/// length(s) equals s.
class Seq {
public:
    Seq() = default;
    Seq(std::initializer_list<std::uint32_t> vals) : items_(vals) {}
    explicit Seq(std::vector<std::uint32_t> vals) : items_(std::move(vals)) {}

    std::size_t length() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::uint32_t at(std::size_t i) const { return items_.at(i); }
    std::uint32_t back() const { return items_.back(); }
    const std::vector<std::uint32_t>& items() const { return items_; }

    /// s restricted to its first n entries.
    Seq restrict(std::size_t n) const {
        if (n > items_.size()) throw std::out_of_range("Seq::restrict: n exceeds length");
        return Seq(std::vector<std::uint32_t>(items_.begin(), items_.begin() + n));
    }

    /// s^<a>, the one-step extension.
    Seq extend(std::uint32_t a) const {
        std::vector<std::uint32_t> v = items_;
        v.push_back(a);
        return Seq(std::move(v));
    }

    /// x restricted to length(x) - l.  drop(0) is the identity.
    Seq drop(std::size_t l) const {
        if (l > items_.size()) throw std::out_of_range("Seq::drop: l exceeds length");
        return restrict(items_.size() - l);
    }

    bool is_prefix_of(const Seq& t) const {
        if (items_.size() > t.items_.size()) return false;
        for (std::size_t i = 0; i < items_.size(); ++i)
            if (items_[i] != t.items_[i]) return false;
        return true;
    }

    bool proper_prefix_of(const Seq& t) const {
        return items_.size() < t.items_.size() && is_prefix_of(t);
    }

    /// Neither extends the other.
    bool incomparable_with(const Seq& t) const {
        return !is_prefix_of(t) && !t.is_prefix_of(*this);
    }

    bool operator==(const Seq& o) const { return items_ == o.items_; }
    bool operator!=(const Seq& o) const { return items_ != o.items_; }

    /// Total order: by length first, then lexicographic.  Used as the
    /// canonical enumeration order and for deterministic containers.
    bool operator<(const Seq& o) const {
        if (items_.size() != o.items_.size()) return items_.size() < o.items_.size();
        return items_ < o.items_;
    }

    std::string str() const {
        std::string s = "<";
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(items_[i]);
        }
        s += '>';
        return s;
    }

    /// Comma-joined digits, no brackets; the empty sequence is "".
    std::string key() const {
        std::string s;
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(items_[i]);
        }
        return s;
    }

    static Seq parse_key(const std::string& key);

    std::size_t hash() const {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (auto v : items_) h = h * 1099511628211ULL + v + 1;
        return h;
    }

private:
    std::vector<std::uint32_t> items_;
};

inline Seq Seq::parse_key(const std::string& key) {
    std::vector<std::uint32_t> vals;
    if (key.empty()) return Seq(std::move(vals));
    std::size_t pos = 0;
    while (pos <= key.size()) {
        std::size_t comma = key.find(',', pos);
        std::string tok = key.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("Seq::parse_key: bad component in '" + key + "'");
        vals.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return Seq(std::move(vals));
}

inline std::ostream& operator<<(std::ostream& os, const Seq& s) { return os << s.str(); }

}  // namespace foliage

template <>
struct std::hash<foliage::Seq> {
    std::size_t operator()(const foliage::Seq& s) const { return s.hash(); }
};
