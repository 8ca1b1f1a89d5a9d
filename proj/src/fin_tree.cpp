#include "foliage/fin_tree.hpp"

namespace foliage {

FinTree seq_tree(std::size_t depth, std::size_t width) {
    if (depth < 1 || width < 1) throw std::invalid_argument("seq_tree: depth and width >= 1");
    std::vector<FinTree::Entry> entries;
    std::vector<Seq> frontier{Seq{}};
    entries.push_back({0, std::nullopt, Seq{}});
    NodeId next = 1;
    for (std::size_t level = 1; level < depth; ++level) {
        std::vector<Seq> nf;
        for (const Seq& s : frontier) {
            NodeId parent = seq_tree_id(s, width);
            for (std::uint32_t n = 0; n < width; ++n) {
                Seq child = s.extend(n);
                entries.push_back({next++, parent, child});
                nf.push_back(child);
            }
        }
        frontier = std::move(nf);
    }
    return FinTree::build(entries);
}

NodeId seq_tree_id(const Seq& s, std::size_t width) {
    // BFS rank: nodes ordered by length, then lexicographically
    NodeId offset = 0;
    std::size_t level_size = 1;
    for (std::size_t k = 0; k < s.length(); ++k) {
        offset += static_cast<NodeId>(level_size);
        level_size *= width;
    }
    NodeId rank = 0;
    for (std::size_t i = 0; i < s.length(); ++i) {
        if (s.at(i) >= width) throw std::invalid_argument("seq_tree_id: value beyond width");
        rank = static_cast<NodeId>(rank * width + s.at(i));
    }
    return offset + rank;
}

}  // namespace foliage
