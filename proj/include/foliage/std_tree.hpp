#pragma once

#include "foliage/baire_set.hpp"
#include "foliage/foliage_tree.hpp"

namespace foliage {

/// Truncation window of the standard foliage tree of the Baire space.
struct StdTreeView {
    std::size_t depth;
    std::size_t width;
};

/// The standard foliage tree truncated to the view: skeleton (^{<depth}width,
/// subset) with leaf(x) = the cylinder S_x.
inline FoliageTree<BaireUniverse> std_tree(const StdTreeView& view) {
    FoliageTree<BaireUniverse> f;
    f.skeleton = seq_tree(view.depth, view.width);
    for (NodeId id : f.skeleton.node_ids())
        f.leaf[id] = SetExpr::cylinder(*f.skeleton.label_of(id));
    return f;
}

}  // namespace foliage
