#pragma once

#include <vector>

#include "hsu/ast.hpp"
#include "hsu/encoding.hpp"

namespace hsu {

// One parent node with its padded ordered children: the atomic training
// instance. Pad entries carry the reserved pad encoding.
struct SubTreeBatch {
    NodeVector parent;
    std::vector<NodeVector> children;  // exactly d_max entries
    std::vector<bool> child_mask;      // true for real children
    std::size_t real_count = 0;
    NodeId origin = kNoNode;  // internal node the batch was sampled from
};

// One batch per internal node of a truncated AST. Throws DegreeOverflow when
// a node has more than d_max children.
std::vector<SubTreeBatch> sample_subtrees(const ProgramAst& ast, const Vocabulary& vocab);

}  // namespace hsu
