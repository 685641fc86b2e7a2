#include "hsu/subtree.hpp"

#include "hsu/errors.hpp"

namespace hsu {

std::vector<SubTreeBatch> sample_subtrees(const ProgramAst& ast, const Vocabulary& vocab) {
    std::vector<SubTreeBatch> batches;
    const NodeVector pad = encode_pad(vocab);
    for (NodeId id : ast.internal_nodes()) {
        const AstNode& node = ast.node(id);
        if (node.children.size() > vocab.d_max())
            throw DegreeOverflow(id, node.children.size(), vocab.d_max());
        SubTreeBatch batch;
        batch.origin = id;
        batch.parent = encode_node(node, vocab);
        batch.real_count = node.children.size();
        batch.children.reserve(vocab.d_max());
        batch.child_mask.assign(vocab.d_max(), false);
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            batch.children.push_back(encode_node(ast.node(node.children[i]), vocab));
            batch.child_mask[i] = true;
        }
        while (batch.children.size() < vocab.d_max()) batch.children.push_back(pad);
        batches.push_back(std::move(batch));
    }
    return batches;
}

}  // namespace hsu
