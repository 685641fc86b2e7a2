#include "hsu/tasks.hpp"

#include <algorithm>

#include "hsu/errors.hpp"

namespace hsu {

using nn::Tape;

namespace {

std::vector<Token> content_tokens(const NodeContent& content) {
    std::vector<Token> tokens;
    tokens.reserve(content.tokens.size());
    for (const std::string& text : content.tokens) {
        Token token = classify_token(text);
        if (content.type == SyntaxType::module) token.kind = SyntaxType::comment_token;
        tokens.push_back(std::move(token));
    }
    return tokens;
}

NodeContent head_prediction(const NodeVector& node, const Model& model,
                            const nn::HeadWeights& head) {
    Tape tape;
    auto embedded = tape.embed(model.params.embed, node, model.layout());
    auto state = nn::esu_forward(tape, Tape::kNull, embedded, model.params.esu_leaf);
    auto logits = tape.affine(head.weight, head.bias, state);
    return decoded_content(nn::slot_softmax(tape.value(logits), model.layout()), model.vocab);
}

// Right prediction from the last state of a left-to-right ESU chain over the
// whole reconstructed sibling list.
NodeContent chain_right_prediction(const std::vector<NodeContent>& chain, const Model& model) {
    Tape tape;
    Tape::NodeRef state = Tape::kNull;
    for (const NodeContent& content : chain) {
        auto embedded =
            tape.embed(model.params.embed, encode_content(content, model.vocab), model.layout());
        state = nn::esu_forward(tape, state, embedded, model.params.esu_leaf);
    }
    auto logits = tape.affine(model.params.right.weight, model.params.right.bias, state);
    return decoded_content(nn::slot_softmax(tape.value(logits), model.layout()), model.vocab);
}

class Generator {
public:
    Generator(const Model& model, const GenerationConfig& config) : model_(model), config_(config) {}

    bool depth_exceeded() const { return depth_exceeded_; }

    // Expands `parent` by decoding its predicted children and recursing on the
    // ones that open blocks; `parent_is_wrapper` switches the child roles to
    // the condition/body alternation.
    void expand(ProgramAst& ast, NodeId parent_id, const NodeContent& parent_content,
                bool parent_is_wrapper, std::size_t depth) {
        auto distributions = top_down_pass(encode_content(parent_content, model_.vocab),
                                           model_.params, model_.layout());
        std::vector<NodeContent> accepted;
        for (const nn::Vector& distribution : distributions) {
            NodeContent child = decoded_content(distribution, model_.vocab);
            if (child.type == SyntaxType::pad) continue;
            accepted.push_back(child);
            NodeId child_id = ast.add_node(child.type, content_tokens(child), parent_id);
            bool recurse, child_is_wrapper;
            if (parent_is_wrapper) {
                // alternating children: keyword-led header line, then its body
                const bool is_condition = starts_with_block_keyword(child);
                ast.node(child_id).role = is_condition ? NodeRole::condition : NodeRole::body;
                recurse = !is_condition;
                child_is_wrapper = false;
            } else {
                recurse = opens_block(child);
                if (recurse) ast.node(child_id).role = NodeRole::wrapper;
                child_is_wrapper = true;
            }
            if (recurse) {
                if (depth + 1 >= config_.max_depth || ast.size() >= config_.max_nodes) {
                    depth_exceeded_ = true;
                } else {
                    expand(ast, child_id, child, child_is_wrapper, depth + 1);
                }
            }
            // Eq. (1) is masked to real children, so trailing top-down
            // positions carry no signal; the end of the child list is read
            // from the sequential termination the right head was trained on.
            if (chain_right_prediction(accepted, model_).type == SyntaxType::pad) break;
        }
    }

private:
    const Model& model_;
    const GenerationConfig& config_;
    bool depth_exceeded_ = false;
};

GenerationResult generate_from_root(const NodeContent& root_content, const Model& model,
                                    const GenerationConfig& config) {
    GenerationResult result;
    NodeId root = result.ast.add_node(SyntaxType::module);
    result.ast.set_root(root);
    for (const std::string& word : root_content.tokens)
        result.ast.node(root).intention.push_back(Token{word, SyntaxType::comment_token});

    Generator generator(model, config);
    generator.expand(result.ast, root, root_content, /*parent_is_wrapper=*/false, 0);
    result.depth_exceeded = generator.depth_exceeded();
    return result;
}

NodeContent infer_upward(const ProgramAst& ast, NodeId id, const Model& model) {
    const AstNode& node = ast.node(id);
    if (node.is_leaf()) return content_of(node);
    const std::size_t width = model.vocab.d_max();
    std::vector<NodeVector> children;
    children.reserve(width);
    for (NodeId child : node.children) {
        if (children.size() == width) break;
        children.push_back(encode_content(infer_upward(ast, child, model), model.vocab));
    }
    while (children.size() < width) children.push_back(encode_pad(model.vocab));
    auto distribution = bottom_up_pass(children, model.params, model.layout());
    return decoded_content(distribution, model.vocab);
}

}  // namespace

NodeContent predict_right_sibling(const NodeVector& node, const Model& model) {
    return head_prediction(node, model, model.params.right);
}

NodeContent predict_left_sibling(const NodeVector& node, const Model& model) {
    return head_prediction(node, model, model.params.left);
}

GenerationResult generate_program(const std::string& intention, const Model& model,
                                  const GenerationConfig& config) {
    NodeContent root;
    root.type = SyntaxType::module;
    root.tokens = intention_words(intention, model.vocab.k());
    return generate_from_root(root, model, config);
}

std::vector<std::string> interpret_program(const ProgramAst& truncated, const Model& model) {
    return infer_upward(truncated, truncated.root(), model).tokens;
}

std::vector<Token> next_line(const std::string& line, const Model& model) {
    ProgramAst ast = truncate(parse_source(line), model.vocab.k());
    const AstNode& root = ast.node(ast.root());
    if (root.children.size() != 1)
        throw SyntaxError(1, "expected exactly one statement");
    NodeContent content = content_of(ast.node(root.children.front()));
    NodeContent next = predict_right_sibling(encode_content(content, model.vocab), model);
    return content_tokens(next);
}

CompletionResult complete_program(const std::string& fragment, const Model& model,
                                  const GenerationConfig& config) {
    ProgramAst ast = truncate(parse_fragment(fragment), model.vocab.k());
    const AstNode& root = ast.node(ast.root());
    if (root.children.empty()) throw SyntaxError(1, "empty fragment");

    CompletionResult result;
    for (NodeId leaf : ast.leaves()) {
        NodeContent content = content_of(ast.node(leaf));
        if (std::find(model.duplicates.begin(), model.duplicates.end(), content) !=
            model.duplicates.end())
            result.ambiguous = true;
    }

    std::vector<NodeContent> chain;
    for (NodeId child : root.children) chain.push_back(content_of(ast.node(child)));

    const std::size_t width = model.vocab.d_max();
    for (std::size_t level = 0; level < config.max_depth; ++level) {
        // Leftward: candidates from the left head, accepted only when the
        // right head maps them back onto the current chain start. A block's
        // first element has no trained left prediction, so the cross-check is
        // what terminates the walk there.
        while (chain.size() < width) {
            NodeContent candidate =
                predict_left_sibling(encode_content(chain.front(), model.vocab), model);
            if (candidate.type == SyntaxType::pad) break;
            if (!(predict_right_sibling(encode_content(candidate, model.vocab), model) ==
                  chain.front()))
                break;
            chain.insert(chain.begin(), candidate);
        }
        // Rightward from the rebuilt chain states until the trained pad signal.
        while (chain.size() < width) {
            NodeContent candidate = chain_right_prediction(chain, model);
            if (candidate.type == SyntaxType::pad) break;
            chain.push_back(candidate);
        }

        std::vector<NodeVector> padded;
        padded.reserve(width);
        for (const NodeContent& content : chain)
            padded.push_back(encode_content(content, model.vocab));
        while (padded.size() < width) padded.push_back(encode_pad(model.vocab));
        NodeContent father =
            decoded_content(bottom_up_pass(padded, model.params, model.layout()), model.vocab);

        if (father.type == SyntaxType::module) {
            GenerationResult generated = generate_from_root(father, model, config);
            result.ast = std::move(generated.ast);
            result.depth_exceeded = generated.depth_exceeded;
            return result;
        }
        chain.assign(1, father);
    }

    // No module root within the level budget: partial tree plus warning flag.
    result.depth_exceeded = true;
    NodeId partial_root = result.ast.add_node(SyntaxType::module);
    result.ast.set_root(partial_root);
    for (const NodeContent& content : chain)
        result.ast.add_node(content.type, content_tokens(content), partial_root);
    return result;
}

}  // namespace hsu
