#include "hsu/encoding.hpp"

#include <algorithm>
#include <set>

#include "hsu/errors.hpp"
#include "hsu/grammar.hpp"

namespace hsu {

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::size_t k, std::size_t d_max)
    : tokens_(std::move(tokens)), k_(k), d_max_(d_max) {
    syntax_types_.reserve(kSyntaxTypeCount);
    for (std::size_t i = 0; i < kSyntaxTypeCount; ++i)
        syntax_types_.emplace_back(to_string(static_cast<SyntaxType>(i)));
}

std::uint32_t Vocabulary::token_index(std::string_view text) const {
    auto begin = tokens_.begin() + 2;  // skip the reserved pad/unknown entries
    auto it = std::lower_bound(begin, tokens_.end(), text);
    if (it != tokens_.end() && *it == text)
        return static_cast<std::uint32_t>(it - tokens_.begin());
    return kUnknownIndex;
}

std::vector<double> NodeVector::to_dense(const SlotLayout& layout) const {
    std::vector<double> dense(layout.width(), 0.0);
    dense[syntax] = 1.0;
    for (std::size_t slot = 0; slot < layout.slots; ++slot) {
        std::uint32_t index = slot < tokens.size() ? tokens[slot] : kPadIndex;
        dense[layout.token_slot_offset(slot) + index] = 1.0;
    }
    return dense;
}

Vocabulary build_vocabulary(std::span<const ProgramAst> asts) {
    if (asts.empty()) throw EmptyCorpus();
    std::set<std::string> seen;
    std::size_t k = 1;
    std::size_t d_max = 1;
    for (const ProgramAst& ast : asts) {
        for (NodeId id : ast.preorder()) {
            const AstNode& node = ast.node(id);
            for (const Token& t : node.tokens) seen.insert(t.text);
            for (const Token& t : node.intention) seen.insert(t.text);
            k = std::max({k, node.tokens.size(), node.intention.size()});
            d_max = std::max(d_max, node.children.size());
        }
    }
    std::vector<std::string> tokens{"<pad>", "<unk>"};
    tokens.insert(tokens.end(), seen.begin(), seen.end());
    return Vocabulary(std::move(tokens), k, d_max);
}

NodeVector encode_content(const NodeContent& content, const Vocabulary& vocab) {
    NodeVector vec;
    vec.syntax = static_cast<std::uint32_t>(content.type);
    vec.tokens.assign(vocab.k(), kPadIndex);
    for (std::size_t i = 0; i < content.tokens.size() && i < vocab.k(); ++i)
        vec.tokens[i] = vocab.token_index(content.tokens[i]);
    return vec;
}

NodeVector encode_node(const AstNode& node, const Vocabulary& vocab) {
    return encode_content(content_of(node), vocab);
}

NodeVector encode_pad(const Vocabulary& vocab) {
    NodeVector vec;
    vec.syntax = kPadIndex;
    vec.tokens.assign(vocab.k(), kPadIndex);
    return vec;
}

namespace {

std::size_t argmax(std::span<const double> values, std::size_t begin, std::size_t end) {
    std::size_t best = begin;
    for (std::size_t i = begin + 1; i < end; ++i)
        if (values[i] > values[best]) best = i;
    return best - begin;
}

}  // namespace

NodeContent decoded_content(std::span<const double> probs, const Vocabulary& vocab) {
    const SlotLayout layout = vocab.layout();
    if (probs.size() != layout.width()) throw MalformedVector(probs.size(), layout.width());

    NodeContent content;
    content.type = static_cast<SyntaxType>(argmax(probs, 0, layout.syntax_count));
    std::vector<std::uint32_t> indices(layout.slots);
    for (std::size_t slot = 0; slot < layout.slots; ++slot) {
        std::size_t offset = layout.token_slot_offset(slot);
        indices[slot] = static_cast<std::uint32_t>(argmax(probs, offset, offset + layout.token_count));
    }
    while (!indices.empty() && indices.back() == kPadIndex) indices.pop_back();
    for (std::uint32_t index : indices) content.tokens.push_back(vocab.token_text(index));
    return content;
}

std::pair<SyntaxType, std::vector<Token>> decode_vector(std::span<const double> probs,
                                                        const Vocabulary& vocab) {
    NodeContent content = decoded_content(probs, vocab);
    std::vector<Token> tokens;
    tokens.reserve(content.tokens.size());
    for (std::string& text : content.tokens) {
        Token token = classify_token(text);
        if (content.type == SyntaxType::module) token.kind = SyntaxType::comment_token;
        tokens.push_back(std::move(token));
    }
    return {content.type, std::move(tokens)};
}

}  // namespace hsu
