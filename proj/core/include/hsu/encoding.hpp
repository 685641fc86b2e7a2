#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsu/ast.hpp"

namespace hsu {

// Fixed partition of a node vector: one syntax-type slot of width |C|
// followed by k token slots of width |T|.
struct SlotLayout {
    std::size_t syntax_count = 0;  // |C|
    std::size_t token_count = 0;   // |T|
    std::size_t slots = 0;         // k

    std::size_t width() const { return syntax_count + slots * token_count; }
    std::size_t token_slot_offset(std::size_t slot) const {
        return syntax_count + slot * token_count;
    }
};

inline constexpr std::uint32_t kPadIndex = 0;      // pad in both C and T
inline constexpr std::uint32_t kUnknownIndex = 1;  // unknown in T

class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> tokens, std::size_t k, std::size_t d_max);

    const std::vector<std::string>& syntax_types() const { return syntax_types_; }
    const std::vector<std::string>& tokens() const { return tokens_; }
    std::size_t k() const { return k_; }
    std::size_t d_max() const { return d_max_; }

    std::uint32_t token_index(std::string_view text) const;  // kUnknownIndex when absent
    const std::string& token_text(std::uint32_t index) const { return tokens_.at(index); }

    SlotLayout layout() const { return {syntax_types_.size(), tokens_.size(), k_}; }
    std::size_t width() const { return layout().width(); }

private:
    std::vector<std::string> syntax_types_;  // index = SyntaxType value, pad first
    std::vector<std::string> tokens_;        // [0]=pad, [1]=unknown, rest sorted
    std::size_t k_ = 0;
    std::size_t d_max_ = 0;
};

// Binary encoding of one node: one index per slot (exactly one bit set per
// slot when materialized as a dense vector).
struct NodeVector {
    std::uint32_t syntax = kPadIndex;
    std::vector<std::uint32_t> tokens;  // length k, pad-filled

    bool is_pad() const { return syntax == kPadIndex; }
    std::vector<double> to_dense(const SlotLayout& layout) const;
    bool operator==(const NodeVector&) const = default;
};

// T = sorted union of code tokens and intention words behind the reserved
// entries; k and d_max are the corpus maxima. Throws EmptyCorpus.
Vocabulary build_vocabulary(std::span<const ProgramAst> asts);

NodeVector encode_node(const AstNode& node, const Vocabulary& vocab);
NodeVector encode_content(const NodeContent& content, const Vocabulary& vocab);
NodeVector encode_pad(const Vocabulary& vocab);

// Per-slot argmax with ties broken toward the lowest index; trailing
// pad-token predictions are stripped. Throws MalformedVector on bad length.
std::pair<SyntaxType, std::vector<Token>> decode_vector(std::span<const double> probs,
                                                        const Vocabulary& vocab);

NodeContent decoded_content(std::span<const double> probs, const Vocabulary& vocab);

}  // namespace hsu
