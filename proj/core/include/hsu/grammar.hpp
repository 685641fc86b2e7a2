#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "hsu/ast.hpp"

namespace hsu {

// One physical source line: 1-based number, indent width in characters, unit tokens.
struct TokenizedLine {
    std::size_t number = 0;
    std::size_t indent = 0;
    bool is_comment = false;
    std::vector<Token> tokens;
};

// Splits source text into lines of unit tokens. Operators are separated from
// identifiers regardless of spacing; comment lines ('#' first) become
// comment-token lists. Blank lines yield entries with no tokens.
std::vector<TokenizedLine> tokenize(std::string_view source);

Token classify_token(std::string_view text);
bool is_keyword(std::string_view text);

// Words of the maximal leading run of '#' lines, in order, original case.
std::vector<std::string> leading_comment_words(const std::vector<TokenizedLine>& lines);

// Builds the Program AST from tokenized lines. Compound statements (for,
// while, if/elif/else, def, class) become wrapper nodes owning alternating
// condition/body children; the condition is the header line itself.
ProgramAst parse(const std::vector<TokenizedLine>& lines);
ProgramAst parse_source(std::string_view source);

// Fragment-tolerant variant: a compound header at the end of the input may
// lack its body, yielding a wrapper with an empty body container.
ProgramAst parse_fragment(std::string_view source);

inline constexpr std::size_t kNoTokenLimit = std::numeric_limits<std::size_t>::max();

// Flattens expression subtrees into their owning statement's token list so
// that every leaf is a statement node. Throws TruncationOverflow when a leaf
// would exceed `max_tokens`.
ProgramAst truncate(const ProgramAst& ast, std::size_t max_tokens = kNoTokenLimit);

// Lower-cased whitespace-split words of a comment, '#' markers stripped.
std::vector<std::string> intention_words(std::string_view comment,
                                         std::size_t max_words = kNoTokenLimit);

// Lower-cases and splits `comment`, keeps the first `max_words`, and stores
// the words as the root intention.
void attach_intention(ProgramAst& ast, std::string_view comment,
                      std::size_t max_words = kNoTokenLimit);

// One line per leaf statement, tokens joined by single spaces, one tab per
// nesting level. tokenize(emit_source(ast)) equals the leaf token sequence.
std::string emit_source(const ProgramAst& ast);

// Leaf token texts in source order (the sequence preserved by emit_source).
std::vector<std::string> leaf_token_texts(const ProgramAst& ast);

// Structural classification of decoded contents; shared by the tasks.
// A wrapper content opens a block: function/class headers (with ':') or a
// loop/if header carried without its trailing ':'.
bool is_compound_header(const NodeContent& content);
bool opens_block(const NodeContent& content);
// Condition leaves under a wrapper start with the construct keyword; body
// containers carry the header minus that keyword.
bool starts_with_block_keyword(const NodeContent& content);

}  // namespace hsu
