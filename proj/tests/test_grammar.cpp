// grammar: tokenize, parse, truncate, attach_intention, emit_source,
// sample_subtrees, and the corpus-level properties they guarantee.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "hsu/corpus.hpp"
#include "hsu/errors.hpp"
#include "hsu/grammar.hpp"
#include "hsu/subtree.hpp"

using namespace hsu;

namespace {

std::vector<std::string> texts(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const Token& t : tokens) out.push_back(t.text);
    return out;
}

const Corpus& bundled() {
    static Corpus corpus = load_corpus(HSU_CORPUS_DIR);
    return corpus;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Re-renders a token list with randomized spacing that preserves boundaries.
std::string respace(const std::vector<Token>& tokens, std::mt19937& rng) {
    std::uniform_int_distribution<int> extra(0, 3);
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) {
            const std::string& prev = tokens[i - 1].text;
            int spaces = extra(rng);
            if (is_word_char(prev.back()) && is_word_char(tokens[i].text.front()))
                spaces = std::max(spaces, 1);
            out.append(spaces, ' ');
        }
        out += tokens[i].text;
    }
    return out;
}

}  // namespace

TEST_CASE("the pivot assignment tokenizes identically with and without spaces") {
    auto tight = tokenize("pivot_value=seq[pivot_index]");
    auto loose = tokenize("pivot_value = seq [ pivot_index ]");
    REQUIRE(tight.size() == 1);
    REQUIRE(loose.size() == 1);
    const std::vector<std::string> expected = {"pivot_value", "=", "seq", "[", "pivot_index", "]"};
    CHECK(texts(tight[0].tokens) == expected);
    CHECK(texts(loose[0].tokens) == expected);
    CHECK(tight[0].tokens[1].kind == SyntaxType::operator_token);
    CHECK(tight[0].tokens[0].kind == SyntaxType::identifier_token);
}

TEST_CASE("empty source yields an empty line list") { CHECK(tokenize("").empty()); }

TEST_CASE("comment lines become comment-token lists") {
    auto lines = tokenize("# Quick Sort\nx = 1\n");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].is_comment);
    CHECK(texts(lines[0].tokens) == std::vector<std::string>{"Quick", "Sort"});
    CHECK(lines[0].tokens[0].kind == SyntaxType::comment_token);
    CHECK(leading_comment_words(lines) == std::vector<std::string>{"Quick", "Sort"});
}

TEST_CASE("token kinds and multi-character operators") {
    auto lines = tokenize("total += fn ( x ) // 2 <= 'str' 41");
    const auto& t = lines[0].tokens;
    CHECK(t[0].kind == SyntaxType::identifier_token);
    CHECK(t[1].text == "+=");
    CHECK(t[1].kind == SyntaxType::operator_token);
    CHECK(t[6].text == "//");
    CHECK(t[8].text == "<=");
    CHECK(t[9].text == "'str'");
    CHECK(t[9].kind == SyntaxType::literal_token);
    CHECK(t[10].text == "41");
    CHECK(t[10].kind == SyntaxType::literal_token);
}

TEST_CASE("tokenizer error cases") {
    CHECK_THROWS_AS(tokenize("x = 'unterminated"), UnterminatedString);
    CHECK_THROWS_AS(tokenize("if a :\n\t x = 1\n  \ty = 2\n"), MixedIndent);
    CHECK_THROWS_AS(tokenize("x = 1 ?"), SyntaxError);
}

TEST_CASE("whitespace insensitivity holds across the bundled corpus") {
    std::mt19937 rng(99);
    for (const auto& program : bundled().programs) {
        for (const auto& line : tokenize(program.source)) {
            if (line.is_comment || line.tokens.empty()) continue;
            auto relaxed = tokenize(respace(line.tokens, rng));
            REQUIRE(relaxed.size() == 1);
            CHECK(texts(relaxed[0].tokens) == texts(line.tokens));
        }
    }
}

TEST_CASE("the pivot assignment parses into token and expression children") {
    ProgramAst ast = parse_source("pivot_value = seq [ pivot_index ]");
    const AstNode& root = ast.node(ast.root());
    CHECK(root.syntax_type == SyntaxType::module);
    REQUIRE(root.children.size() == 1);
    const AstNode& stmt = ast.node(root.children[0]);
    CHECK(stmt.syntax_type == SyntaxType::statement);

    // pivot_value and '=' stay bare tokens; the subscript composes an expression
    REQUIRE(stmt.children.size() == 3);
    CHECK(ast.node(stmt.children[0]).syntax_type == SyntaxType::identifier_token);
    CHECK(ast.node(stmt.children[1]).syntax_type == SyntaxType::operator_token);
    CHECK(ast.node(stmt.children[1]).tokens[0].text == "=");
    const AstNode& subscript = ast.node(stmt.children[2]);
    CHECK(subscript.syntax_type == SyntaxType::expression);
    auto sub_texts = texts([&] {
        std::vector<Token> collected;
        for (NodeId id : subscript.children) collected.push_back(ast.node(id).tokens[0]);
        return collected;
    }());
    CHECK(sub_texts == std::vector<std::string>{"seq", "[", "pivot_index", "]"});
}

TEST_CASE("a for loop with an if body owns condition and body children") {
    ProgramAst ast = parse_source(
        "for i in range ( left , right ) :\n"
        "\tif seq [ i ] < pivot_value :\n"
        "\t\tstore = store + 1\n");
    const AstNode& root = ast.node(ast.root());
    REQUIRE(root.children.size() == 1);
    const AstNode& for_wrapper = ast.node(root.children[0]);
    CHECK(for_wrapper.syntax_type == SyntaxType::statement);
    CHECK(for_wrapper.role == NodeRole::wrapper);
    REQUIRE(for_wrapper.children.size() == 2);

    const AstNode& condition = ast.node(for_wrapper.children[0]);
    const AstNode& body = ast.node(for_wrapper.children[1]);
    CHECK(condition.role == NodeRole::condition);
    CHECK(body.role == NodeRole::body);

    // the IF statement nests under the FOR body
    REQUIRE(body.children.size() == 1);
    const AstNode& if_wrapper = ast.node(body.children[0]);
    CHECK(if_wrapper.role == NodeRole::wrapper);
    CHECK(ast.node(if_wrapper.children[0]).role == NodeRole::condition);
}

TEST_CASE("a single import parses to a module with one statement child") {
    ProgramAst ast = parse_source("import os");
    const AstNode& root = ast.node(ast.root());
    CHECK(root.syntax_type == SyntaxType::module);
    REQUIRE(root.children.size() == 1);
    CHECK(ast.node(root.children[0]).syntax_type == SyntaxType::statement);
}

TEST_CASE("class definitions, augmented assignment and unary minus parse") {
    ProgramAst ast = parse_source(
        "class Counter :\n"
        "\tdef bump ( self ) :\n"
        "\t\tself . total += 1\n"
        "\t\treturn - 1\n");
    const AstNode& root = ast.node(ast.root());
    REQUIRE(root.children.size() == 1);
    CHECK(ast.node(root.children[0]).syntax_type == SyntaxType::class_def);
}

TEST_CASE("parse rejects malformed input with positioned errors") {
    CHECK_THROWS_AS(parse_source("return )"), SyntaxError);
    CHECK_THROWS_AS(parse_source("x = = 1"), SyntaxError);
    CHECK_THROWS_AS(parse_source("elif x :\n\ty = 1\n"), SyntaxError);
    CHECK_THROWS_AS(parse_source("if x :"), SyntaxError);  // missing block
    CHECK_THROWS_AS(parse_source("if x :\n    y = 1\n  z = 2\n"), IndentError);
    CHECK_THROWS_AS(parse_source("x = 1\n\ty = 2\n"), IndentError);
    try {
        parse_source("x = 1\nx = = 1\n");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("parsing is deterministic") {
    const std::string& source = bundled().programs.front().source;
    CHECK(parse_source(source).same_shape(parse_source(source)));
}

TEST_CASE("truncation flattens the pivot statement to a six-token leaf") {
    ProgramAst ast = truncate(parse_source("pivot_value = seq [ pivot_index ]"));
    auto leaf_ids = ast.leaves();
    REQUIRE(leaf_ids.size() == 1);
    const AstNode& leaf = ast.node(leaf_ids[0]);
    CHECK(leaf.syntax_type == SyntaxType::statement);
    CHECK(leaf.tokens.size() == 6);
    CHECK(texts(leaf.tokens) ==
          std::vector<std::string>{"pivot_value", "=", "seq", "[", "pivot_index", "]"});
}

TEST_CASE("truncation is idempotent across the corpus") {
    for (const auto& program : bundled().programs) {
        ProgramAst once = program.ast;  // already truncated by the loader
        ProgramAst twice = truncate(once);
        CHECK(once.same_shape(twice));
    }
}

TEST_CASE("a statement with more than the limit tokens overflows") {
    ProgramAst ast = parse_source("a = b + c + d");  // 7 tokens
    CHECK_THROWS_AS(truncate(ast, 6), TruncationOverflow);
    CHECK_NOTHROW(truncate(ast, 7));
}

TEST_CASE("attach_intention lower-cases, splits and truncates") {
    ProgramAst ast = parse_source("x = 1");
    attach_intention(ast, "# Quick Sort");
    CHECK(texts(ast.node(ast.root()).intention) == std::vector<std::string>{"quick", "sort"});
    CHECK(ast.node(ast.root()).intention[0].kind == SyntaxType::comment_token);

    attach_intention(ast, "");
    CHECK(ast.node(ast.root()).intention.empty());

    attach_intention(ast, "one two three four five", 3);
    CHECK(texts(ast.node(ast.root()).intention) ==
          std::vector<std::string>{"one", "two", "three"});
}

TEST_CASE("emit_source joins leaf tokens with single spaces and tab nesting") {
    ProgramAst ast = truncate(parse_source("pivot_value=seq[pivot_index]"));
    CHECK(emit_source(ast) == "pivot_value = seq [ pivot_index ]\n");

    ProgramAst empty = parse_source("");
    CHECK(emit_source(empty) == "");
}

TEST_CASE("emit_source reproduces every corpus program body exactly") {
    for (const auto& program : bundled().programs) {
        std::string expected;
        for (const auto& line : tokenize(program.source)) {
            if (line.is_comment || line.tokens.empty()) continue;
            expected.append(line.indent, '\t');
            for (std::size_t i = 0; i < line.tokens.size(); ++i) {
                if (i > 0) expected.push_back(' ');
                expected += line.tokens[i].text;
            }
            expected.push_back('\n');
        }
        CHECK(emit_source(program.ast) == expected);
    }
}

TEST_CASE("leaf tokens survive the emit and tokenize round trip") {
    for (const auto& program : bundled().programs) {
        std::vector<std::string> emitted;
        for (const auto& line : tokenize(emit_source(program.ast)))
            for (const Token& t : line.tokens) emitted.push_back(t.text);
        CHECK(emitted == leaf_token_texts(program.ast));
    }
}

TEST_CASE("sample_subtrees pads children and masks the real ones") {
    Vocabulary vocab({"<pad>", "<unk>", "a", "b", "c", "x", "y", "z", "=", "1", "2", "3"}, 4, 8);
    ProgramAst ast = truncate(parse_source("x = 1\ny = 2\nz = 3\n"));
    auto batches = sample_subtrees(ast, vocab);
    REQUIRE(batches.size() == 1);
    CHECK(batches[0].children.size() == 8);
    CHECK(batches[0].real_count == 3);
    std::size_t real = 0;
    for (bool m : batches[0].child_mask) real += m;
    CHECK(real == 3);
    for (std::size_t i = 3; i < 8; ++i) CHECK(batches[0].children[i].is_pad());
}

TEST_CASE("one batch per internal node across the corpus") {
    Vocabulary vocab = corpus_vocabulary(bundled());
    for (const auto& program : bundled().programs) {
        auto batches = sample_subtrees(program.ast, vocab);
        CHECK(batches.size() == program.ast.internal_nodes().size());
        for (const auto& batch : batches) {
            CHECK(batch.children.size() == vocab.d_max());
            CHECK(batch.real_count >= 1);
        }
    }
}

TEST_CASE("degree overflow is rejected") {
    Vocabulary vocab({"<pad>", "<unk>", "a", "b", "=", "1"}, 3, 2);
    ProgramAst ast = truncate(parse_source("a = 1\nb = 1\na = b\n"));
    CHECK_THROWS_AS(sample_subtrees(ast, vocab), DegreeOverflow);
}

TEST_CASE("corpus contents are unique except the designed duplicate") {
    std::map<NodeContent, std::size_t> leaf_counts;
    std::map<NodeContent, std::size_t> internal_counts;
    for (const auto& program : bundled().programs) {
        for (NodeId id : program.ast.preorder()) {
            const AstNode& node = program.ast.node(id);
            ++(node.is_leaf() ? leaf_counts : internal_counts)[content_of(node)];
        }
    }
    std::vector<NodeContent> duplicated_leaves;
    for (const auto& [content, count] : leaf_counts)
        if (count > 1) duplicated_leaves.push_back(content);

    // exactly the Fig.6-style negative control: one statement, two occurrences
    REQUIRE(duplicated_leaves.size() == 1);
    CHECK(duplicated_leaves[0].tokens == std::vector<std::string>{"swapped", "=", "1"});
    CHECK(leaf_counts[duplicated_leaves[0]] == 2);

    for (const auto& [content, count] : internal_counts) CHECK(count == 1);
}
