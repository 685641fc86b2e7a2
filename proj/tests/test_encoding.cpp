// encoding: vocabulary construction and the node <-> vector mapping.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hsu/corpus.hpp"
#include "hsu/encoding.hpp"
#include "hsu/errors.hpp"
#include "hsu/grammar.hpp"

using namespace hsu;

namespace {

const Corpus& bundled() {
    static Corpus corpus = load_corpus(HSU_CORPUS_DIR);
    return corpus;
}

ProgramAst tiny_program() {
    ProgramAst ast = truncate(parse_source("x = 1"));
    attach_intention(ast, "# assign");
    return ast;
}

}  // namespace

TEST_CASE("vocabulary collects code tokens and intention words behind the reserved slots") {
    std::vector<ProgramAst> corpus{tiny_program()};
    Vocabulary vocab = build_vocabulary(corpus);

    CHECK(vocab.tokens()[kPadIndex] == "<pad>");
    CHECK(vocab.tokens()[kUnknownIndex] == "<unk>");
    for (const char* expected : {"x", "=", "1", "assign"})
        CHECK(vocab.token_index(expected) > kUnknownIndex);
    CHECK(vocab.token_index("missing") == kUnknownIndex);
    CHECK(vocab.syntax_types().size() == kSyntaxTypeCount);
    CHECK(vocab.syntax_types().front() == "pad");
    CHECK(vocab.width() == vocab.syntax_types().size() + vocab.k() * vocab.tokens().size());
}

TEST_CASE("tokens shared between programs appear once") {
    std::vector<ProgramAst> corpus{tiny_program(), tiny_program()};
    Vocabulary once = build_vocabulary({corpus.data(), 1});
    Vocabulary twice = build_vocabulary(corpus);
    CHECK(once.tokens() == twice.tokens());
}

TEST_CASE("vocabulary build over the bundled corpus is deterministic") {
    Vocabulary a = corpus_vocabulary(bundled());
    Vocabulary b = corpus_vocabulary(bundled());
    CHECK(a.tokens() == b.tokens());
    CHECK(a.k() == b.k());
    CHECK(a.d_max() == b.d_max());
    // corpus shape, pinned: longest node and widest block
    CHECK(a.k() == 10);
    CHECK(a.d_max() == 6);
}

TEST_CASE("an empty corpus is rejected") {
    CHECK_THROWS_AS(build_vocabulary({}), EmptyCorpus);
}

TEST_CASE("pad pseudo-nodes encode as all pad slots") {
    Vocabulary vocab({"<pad>", "<unk>", "a"}, 3, 2);
    NodeVector pad = encode_pad(vocab);
    CHECK(pad.syntax == kPadIndex);
    for (auto index : pad.tokens) CHECK(index == kPadIndex);
    CHECK(pad.is_pad());
}

TEST_CASE("statement tokens fill slots left to right, pad-token after") {
    Vocabulary vocab({"<pad>", "<unk>", "1", "=", "x"}, 4, 2);
    AstNode node;
    node.syntax_type = SyntaxType::statement;
    node.tokens = {classify_token("x"), classify_token("="), classify_token("1")};
    NodeVector vec = encode_node(node, vocab);
    CHECK(vec.syntax == static_cast<std::uint32_t>(SyntaxType::statement));
    CHECK(vec.tokens == std::vector<std::uint32_t>{4, 3, 2, kPadIndex});
}

TEST_CASE("out-of-vocabulary tokens map to the unknown index") {
    Vocabulary vocab({"<pad>", "<unk>", "x"}, 2, 2);
    AstNode node;
    node.syntax_type = SyntaxType::statement;
    node.tokens = {classify_token("x"), classify_token("novel")};
    NodeVector vec = encode_node(node, vocab);
    CHECK(vec.tokens == std::vector<std::uint32_t>{2, kUnknownIndex});
}

TEST_CASE("module roots encode their intention words") {
    std::vector<ProgramAst> corpus{tiny_program()};
    Vocabulary vocab = build_vocabulary(corpus);
    NodeVector root = encode_node(corpus[0].node(corpus[0].root()), vocab);
    CHECK(root.syntax == static_cast<std::uint32_t>(SyntaxType::module));
    CHECK(root.tokens[0] == vocab.token_index("assign"));
}

TEST_CASE("every encoded node materializes exactly one bit per slot") {
    Vocabulary vocab = corpus_vocabulary(bundled());
    for (const auto& program : bundled().programs) {
        for (NodeId id : program.ast.preorder()) {
            NodeVector vec = encode_node(program.ast.node(id), vocab);
            auto dense = vec.to_dense(vocab.layout());
            std::size_t bits = 0;
            for (double v : dense) bits += v == 1.0;
            CHECK(bits == 1 + vocab.k());
            CHECK(dense.size() == vocab.width());
        }
    }
}

TEST_CASE("decode is the inverse of encode on all corpus nodes") {
    Vocabulary vocab = corpus_vocabulary(bundled());
    for (const auto& program : bundled().programs) {
        for (NodeId id : program.ast.preorder()) {
            const AstNode& node = program.ast.node(id);
            NodeVector vec = encode_node(node, vocab);
            auto [type, tokens] = decode_vector(vec.to_dense(vocab.layout()), vocab);
            NodeContent expected = content_of(node);
            CHECK(type == expected.type);
            std::vector<std::string> got;
            for (const Token& t : tokens) got.push_back(t.text);
            CHECK(got == expected.tokens);
        }
    }
}

TEST_CASE("uniform slots decode to the lowest index, which is pad") {
    Vocabulary vocab({"<pad>", "<unk>", "a"}, 2, 2);
    std::vector<double> uniform(vocab.width(), 0.0);
    for (std::size_t i = 0; i < kSyntaxTypeCount; ++i) uniform[i] = 1.0 / kSyntaxTypeCount;
    for (std::size_t slot = 0; slot < 2; ++slot)
        for (std::size_t i = 0; i < 3; ++i)
            uniform[vocab.layout().token_slot_offset(slot) + i] = 1.0 / 3.0;
    auto [type, tokens] = decode_vector(uniform, vocab);
    CHECK(type == SyntaxType::pad);
    CHECK(tokens.empty());  // trailing pad-token predictions stripped
}

TEST_CASE("interior pads survive while trailing pads are stripped") {
    Vocabulary vocab({"<pad>", "<unk>", "a"}, 3, 2);
    NodeVector vec;
    vec.syntax = static_cast<std::uint32_t>(SyntaxType::statement);
    vec.tokens = {2, kPadIndex, 2};  // a, <pad>, a
    auto [type, tokens] = decode_vector(vec.to_dense(vocab.layout()), vocab);
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[1].text == "<pad>");
}

TEST_CASE("malformed vector lengths are rejected") {
    Vocabulary vocab({"<pad>", "<unk>", "a"}, 2, 2);
    std::vector<double> wrong(vocab.width() + 1, 0.0);
    CHECK_THROWS_AS(decode_vector(wrong, vocab), MalformedVector);
}
