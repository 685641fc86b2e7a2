// tasks: generation, interpretation, next-line, completion on a memorized
// tiny corpus.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hsu/errors.hpp"
#include "hsu/metrics.hpp"
#include "hsu/tasks.hpp"
#include "test_util.hpp"

using namespace hsu;

namespace {

std::vector<std::string> texts(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const Token& t : tokens) out.push_back(t.text);
    return out;
}

}  // namespace

TEST_CASE("memorized programs regenerate token-exactly from their intentions") {
    const Model& model = testutil::tiny_model();
    for (const auto& program : testutil::tiny_corpus().programs) {
        std::string intention;
        for (const auto& word : program.comment_words) {
            if (!intention.empty()) intention.push_back(' ');
            intention += word;
        }
        GenerationResult result = generate_program(intention, model);
        CHECK_FALSE(result.depth_exceeded);
        CHECK(leaf_token_texts(result.ast) == leaf_token_texts(program.ast));
    }
}

TEST_CASE("generated programs parse back through the grammar") {
    const Model& model = testutil::tiny_model();
    for (const char* intention : {"count down loop", "add two numbers", "unseen words"}) {
        GenerationResult result = generate_program(intention, model);
        CHECK_NOTHROW(parse_source(emit_source(result.ast)));
    }
}

TEST_CASE("generation is deterministic, including from an empty intention") {
    const Model& model = testutil::tiny_model();
    auto a = generate_program("", model);
    auto b = generate_program("", model);
    CHECK(leaf_token_texts(a.ast) == leaf_token_texts(b.ast));
    auto c = generate_program("count down loop", model);
    auto d = generate_program("count down loop", model);
    CHECK(leaf_token_texts(c.ast) == leaf_token_texts(d.ast));
}

TEST_CASE("a tiny depth budget sets the flag and returns a partial tree") {
    const Model& model = testutil::tiny_model();
    GenerationConfig config;
    config.max_depth = 1;
    GenerationResult result = generate_program("count down loop", model, config);
    CHECK(result.depth_exceeded);
    CHECK(result.ast.size() >= 1);
}

TEST_CASE("interpretation recovers the comment tokens of memorized programs") {
    const Model& model = testutil::tiny_model();
    for (const auto& program : testutil::tiny_corpus().programs) {
        NodeContent truth = content_of(program.ast.node(program.ast.root()));
        CHECK(interpret_program(program.ast, model) == truth.tokens);
    }
}

TEST_CASE("interpreting a single-statement module is deterministic") {
    const Model& model = testutil::tiny_model();
    ProgramAst fragment = truncate(parse_source("return total"), model.vocab.k());
    auto a = interpret_program(fragment, model);
    auto b = interpret_program(fragment, model);
    CHECK(a == b);
}

TEST_CASE("next_line recalls the memorized successor and the block end") {
    const Model& model = testutil::tiny_model();
    // mid-block line -> its successor
    auto next = next_line("total = a + b", model);
    CHECK(texts(next) == std::vector<std::string>{"return", "total"});
    // last line of a block -> end of siblings (empty token list, pad type)
    CHECK(next_line("return total", model).empty());
    CHECK(next_line("return result", model).empty());
}

TEST_CASE("next_line rejects unparseable input") {
    const Model& model = testutil::tiny_model();
    CHECK_THROWS_AS(next_line("return )", model), SyntaxError);
    CHECK_THROWS_AS(next_line("", model), SyntaxError);
}

TEST_CASE("sequential predictions on a memorized chain find both neighbors") {
    const Model& model = testutil::tiny_model();
    Corpus corpus = testutil::tiny_corpus();
    const auto& program = corpus.programs[0];  // add_two
    auto batches = sample_subtrees(program.ast, model.vocab);
    // def body: [total = a + b, return total]
    const SubTreeBatch* body = nullptr;
    for (const auto& batch : batches)
        if (batch.real_count == 2 &&
            model.vocab.token_text(batch.children[0].tokens[0]) == "total")
            body = &batch;
    REQUIRE(body != nullptr);
    auto neighbors = sequential_pass(body->children, model.params, model.layout());
    NodeContent right = decoded_content(neighbors[0].right, model.vocab);
    CHECK(right.tokens == std::vector<std::string>{"return", "total"});
    NodeContent left = decoded_content(neighbors[1].left, model.vocab);
    CHECK(left.tokens == std::vector<std::string>{"total", "=", "a", "+", "b"});
    // the last real child predicts pad to its right
    NodeContent end = decoded_content(neighbors[1].right, model.vocab);
    CHECK(end.type == SyntaxType::pad);
}

TEST_CASE("permuting two real children changes the bottom-up distribution") {
    const Model& model = testutil::tiny_model();
    Corpus corpus = testutil::tiny_corpus();
    const auto& program = corpus.programs[0];
    auto batches = sample_subtrees(program.ast, model.vocab);
    const SubTreeBatch* body = nullptr;
    for (const auto& batch : batches)
        if (batch.real_count == 2) body = &batch;
    REQUIRE(body != nullptr);
    auto swapped = body->children;
    std::swap(swapped[0], swapped[1]);
    auto original = bottom_up_pass(body->children, model.params, model.layout());
    auto permuted = bottom_up_pass(swapped, model.params, model.layout());
    CHECK(original != permuted);
}

TEST_CASE("memorized roots expand to their top-level statements") {
    const Model& model = testutil::tiny_model();
    Corpus corpus = testutil::tiny_corpus();
    const auto& program = corpus.programs[2];  // count_down
    NodeVector root = encode_node(program.ast.node(program.ast.root()), model.vocab);
    auto dists = top_down_pass(root, model.params, model.layout());
    NodeContent first = decoded_content(dists[0], model.vocab);
    CHECK(first.type == SyntaxType::function);
    CHECK(first.tokens ==
          std::vector<std::string>{"def", "count_down", "(", "n", ")", ":"});
}

TEST_CASE("completion from any line of a memorized program is exact") {
    const Model& model = testutil::tiny_model();
    for (const auto& program : testutil::tiny_corpus().programs) {
        for (NodeId leaf : program.ast.leaves()) {
            std::string line;
            for (const Token& t : program.ast.node(leaf).tokens) {
                if (!line.empty()) line.push_back(' ');
                line += t.text;
            }
            CompletionResult result = complete_program(line, model);
            CHECK_FALSE(result.ambiguous);
            CHECK(leaf_token_texts(result.ast) == leaf_token_texts(program.ast));
        }
    }
}

TEST_CASE("completion of a full program is a fixed point") {
    const Model& model = testutil::tiny_model();
    for (const auto& program : testutil::tiny_corpus().programs) {
        CompletionResult result = complete_program(emit_source(program.ast), model);
        CHECK(leaf_token_texts(result.ast) == leaf_token_texts(program.ast));
    }
}

TEST_CASE("completion rejects unparseable fragments") {
    const Model& model = testutil::tiny_model();
    CHECK_THROWS_AS(complete_program("def f (", model), SyntaxError);
}

TEST_CASE("a duplicated fragment line raises the ambiguity flag") {
    // two programs share one statement with two distinct successors
    Corpus corpus;
    corpus.programs.push_back(make_program("first",
                                           "# first demo\n"
                                           "def first_demo ( a ) :\n"
                                           "\ttemp = a + 1\n"
                                           "\treturn temp\n"));
    corpus.programs.push_back(make_program("second",
                                           "# second demo\n"
                                           "def second_demo ( a ) :\n"
                                           "\ttemp = a + 1\n"
                                           "\treturn a\n"));
    TrainConfig config;
    config.hidden = 8;
    config.epochs = 0;  // the duplicate table is corpus-derived, not learned
    Model model = train_corpus(corpus, config);
    REQUIRE(model.duplicates.size() == 1);
    CHECK(model.duplicates[0].tokens == std::vector<std::string>{"temp", "=", "a", "+", "1"});

    CompletionResult result = complete_program("temp = a + 1", model, GenerationConfig{3, 64});
    CHECK(result.ambiguous);

    CompletionResult clean = complete_program("return temp", model, GenerationConfig{3, 64});
    CHECK_FALSE(clean.ambiguous);
}
