#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hsu/grammar.hpp"
#include "hsu/model_io.hpp"
#include "hsu/network.hpp"

namespace hsu {

struct GenerationConfig {
    std::size_t max_depth = 12;    // levels of content-driven recursion
    std::size_t max_nodes = 4096;  // total node budget per generated tree
};

struct GenerationResult {
    ProgramAst ast;
    bool depth_exceeded = false;
};

// Top-down generation from an intention text: the intention becomes the root
// node vector, children are decoded greedily and re-encoded as the next
// parent inputs until statement leaves or max_depth.
GenerationResult generate_program(const std::string& intention, const Model& model,
                                  const GenerationConfig& config = {});

// Bottom-up interpretation: infers every internal node's content from its
// children, level by level, and returns the root prediction's token slots.
std::vector<std::string> interpret_program(const ProgramAst& truncated, const Model& model);

// Context-free next-sibling prediction for one statement line; empty token
// list means end of siblings. Throws SyntaxError when the line does not
// parse as a single statement.
std::vector<Token> next_line(const std::string& line, const Model& model);

struct CompletionResult {
    ProgramAst ast;
    bool ambiguous = false;       // a fragment line occurs >1 time in the corpus
    bool depth_exceeded = false;  // no module root found within max_depth levels
};

// Completes a fragment: rebuilds the sibling chain through the left/right
// heads, infers ancestors bottom-up until a module-typed node appears, then
// regenerates the whole tree top-down from it.
CompletionResult complete_program(const std::string& fragment, const Model& model,
                                  const GenerationConfig& config = {});

// Building blocks shared with the evaluation harness.
NodeContent predict_right_sibling(const NodeVector& node, const Model& model);
NodeContent predict_left_sibling(const NodeVector& node, const Model& model);

}  // namespace hsu
