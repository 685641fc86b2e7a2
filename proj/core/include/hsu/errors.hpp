#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsu {

// Base for every error raised by the library. CLI maps these to exit code 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- grammar ---

struct UnterminatedString : Error {
    std::size_t line;
    explicit UnterminatedString(std::size_t line_no)
        : Error("unterminated string literal at line " + std::to_string(line_no)), line(line_no) {}
};

struct MixedIndent : Error {
    std::size_t line;
    explicit MixedIndent(std::size_t line_no)
        : Error("tabs and spaces mixed in indentation at line " + std::to_string(line_no)), line(line_no) {}
};

struct SyntaxError : Error {
    std::size_t line;
    SyntaxError(std::size_t line_no, const std::string& what)
        : Error("syntax error at line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

struct IndentError : Error {
    std::size_t line;
    explicit IndentError(std::size_t line_no)
        : Error("dedent to unknown indent level at line " + std::to_string(line_no)), line(line_no) {}
};

struct TruncationOverflow : Error {
    std::size_t node;
    TruncationOverflow(std::size_t node_id, std::size_t tokens, std::size_t limit)
        : Error("node " + std::to_string(node_id) + " holds " + std::to_string(tokens) +
                " tokens, limit is " + std::to_string(limit)),
          node(node_id) {}
};

struct DegreeOverflow : Error {
    std::size_t node;
    DegreeOverflow(std::size_t node_id, std::size_t degree, std::size_t limit)
        : Error("node " + std::to_string(node_id) + " has degree " + std::to_string(degree) +
                ", limit is " + std::to_string(limit)),
          node(node_id) {}
};

// --- encoding ---

struct EmptyCorpus : Error {
    EmptyCorpus() : Error("cannot build a vocabulary from an empty corpus") {}
};

struct MalformedVector : Error {
    MalformedVector(std::size_t got, std::size_t want)
        : Error("vector of length " + std::to_string(got) + " does not match encoding width " +
                std::to_string(want)) {}
};

// --- numeric core ---

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NonFiniteGradient : Error {
    explicit NonFiniteGradient(const std::string& name)
        : Error("non-finite gradient for parameter " + name) {}
};

struct NonFiniteLoss : Error {
    std::size_t batch;
    explicit NonFiniteLoss(std::size_t batch_index)
        : Error("non-finite loss on sub-tree batch " + std::to_string(batch_index)), batch(batch_index) {}
};

// --- persistence ---

struct VersionMismatch : Error {
    VersionMismatch(unsigned got, unsigned want)
        : Error("model file version " + std::to_string(got) + ", expected " + std::to_string(want)) {}
};

struct CorruptModel : Error {
    explicit CorruptModel(const std::string& what) : Error("corrupt model file: " + what) {}
};

}  // namespace hsu
