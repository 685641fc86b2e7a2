#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hsu/encoding.hpp"
#include "hsu/linalg.hpp"

namespace hsu::nn {

// Gradients keyed by parameter matrix. Parameters never touched by the
// forward pass are simply absent and read as zero.
struct Gradients {
    std::unordered_map<const Matrix*, Matrix> by_matrix;

    Matrix& slot(const Matrix& param);
    const Matrix* find(const Matrix& param) const;
    void add_scaled(const Gradients& other, double scale);
    void scale(double factor);
    void zero();  // keeps the slots, clears their values
};

// Reverse-mode tape over vector-valued primitives. Node ids are indices into
// the recording order, so the tape is topologically sorted by construction.
class Tape {
public:
    using NodeRef = int;
    static constexpr NodeRef kNull = -1;

    NodeRef input(Vector value);
    NodeRef zeros(std::size_t n);
    // Sum of the parameter columns selected by the one-hot slots of `x`.
    NodeRef embed(const Matrix& weight, const NodeVector& x, const SlotLayout& layout);
    NodeRef matvec(const Matrix& weight, NodeRef x);
    NodeRef affine(const Matrix& weight, const Matrix& bias, NodeRef x);  // W x + b
    NodeRef concat(const std::vector<NodeRef>& parts);
    NodeRef sigmoid(NodeRef x);
    NodeRef tanh(NodeRef x);
    NodeRef hadamard(NodeRef a, NodeRef b);
    NodeRef one_minus(NodeRef a);
    NodeRef add(NodeRef a, NodeRef b);
    // Scalar: sum over slots of -target[j] * log softmax(logits)[j].
    NodeRef slot_cross_entropy(NodeRef logits, const NodeVector& target, const SlotLayout& layout);
    NodeRef scale_add(NodeRef a, NodeRef b, double ca, double cb);  // scalar combine

    const Vector& value(NodeRef id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    std::size_t size() const { return nodes_.size(); }
    void reset();

    // Accumulates d(node)/d(param) into `grads`, seeding the node with 1.
    void backward(NodeRef node, Gradients& grads);

private:
    enum class Op : std::uint8_t {
        input, embed, matvec, affine, concat, sigmoid, tanh_fn,
        hadamard, one_minus, add, cross_entropy, scale_add,
    };

    struct Node {
        Op op;
        NodeRef a = kNull;
        NodeRef b = kNull;
        const Matrix* weight = nullptr;
        const Matrix* bias = nullptr;
        std::vector<NodeRef> list;           // concat inputs
        std::vector<std::size_t> bits;       // embed: active dense indices
        Vector value;
        Vector grad;
        Vector aux;  // cross_entropy: softmax probabilities; embed unused
        double ca = 1.0, cb = 1.0;
    };

    Node& touch_grad(NodeRef id);
    NodeRef push(Node node);

    std::vector<Node> nodes_;
};

// Per-slot softmax of a raw logit vector (inference-side counterpart of the
// tape's fused cross-entropy).
Vector slot_softmax(const Vector& logits, const SlotLayout& layout);

}  // namespace hsu::nn
