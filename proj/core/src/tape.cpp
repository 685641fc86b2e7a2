#include "hsu/tape.hpp"

#include <algorithm>
#include <cmath>

#include "hsu/errors.hpp"

namespace hsu::nn {

Matrix& Gradients::slot(const Matrix& param) {
    auto [it, inserted] = by_matrix.try_emplace(&param);
    if (inserted) {
        it->second.rows = param.rows;
        it->second.cols = param.cols;
        it->second.data.assign(param.size(), 0.0);
    }
    return it->second;
}

const Matrix* Gradients::find(const Matrix& param) const {
    auto it = by_matrix.find(&param);
    return it == by_matrix.end() ? nullptr : &it->second;
}

void Gradients::add_scaled(const Gradients& other, double scale) {
    for (const auto& [param, grad] : other.by_matrix) {
        Matrix& mine = slot(*param);
        for (std::size_t i = 0; i < grad.size(); ++i) mine.data[i] += scale * grad.data[i];
    }
}

void Gradients::scale(double factor) {
    for (auto& [param, grad] : by_matrix)
        for (double& v : grad.data) v *= factor;
}

void Gradients::zero() {
    for (auto& [param, grad] : by_matrix) std::fill(grad.data.begin(), grad.data.end(), 0.0);
}

Tape::NodeRef Tape::push(Node node) {
    nodes_.push_back(std::move(node));
    return static_cast<NodeRef>(nodes_.size() - 1);
}

Tape::Node& Tape::touch_grad(NodeRef id) {
    Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.grad.empty()) node.grad.assign(node.value.size(), 0.0);
    return node;
}

void Tape::reset() { nodes_.clear(); }

Tape::NodeRef Tape::input(Vector value) {
    Node node{};
    node.op = Op::input;
    node.value = std::move(value);
    return push(std::move(node));
}

Tape::NodeRef Tape::zeros(std::size_t n) { return input(Vector(n, 0.0)); }

Tape::NodeRef Tape::embed(const Matrix& weight, const NodeVector& x, const SlotLayout& layout) {
    if (weight.cols != layout.width())
        throw DimensionMismatch("embedding width does not match the encoding layout");
    Node node{};
    node.op = Op::embed;
    node.weight = &weight;
    node.bits.push_back(x.syntax);
    for (std::size_t slot = 0; slot < layout.slots; ++slot) {
        std::uint32_t index = slot < x.tokens.size() ? x.tokens[slot] : kPadIndex;
        node.bits.push_back(layout.token_slot_offset(slot) + index);
    }
    node.value.assign(weight.rows, 0.0);
    for (std::size_t r = 0; r < weight.rows; ++r) {
        const double* row = weight.row(r);
        double acc = 0.0;
        for (std::size_t bit : node.bits) acc += row[bit];
        node.value[r] = acc;
    }
    return push(std::move(node));
}

Tape::NodeRef Tape::matvec(const Matrix& weight, NodeRef x) {
    const Vector& in = value(x);
    if (weight.cols != in.size())
        throw DimensionMismatch("matrix of width " + std::to_string(weight.cols) +
                                " applied to vector of length " + std::to_string(in.size()));
    Node node{};
    node.op = Op::matvec;
    node.weight = &weight;
    node.a = x;
    nn::matvec(weight, in, node.value);
    return push(std::move(node));
}

Tape::NodeRef Tape::affine(const Matrix& weight, const Matrix& bias, NodeRef x) {
    const Vector& in = value(x);
    if (weight.cols != in.size() || bias.rows != weight.rows || bias.cols != 1)
        throw DimensionMismatch("affine shapes do not agree");
    Node node{};
    node.op = Op::affine;
    node.weight = &weight;
    node.bias = &bias;
    node.a = x;
    nn::matvec(weight, in, node.value);
    for (std::size_t r = 0; r < weight.rows; ++r) node.value[r] += bias.data[r];
    return push(std::move(node));
}

Tape::NodeRef Tape::concat(const std::vector<NodeRef>& parts) {
    Node node{};
    node.op = Op::concat;
    node.list = parts;
    std::size_t total = 0;
    for (NodeRef part : parts) total += value(part).size();
    node.value.reserve(total);
    for (NodeRef part : parts) {
        const Vector& v = value(part);
        node.value.insert(node.value.end(), v.begin(), v.end());
    }
    return push(std::move(node));
}

Tape::NodeRef Tape::sigmoid(NodeRef x) {
    Node node{};
    node.op = Op::sigmoid;
    node.a = x;
    const Vector& in = value(x);
    node.value.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) node.value[i] = 1.0 / (1.0 + std::exp(-in[i]));
    return push(std::move(node));
}

Tape::NodeRef Tape::tanh(NodeRef x) {
    Node node{};
    node.op = Op::tanh_fn;
    node.a = x;
    const Vector& in = value(x);
    node.value.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) node.value[i] = std::tanh(in[i]);
    return push(std::move(node));
}

Tape::NodeRef Tape::hadamard(NodeRef a, NodeRef b) {
    const Vector& va = value(a);
    const Vector& vb = value(b);
    if (va.size() != vb.size()) throw DimensionMismatch("hadamard operands differ in length");
    Node node{};
    node.op = Op::hadamard;
    node.a = a;
    node.b = b;
    node.value.resize(va.size());
    for (std::size_t i = 0; i < va.size(); ++i) node.value[i] = va[i] * vb[i];
    return push(std::move(node));
}

Tape::NodeRef Tape::one_minus(NodeRef a) {
    Node node{};
    node.op = Op::one_minus;
    node.a = a;
    const Vector& in = value(a);
    node.value.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) node.value[i] = 1.0 - in[i];
    return push(std::move(node));
}

Tape::NodeRef Tape::add(NodeRef a, NodeRef b) {
    const Vector& va = value(a);
    const Vector& vb = value(b);
    if (va.size() != vb.size()) throw DimensionMismatch("add operands differ in length");
    Node node{};
    node.op = Op::add;
    node.a = a;
    node.b = b;
    node.value.resize(va.size());
    for (std::size_t i = 0; i < va.size(); ++i) node.value[i] = va[i] + vb[i];
    return push(std::move(node));
}

namespace {

// Stable per-slot softmax written into probs[begin, end); returns logsumexp.
double softmax_range(const Vector& logits, std::size_t begin, std::size_t end, Vector& probs) {
    double peak = logits[begin];
    for (std::size_t i = begin + 1; i < end; ++i) peak = std::max(peak, logits[i]);
    double total = 0.0;
    for (std::size_t i = begin; i < end; ++i) total += std::exp(logits[i] - peak);
    for (std::size_t i = begin; i < end; ++i) probs[i] = std::exp(logits[i] - peak) / total;
    return peak + std::log(total);
}

}  // namespace

Tape::NodeRef Tape::slot_cross_entropy(NodeRef logits, const NodeVector& target,
                                       const SlotLayout& layout) {
    const Vector& in = value(logits);
    if (in.size() != layout.width()) throw MalformedVector(in.size(), layout.width());
    Node node{};
    node.op = Op::cross_entropy;
    node.a = logits;
    node.aux.assign(in.size(), 0.0);
    node.bits.push_back(target.syntax);
    double loss = softmax_range(in, 0, layout.syntax_count, node.aux) - in[target.syntax];
    for (std::size_t slot = 0; slot < layout.slots; ++slot) {
        std::size_t offset = layout.token_slot_offset(slot);
        std::uint32_t index = slot < target.tokens.size() ? target.tokens[slot] : kPadIndex;
        node.bits.push_back(offset + index);
        loss += softmax_range(in, offset, offset + layout.token_count, node.aux) - in[offset + index];
    }
    node.value = {loss};
    return push(std::move(node));
}

Tape::NodeRef Tape::scale_add(NodeRef a, NodeRef b, double ca, double cb) {
    Node node{};
    node.op = Op::scale_add;
    node.a = a;
    node.b = b;
    node.ca = ca;
    node.cb = cb;
    node.value = {ca * value(a)[0] + cb * value(b)[0]};
    return push(std::move(node));
}

void Tape::backward(NodeRef start, Gradients& grads) {
    touch_grad(start).grad.assign(nodes_[static_cast<std::size_t>(start)].value.size(), 1.0);
    for (NodeRef id = start; id >= 0; --id) {
        Node& node = nodes_[static_cast<std::size_t>(id)];
        if (node.grad.empty()) continue;
        const Vector& g = node.grad;
        switch (node.op) {
            case Op::input:
                break;
            case Op::embed: {
                Matrix& dw = grads.slot(*node.weight);
                for (std::size_t r = 0; r < dw.rows; ++r) {
                    double* row = dw.row(r);
                    for (std::size_t bit : node.bits) row[bit] += g[r];
                }
                break;
            }
            case Op::matvec: {
                Matrix& dw = grads.slot(*node.weight);
                Node& in = touch_grad(node.a);
                outer_add(dw, g, in.value);
                matvec_transposed_add(*node.weight, g, in.grad);
                break;
            }
            case Op::affine: {
                Matrix& dw = grads.slot(*node.weight);
                Matrix& db = grads.slot(*node.bias);
                Node& in = touch_grad(node.a);
                outer_add(dw, g, in.value);
                for (std::size_t r = 0; r < db.rows; ++r) db.data[r] += g[r];
                matvec_transposed_add(*node.weight, g, in.grad);
                break;
            }
            case Op::concat: {
                std::size_t offset = 0;
                for (NodeRef part : node.list) {
                    Node& in = touch_grad(part);
                    for (std::size_t i = 0; i < in.value.size(); ++i) in.grad[i] += g[offset + i];
                    offset += in.value.size();
                }
                break;
            }
            case Op::sigmoid: {
                Node& in = touch_grad(node.a);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const double y = node.value[i];
                    in.grad[i] += g[i] * y * (1.0 - y);
                }
                break;
            }
            case Op::tanh_fn: {
                Node& in = touch_grad(node.a);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const double y = node.value[i];
                    in.grad[i] += g[i] * (1.0 - y * y);
                }
                break;
            }
            case Op::hadamard: {
                Node& ina = touch_grad(node.a);
                Node& inb = touch_grad(node.b);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    ina.grad[i] += g[i] * inb.value[i];
                    inb.grad[i] += g[i] * ina.value[i];
                }
                break;
            }
            case Op::one_minus: {
                Node& in = touch_grad(node.a);
                for (std::size_t i = 0; i < g.size(); ++i) in.grad[i] -= g[i];
                break;
            }
            case Op::add: {
                Node& ina = touch_grad(node.a);
                Node& inb = touch_grad(node.b);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    ina.grad[i] += g[i];
                    inb.grad[i] += g[i];
                }
                break;
            }
            case Op::cross_entropy: {
                Node& in = touch_grad(node.a);
                const double gs = g[0];
                for (std::size_t i = 0; i < in.value.size(); ++i) in.grad[i] += gs * node.aux[i];
                for (std::size_t bit : node.bits) in.grad[bit] -= gs;
                break;
            }
            case Op::scale_add: {
                Node& ina = touch_grad(node.a);
                Node& inb = touch_grad(node.b);
                ina.grad[0] += node.ca * g[0];
                inb.grad[0] += node.cb * g[0];
                break;
            }
        }
    }
}

Vector slot_softmax(const Vector& logits, const SlotLayout& layout) {
    if (logits.size() != layout.width()) throw MalformedVector(logits.size(), layout.width());
    Vector probs(logits.size(), 0.0);
    softmax_range(logits, 0, layout.syntax_count, probs);
    for (std::size_t slot = 0; slot < layout.slots; ++slot) {
        std::size_t offset = layout.token_slot_offset(slot);
        softmax_range(logits, offset, offset + layout.token_count, probs);
    }
    return probs;
}

}  // namespace hsu::nn
