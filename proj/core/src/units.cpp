#include "hsu/units.hpp"

#include <cmath>

#include "hsu/errors.hpp"

namespace hsu::nn {

namespace {

Matrix uniform_matrix(std::size_t rows, std::size_t cols, std::mt19937& rng, double bound) {
    Matrix m(rows, cols);
    m.fill_uniform(bound, rng);
    return m;
}

Vector sigmoid_of(Vector v) {
    for (double& x : v) x = 1.0 / (1.0 + std::exp(-x));
    return v;
}

Vector concat_pair(const Vector& a, const Vector& b) {
    Vector out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// The shared four-term gated body of both units over a tape.
Tape::NodeRef unit_body(Tape& tape, Tape::NodeRef sibling, Tape::NodeRef other,
                        const Matrix& forget, const Matrix& carry, const Matrix& mixer,
                        const Matrix& select_a, const Matrix& select_b) {
    auto cat = tape.concat({sibling, other});
    auto f = tape.sigmoid(tape.matvec(forget, cat));
    auto c = tape.sigmoid(tape.matvec(carry, cat));
    auto a = tape.sigmoid(tape.matvec(select_a, cat));
    auto b = tape.sigmoid(tape.matvec(select_b, cat));

    auto sibling_updated = tape.hadamard(f, sibling);
    auto other_updated = tape.hadamard(c, other);

    auto t_uu = tape.tanh(tape.matvec(mixer, tape.concat({sibling_updated, other_updated})));
    auto t_ou = tape.tanh(tape.matvec(mixer, tape.concat({sibling, other_updated})));
    auto t_uo = tape.tanh(tape.matvec(mixer, tape.concat({sibling_updated, other})));
    auto t_oo = tape.tanh(tape.matvec(mixer, tape.concat({sibling, other})));

    auto not_a = tape.one_minus(a);
    auto not_b = tape.one_minus(b);
    auto term1 = tape.hadamard(tape.hadamard(a, b), t_uu);
    auto term2 = tape.hadamard(tape.hadamard(not_a, b), t_ou);
    auto term3 = tape.hadamard(tape.hadamard(a, not_b), t_uo);
    auto term4 = tape.hadamard(tape.hadamard(not_a, not_b), t_oo);
    return tape.add(tape.add(term1, term2), tape.add(term3, term4));
}

}  // namespace

EsuWeights make_esu_weights(std::size_t hidden, std::size_t child_width, std::mt19937& rng,
                            double bound) {
    const std::size_t in = hidden + child_width;
    return EsuWeights{
        uniform_matrix(hidden, in, rng, bound),       // forget pairs with the sibling state
        uniform_matrix(child_width, in, rng, bound),  // evolve pairs with the children input
        uniform_matrix(hidden, in, rng, bound),
        uniform_matrix(hidden, in, rng, bound),
        uniform_matrix(hidden, in, rng, bound),
    };
}

IsuWeights make_isu_weights(std::size_t hidden, std::mt19937& rng, double bound) {
    const std::size_t in = 2 * hidden;
    return IsuWeights{
        uniform_matrix(hidden, in, rng, bound), uniform_matrix(hidden, in, rng, bound),
        uniform_matrix(hidden, in, rng, bound), uniform_matrix(hidden, in, rng, bound),
        uniform_matrix(hidden, in, rng, bound),
    };
}

Tape::NodeRef esu_forward(Tape& tape, Tape::NodeRef h_sibling, Tape::NodeRef h_children,
                          const EsuWeights& weights) {
    if (h_sibling == Tape::kNull) h_sibling = tape.zeros(weights.hidden());
    if (tape.value(h_children).size() != weights.child_width())
        throw DimensionMismatch("child input does not match the ESU weight variant");
    return unit_body(tape, h_sibling, h_children, weights.forget, weights.evolve, weights.update,
                     weights.select_z, weights.select_r);
}

Tape::NodeRef isu_forward(Tape& tape, Tape::NodeRef h_sibling, Tape::NodeRef h_father,
                          const IsuWeights& weights) {
    if (h_sibling == Tape::kNull) h_sibling = tape.zeros(weights.hidden());
    if (tape.value(h_father).size() != weights.hidden())
        throw DimensionMismatch("father state does not match the ISU width");
    return unit_body(tape, h_sibling, h_father, weights.forget, weights.inherit, weights.combine,
                     weights.select_y, weights.select_s);
}

Vector esu_forward(const Vector& h_sibling, const Vector& h_children, const EsuWeights& weights) {
    Tape tape;
    auto sibling = h_sibling.empty() ? Tape::kNull : tape.input(h_sibling);
    auto out = esu_forward(tape, sibling, tape.input(h_children), weights);
    return tape.value(out);
}

Vector isu_forward(const Vector& h_sibling, const Vector& h_father, const IsuWeights& weights) {
    Tape tape;
    auto sibling = h_sibling.empty() ? Tape::kNull : tape.input(h_sibling);
    auto out = isu_forward(tape, sibling, tape.input(h_father), weights);
    return tape.value(out);
}

namespace {

GateValues gates_of(const Vector& sibling, const Vector& other, const Matrix& forget,
                    const Matrix& carry, const Matrix& select_a, const Matrix& select_b) {
    const Vector cat = concat_pair(sibling, other);
    Vector tmp;
    GateValues gates;
    matvec(forget, cat, tmp);
    gates.forget = sigmoid_of(tmp);
    matvec(carry, cat, tmp);
    gates.carry = sigmoid_of(tmp);
    matvec(select_a, cat, tmp);
    gates.select_a = sigmoid_of(tmp);
    matvec(select_b, cat, tmp);
    gates.select_b = sigmoid_of(tmp);
    return gates;
}

}  // namespace

GateValues esu_gates(const Vector& h_sibling, const Vector& h_children, const EsuWeights& weights) {
    Vector sibling = h_sibling.empty() ? Vector(weights.hidden(), 0.0) : h_sibling;
    return gates_of(sibling, h_children, weights.forget, weights.evolve, weights.select_z,
                    weights.select_r);
}

GateValues isu_gates(const Vector& h_sibling, const Vector& h_father, const IsuWeights& weights) {
    Vector sibling = h_sibling.empty() ? Vector(weights.hidden(), 0.0) : h_sibling;
    return gates_of(sibling, h_father, weights.forget, weights.inherit, weights.select_y,
                    weights.select_s);
}

Vector gated_combination(const Vector& h_sibling, const Vector& h_other, const GateValues& gates,
                         const Matrix& mixer) {
    const std::size_t n = h_sibling.size();
    Vector sibling_updated(n), other_updated(h_other.size());
    for (std::size_t i = 0; i < n; ++i) sibling_updated[i] = gates.forget[i] * h_sibling[i];
    for (std::size_t i = 0; i < h_other.size(); ++i) other_updated[i] = gates.carry[i] * h_other[i];

    auto mixed = [&](const Vector& s, const Vector& o) {
        Vector out;
        matvec(mixer, concat_pair(s, o), out);
        for (double& x : out) x = std::tanh(x);
        return out;
    };
    const Vector t_uu = mixed(sibling_updated, other_updated);
    const Vector t_ou = mixed(h_sibling, other_updated);
    const Vector t_uo = mixed(sibling_updated, h_other);
    const Vector t_oo = mixed(h_sibling, h_other);

    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = gates.select_a[i];
        const double b = gates.select_b[i];
        out[i] = a * b * t_uu[i] + (1.0 - a) * b * t_ou[i] + a * (1.0 - b) * t_uo[i] +
                 (1.0 - a) * (1.0 - b) * t_oo[i];
    }
    return out;
}

}  // namespace hsu::nn
