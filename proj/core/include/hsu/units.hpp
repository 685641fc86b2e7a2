#pragma once

#include "hsu/linalg.hpp"
#include "hsu/tape.hpp"

namespace hsu::nn {

// Evolutional Sequential Unit weights. Every matrix maps the concatenation
// [h_sibling, h_children] to the width of its elementwise partner; the
// children side is one hidden vector for the leaf variant and d_max of them
// for the aggregate, which is what the evolve gate multiplies.
struct EsuWeights {
    Matrix forget;    // gate f, pairs with h_sibling
    Matrix evolve;    // gate e, pairs with h_children
    Matrix update;    // W_u inside the tanh terms
    Matrix select_z;  // selection gate z
    Matrix select_r;  // selection gate r

    std::size_t hidden() const { return forget.rows; }
    std::size_t child_width() const { return forget.cols - forget.rows; }
};

// Inherited Sequential Unit weights over [h_sibling, h_father].
struct IsuWeights {
    Matrix forget;    // gate g
    Matrix inherit;   // gate t
    Matrix combine;   // W_v inside the tanh terms
    Matrix select_y;  // selection gate y
    Matrix select_s;  // selection gate s

    std::size_t hidden() const { return forget.rows; }
};

EsuWeights make_esu_weights(std::size_t hidden, std::size_t child_width, std::mt19937& rng,
                            double bound = 0.08);
IsuWeights make_isu_weights(std::size_t hidden, std::mt19937& rng, double bound = 0.08);

// Tape-recorded forward passes; pass Tape::kNull for a missing sibling (the
// null state is the zero vector).
Tape::NodeRef esu_forward(Tape& tape, Tape::NodeRef h_sibling, Tape::NodeRef h_children,
                          const EsuWeights& weights);
Tape::NodeRef isu_forward(Tape& tape, Tape::NodeRef h_sibling, Tape::NodeRef h_father,
                          const IsuWeights& weights);

// Pure counterparts; an empty sibling vector means null.
Vector esu_forward(const Vector& h_sibling, const Vector& h_children, const EsuWeights& weights);
Vector isu_forward(const Vector& h_sibling, const Vector& h_father, const IsuWeights& weights);

// Test hooks: the gate evaluations and the four-term combination with
// explicitly supplied gate vectors.
struct GateValues {
    Vector forget;  // f (ESU) or g (ISU)
    Vector carry;   // e (ESU) or t (ISU)
    Vector select_a;
    Vector select_b;
};

GateValues esu_gates(const Vector& h_sibling, const Vector& h_children, const EsuWeights& weights);
GateValues isu_gates(const Vector& h_sibling, const Vector& h_father, const IsuWeights& weights);

Vector gated_combination(const Vector& h_sibling, const Vector& h_other, const GateValues& gates,
                         const Matrix& mixer);

}  // namespace hsu::nn
