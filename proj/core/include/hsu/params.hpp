#pragma once

#include <random>
#include <string>

#include "hsu/tape.hpp"
#include "hsu/units.hpp"

namespace hsu::nn {

struct HeadWeights {
    Matrix weight;  // D x hidden
    Matrix bias;    // D x 1
};

// Every learned matrix of the model: the input embedding, the two ESU weight
// sets (leaf and aggregate child widths), the ISU weight set, and the four
// projection heads.
struct HsuParameters {
    std::size_t hidden = 0;
    std::size_t input_dim = 0;  // D
    std::size_t max_degree = 0;

    Matrix embed;  // hidden x D
    EsuWeights esu_leaf;
    EsuWeights esu_agg;
    IsuWeights isu;
    HeadWeights down, up, left, right;

    static HsuParameters init(std::size_t hidden, std::size_t input_dim, std::size_t max_degree,
                              std::mt19937& rng, double bound = 0.08);

    template <class F>
    void for_each_matrix(F&& f) {
        visit(*this, std::forward<F>(f));
    }
    template <class F>
    void for_each_matrix(F&& f) const {
        visit(*this, std::forward<F>(f));
    }

private:
    template <class Self, class F>
    static void visit(Self& self, F&& f) {
        f("embed", self.embed);
        f("esu_leaf.forget", self.esu_leaf.forget);
        f("esu_leaf.evolve", self.esu_leaf.evolve);
        f("esu_leaf.update", self.esu_leaf.update);
        f("esu_leaf.select_z", self.esu_leaf.select_z);
        f("esu_leaf.select_r", self.esu_leaf.select_r);
        f("esu_agg.forget", self.esu_agg.forget);
        f("esu_agg.evolve", self.esu_agg.evolve);
        f("esu_agg.update", self.esu_agg.update);
        f("esu_agg.select_z", self.esu_agg.select_z);
        f("esu_agg.select_r", self.esu_agg.select_r);
        f("isu.forget", self.isu.forget);
        f("isu.inherit", self.isu.inherit);
        f("isu.combine", self.isu.combine);
        f("isu.select_y", self.isu.select_y);
        f("isu.select_s", self.isu.select_s);
        f("down.weight", self.down.weight);
        f("down.bias", self.down.bias);
        f("up.weight", self.up.weight);
        f("up.bias", self.up.bias);
        f("left.weight", self.left.weight);
        f("left.bias", self.left.bias);
        f("right.weight", self.right.weight);
        f("right.bias", self.right.bias);
    }
};

// p <- p - lr * g for every parameter with a recorded gradient. Throws
// NonFiniteGradient before touching anything when a gradient is not finite.
void sgd_step(HsuParameters& params, const Gradients& grads, double lr);

}  // namespace hsu::nn
