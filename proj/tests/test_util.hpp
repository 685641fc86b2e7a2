#pragma once

// Shared helpers for the test suites: tiny synthetic vocabularies, random
// node vectors, a small trainable corpus, and the independent
// finite-difference oracle.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hsu/corpus.hpp"
#include "hsu/encoding.hpp"
#include "hsu/network.hpp"
#include "hsu/params.hpp"
#include "hsu/subtree.hpp"

namespace testutil {

// Three short programs that train to memorization in a few seconds.
inline hsu::Corpus tiny_corpus() {
    hsu::Corpus corpus;
    corpus.programs.push_back(hsu::make_program("add_two",
                                                "# add two numbers\n"
                                                "def add_two ( a , b ) :\n"
                                                "\ttotal = a + b\n"
                                                "\treturn total\n"));
    corpus.programs.push_back(hsu::make_program("double_it",
                                                "# double a number\n"
                                                "def double_it ( x ) :\n"
                                                "\tresult = x * 2\n"
                                                "\treturn result\n"));
    corpus.programs.push_back(hsu::make_program("count_down",
                                                "# count down loop\n"
                                                "def count_down ( n ) :\n"
                                                "\tstart = n\n"
                                                "\twhile start > 0 :\n"
                                                "\t\tstart = start - 1\n"
                                                "\treturn start\n"));
    return corpus;
}

inline hsu::TrainConfig tiny_config() {
    hsu::TrainConfig config;
    config.hidden = 32;
    config.epochs = 2000;
    config.lr = 0.1;
    config.seed = 7;
    return config;
}

// Trained once and shared; memorizes tiny_corpus.
inline const hsu::Model& tiny_model() {
    static hsu::Model model = hsu::train_corpus(tiny_corpus(), tiny_config());
    return model;
}

// Vocabulary with |C|=11 (fixed), |T|=5 (pad, unk, a, b, c), k=2, d_max=2 by
// default: the randomized small-instance shape of the acceptance criteria.
inline hsu::Vocabulary tiny_vocab(std::size_t k = 2, std::size_t d_max = 2) {
    return hsu::Vocabulary({"<pad>", "<unk>", "a", "b", "c"}, k, d_max);
}

inline hsu::NodeVector random_node(const hsu::Vocabulary& vocab, std::mt19937& rng,
                                   bool allow_pad_type = false) {
    std::uniform_int_distribution<std::uint32_t> type_dist(allow_pad_type ? 0 : 1,
                                                           hsu::kSyntaxTypeCount - 1);
    std::uniform_int_distribution<std::uint32_t> token_dist(
        0, static_cast<std::uint32_t>(vocab.tokens().size()) - 1);
    hsu::NodeVector vec;
    vec.syntax = type_dist(rng);
    vec.tokens.assign(vocab.k(), hsu::kPadIndex);
    for (auto& t : vec.tokens) t = token_dist(rng);
    return vec;
}

inline hsu::SubTreeBatch random_batch(const hsu::Vocabulary& vocab, std::mt19937& rng,
                                      std::size_t real_children) {
    hsu::SubTreeBatch batch;
    batch.parent = random_node(vocab, rng);
    batch.real_count = real_children;
    batch.child_mask.assign(vocab.d_max(), false);
    for (std::size_t i = 0; i < vocab.d_max(); ++i) {
        if (i < real_children) {
            batch.children.push_back(random_node(vocab, rng));
            batch.child_mask[i] = true;
        } else {
            batch.children.push_back(hsu::encode_pad(vocab));
        }
    }
    return batch;
}

// Central finite differences of joint_loss with respect to every parameter
// entry; returns the worst relative error against the reverse-mode gradient.
inline double max_gradient_error(const hsu::SubTreeBatch& batch, hsu::nn::HsuParameters& params,
                                 const hsu::SlotLayout& layout, const hsu::TrainConfig& config,
                                 double epsilon = 1e-5) {
    hsu::nn::Gradients grads = hsu::joint_loss_gradients(batch, params, layout, config);
    double worst = 0.0;
    params.for_each_matrix([&](const char*, hsu::nn::Matrix& m) {
        const hsu::nn::Matrix* g = grads.find(m);
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double saved = m.data[i];
            m.data[i] = saved + epsilon;
            const double up = hsu::joint_loss(batch, params, layout, config);
            m.data[i] = saved - epsilon;
            const double down = hsu::joint_loss(batch, params, layout, config);
            m.data[i] = saved;
            const double numeric = (up - down) / (2.0 * epsilon);
            const double analytic = g ? g->data[i] : 0.0;
            const double scale = std::max({std::fabs(numeric), std::fabs(analytic), 1e-3});
            worst = std::max(worst, std::fabs(numeric - analytic) / scale);
        }
    });
    return worst;
}

}  // namespace testutil
