#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hsu/params.hpp"
#include "hsu/subtree.hpp"

namespace hsu {

struct TrainConfig {
    double lr = 0.05;
    double alpha = 1.0;  // weight of the bottom-up loss
    double beta = 1.0;   // weight of the sequential loss
    std::size_t epochs = 300;
    std::size_t minibatch = 8;
    std::size_t hidden = 64;  // d_h
    long seed = 7;
};

// A trained (or freshly initialized) model: everything inference needs.
// `duplicates` lists node contents that occur more than once among the
// training corpus leaves; completion uses it for the ambiguity diagnostic.
struct Model {
    nn::HsuParameters params;
    Vocabulary vocab;
    TrainConfig config;
    std::vector<NodeContent> duplicates;

    SlotLayout layout() const { return vocab.layout(); }
};

// --- forward passes (pure; distributions are per-slot softmaxes over D) ---

// ISU chain seeded by the encoded parent; one predicted child distribution
// per position, always d_max of them.
std::vector<nn::Vector> top_down_pass(const NodeVector& parent, const nn::HsuParameters& params,
                                      const SlotLayout& layout);

// Leaf-ESU chain over the padded children, aggregate ESU on the concatenated
// states, parent distribution through the up head.
nn::Vector bottom_up_pass(std::span<const NodeVector> children, const nn::HsuParameters& params,
                          const SlotLayout& layout);

struct NeighborDistributions {
    nn::Vector left;
    nn::Vector right;
};

// Left/right neighbor predictions for every child position (same ESU chain
// as bottom_up_pass).
std::vector<NeighborDistributions> sequential_pass(std::span<const NodeVector> children,
                                                   const nn::HsuParameters& params,
                                                   const SlotLayout& layout);

// --- losses ---

double loss_isu(const SubTreeBatch& batch, const nn::HsuParameters& params,
                const SlotLayout& layout);
double loss_esu(const SubTreeBatch& batch, const nn::HsuParameters& params,
                const SlotLayout& layout);
double loss_hsu(const SubTreeBatch& batch, const nn::HsuParameters& params,
                const SlotLayout& layout);
double joint_loss(const SubTreeBatch& batch, const nn::HsuParameters& params,
                  const SlotLayout& layout, const TrainConfig& config);

// Reverse-mode gradients of joint_loss for every touched parameter.
nn::Gradients joint_loss_gradients(const SubTreeBatch& batch, const nn::HsuParameters& params,
                                   const SlotLayout& layout, const TrainConfig& config,
                                   double* loss_out = nullptr);

// --- training ---

struct TrainProgress {
    std::size_t epoch = 0;
    double mean_loss = 0.0;
    std::size_t iterations = 0;  // sub-tree instances processed so far
};
using ProgressFn = std::function<void(const TrainProgress&)>;

// Seeded-shuffle minibatch SGD on all sub-trees sampled from the corpus.
// Stops at the epoch budget or once the mean epoch loss moves by less than
// 1e-6 over five consecutive epochs. Throws NonFiniteLoss with the offending
// batch index.
Model train(std::span<const ProgramAst> corpus, const Vocabulary& vocab,
            const TrainConfig& config, const ProgressFn& progress = {});

// Duplicated leaf contents across a corpus (the Fig. 6 failure pattern).
std::vector<NodeContent> duplicate_leaf_contents(std::span<const ProgramAst> corpus);

}  // namespace hsu
