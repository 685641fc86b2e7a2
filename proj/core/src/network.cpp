#include "hsu/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "hsu/errors.hpp"

namespace hsu {

using nn::Tape;

namespace {

// Shared forward wiring for one sub-tree batch. Which pieces get built is
// driven by the loss weights so inference passes reuse the same code.
struct BatchGraph {
    Tape::NodeRef isu_loss = Tape::kNull;
    Tape::NodeRef esu_loss = Tape::kNull;
    Tape::NodeRef hsu_loss = Tape::kNull;
    std::vector<Tape::NodeRef> down_logits;   // one per built top-down position
    Tape::NodeRef up_logits = Tape::kNull;
    std::vector<Tape::NodeRef> left_logits;   // per child position
    std::vector<Tape::NodeRef> right_logits;  // per child position
};

Tape::NodeRef add_scalar(Tape& tape, Tape::NodeRef acc, Tape::NodeRef term) {
    return acc == Tape::kNull ? term : tape.add(acc, term);
}

// The leaf unit's sibling-input columns are pinned at zero (see
// HsuParameters::init): sequential states are functions of node content, so
// single-line inference sees the same states training produced. Clearing the
// accumulated gradient keeps sgd_step exact for everything else.
void freeze_leaf_sibling_columns(const nn::HsuParameters& params, nn::Gradients& grads) {
    const std::size_t hidden = params.hidden;
    for (const nn::Matrix* m :
         {&params.esu_leaf.forget, &params.esu_leaf.evolve, &params.esu_leaf.update,
          &params.esu_leaf.select_z, &params.esu_leaf.select_r}) {
        auto it = grads.by_matrix.find(m);
        if (it == grads.by_matrix.end()) continue;
        for (std::size_t r = 0; r < it->second.rows; ++r)
            for (std::size_t c = 0; c < hidden; ++c) it->second.at(r, c) = 0.0;
    }
}

// ISU chain from the encoded parent. `positions` children states are built;
// cross-entropy terms are added for the first `loss_children` real children.
void build_top_down(Tape& tape, const SubTreeBatch& batch, const nn::HsuParameters& params,
                    const SlotLayout& layout, std::size_t positions, bool with_loss,
                    BatchGraph& graph) {
    auto parent_embed = tape.embed(params.embed, batch.parent, layout);
    auto root_state = nn::isu_forward(tape, Tape::kNull, parent_embed, params.isu);
    Tape::NodeRef previous = Tape::kNull;
    for (std::size_t i = 0; i < positions; ++i) {
        auto state = nn::isu_forward(tape, previous, root_state, params.isu);
        auto logits = tape.affine(params.down.weight, params.down.bias, state);
        graph.down_logits.push_back(logits);
        if (with_loss && i < batch.real_count && batch.child_mask[i]) {
            auto term = tape.slot_cross_entropy(logits, batch.children[i], layout);
            graph.isu_loss = add_scalar(tape, graph.isu_loss, term);
        }
        previous = state;
    }
    if (with_loss && graph.isu_loss == Tape::kNull) graph.isu_loss = tape.zeros(1);
}

// Leaf-ESU chain over all padded children plus the aggregate step; optionally
// the up-head loss and the bi-directed neighbor losses.
void build_bottom_up(Tape& tape, const SubTreeBatch& batch, const nn::HsuParameters& params,
                     const SlotLayout& layout, bool with_esu_loss, bool with_hsu,
                     bool with_hsu_loss, BatchGraph& graph) {
    const std::size_t width = batch.children.size();
    std::vector<Tape::NodeRef> states;
    states.reserve(width);
    Tape::NodeRef previous = Tape::kNull;
    for (std::size_t i = 0; i < width; ++i) {
        auto child_embed = tape.embed(params.embed, batch.children[i], layout);
        auto state = nn::esu_forward(tape, previous, child_embed, params.esu_leaf);
        states.push_back(state);
        previous = state;
    }
    auto all_states = tape.concat(states);
    auto parent_state = nn::esu_forward(tape, Tape::kNull, all_states, params.esu_agg);
    graph.up_logits = tape.affine(params.up.weight, params.up.bias, parent_state);
    if (with_esu_loss)
        graph.esu_loss = tape.slot_cross_entropy(graph.up_logits, batch.parent, layout);

    if (!with_hsu) return;
    graph.left_logits.assign(width, Tape::kNull);
    graph.right_logits.assign(width, Tape::kNull);
    for (std::size_t i = 0; i < width; ++i) {
        // Loss only needs the right head up to the second-to-last position and
        // the left head from the second one; the passes build every position.
        bool need_left = !with_hsu_loss || (i >= 1 && i != batch.real_count);
        bool need_right = !with_hsu_loss || i + 1 < width;
        if (need_left)
            graph.left_logits[i] = tape.affine(params.left.weight, params.left.bias, states[i]);
        if (need_right)
            graph.right_logits[i] = tape.affine(params.right.weight, params.right.bias, states[i]);
    }
    if (with_hsu_loss) {
        // Target i comes from the right head of i-1 and the left head of i+1;
        // pad rows stay in as targets so sequence ends are learnable. The one
        // left row read off the first pad position is dropped: sequential
        // states are content-determined, so that single shared state cannot
        // name every batch's last real child.
        for (std::size_t i = 1; i < width; ++i) {
            auto term = tape.slot_cross_entropy(graph.right_logits[i - 1], batch.children[i], layout);
            graph.hsu_loss = add_scalar(tape, graph.hsu_loss, term);
        }
        for (std::size_t i = 0; i + 1 < width; ++i) {
            if (batch.real_count > 0 && i + 1 == batch.real_count) continue;
            auto term = tape.slot_cross_entropy(graph.left_logits[i + 1], batch.children[i], layout);
            graph.hsu_loss = add_scalar(tape, graph.hsu_loss, term);
        }
        if (graph.hsu_loss == Tape::kNull) graph.hsu_loss = tape.zeros(1);
    }
}

Tape::NodeRef build_joint(Tape& tape, const SubTreeBatch& batch, const nn::HsuParameters& params,
                          const SlotLayout& layout, const TrainConfig& config, BatchGraph& graph) {
    build_top_down(tape, batch, params, layout, batch.real_count, true, graph);
    build_bottom_up(tape, batch, params, layout, true, true, true, graph);
    auto acc = tape.scale_add(graph.isu_loss, graph.esu_loss, 1.0, config.alpha);
    return tape.scale_add(acc, graph.hsu_loss, 1.0, config.beta);
}

}  // namespace

std::vector<nn::Vector> top_down_pass(const NodeVector& parent, const nn::HsuParameters& params,
                                      const SlotLayout& layout) {
    Tape tape;
    BatchGraph graph;
    SubTreeBatch probe;
    probe.parent = parent;
    build_top_down(tape, probe, params, layout, params.max_degree, false, graph);
    std::vector<nn::Vector> out;
    out.reserve(graph.down_logits.size());
    for (auto logits : graph.down_logits) out.push_back(nn::slot_softmax(tape.value(logits), layout));
    return out;
}

nn::Vector bottom_up_pass(std::span<const NodeVector> children, const nn::HsuParameters& params,
                          const SlotLayout& layout) {
    Tape tape;
    BatchGraph graph;
    SubTreeBatch probe;
    probe.children.assign(children.begin(), children.end());
    build_bottom_up(tape, probe, params, layout, false, false, false, graph);
    return nn::slot_softmax(tape.value(graph.up_logits), layout);
}

std::vector<NeighborDistributions> sequential_pass(std::span<const NodeVector> children,
                                                   const nn::HsuParameters& params,
                                                   const SlotLayout& layout) {
    Tape tape;
    BatchGraph graph;
    SubTreeBatch probe;
    probe.children.assign(children.begin(), children.end());
    build_bottom_up(tape, probe, params, layout, false, true, false, graph);
    std::vector<NeighborDistributions> out(children.size());
    for (std::size_t i = 0; i < children.size(); ++i) {
        out[i].left = nn::slot_softmax(tape.value(graph.left_logits[i]), layout);
        out[i].right = nn::slot_softmax(tape.value(graph.right_logits[i]), layout);
    }
    return out;
}

double loss_isu(const SubTreeBatch& batch, const nn::HsuParameters& params,
                const SlotLayout& layout) {
    Tape tape;
    BatchGraph graph;
    build_top_down(tape, batch, params, layout, batch.real_count, true, graph);
    return tape.value(graph.isu_loss)[0];
}

double loss_esu(const SubTreeBatch& batch, const nn::HsuParameters& params,
                const SlotLayout& layout) {
    Tape tape;
    BatchGraph graph;
    build_bottom_up(tape, batch, params, layout, true, false, false, graph);
    return tape.value(graph.esu_loss)[0];
}

double loss_hsu(const SubTreeBatch& batch, const nn::HsuParameters& params,
                const SlotLayout& layout) {
    Tape tape;
    BatchGraph graph;
    build_bottom_up(tape, batch, params, layout, false, true, true, graph);
    return tape.value(graph.hsu_loss)[0];
}

double joint_loss(const SubTreeBatch& batch, const nn::HsuParameters& params,
                  const SlotLayout& layout, const TrainConfig& config) {
    Tape tape;
    BatchGraph graph;
    return tape.value(build_joint(tape, batch, params, layout, config, graph))[0];
}

nn::Gradients joint_loss_gradients(const SubTreeBatch& batch, const nn::HsuParameters& params,
                                   const SlotLayout& layout, const TrainConfig& config,
                                   double* loss_out) {
    Tape tape;
    BatchGraph graph;
    auto loss = build_joint(tape, batch, params, layout, config, graph);
    if (loss_out) *loss_out = tape.value(loss)[0];
    nn::Gradients grads;
    tape.backward(loss, grads);
    return grads;
}

std::vector<NodeContent> duplicate_leaf_contents(std::span<const ProgramAst> corpus) {
    std::map<NodeContent, std::size_t> counts;
    for (const ProgramAst& ast : corpus)
        for (NodeId id : ast.leaves()) ++counts[content_of(ast.node(id))];
    std::vector<NodeContent> duplicated;
    for (const auto& [content, count] : counts)
        if (count > 1) duplicated.push_back(content);
    return duplicated;
}

Model train(std::span<const ProgramAst> corpus, const Vocabulary& vocab,
            const TrainConfig& config, const ProgressFn& progress) {
    std::vector<SubTreeBatch> batches;
    for (const ProgramAst& ast : corpus) {
        auto sampled = sample_subtrees(ast, vocab);
        batches.insert(batches.end(), std::make_move_iterator(sampled.begin()),
                       std::make_move_iterator(sampled.end()));
    }

    std::mt19937 rng(static_cast<std::mt19937::result_type>(config.seed));
    Model model;
    model.vocab = vocab;
    model.config = config;
    model.duplicates = duplicate_leaf_contents(corpus);
    model.params = nn::HsuParameters::init(config.hidden, vocab.width(), vocab.d_max(), rng);

    if (batches.empty() || config.epochs == 0) return model;

    const SlotLayout layout = vocab.layout();
    std::vector<std::size_t> order(batches.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> history;
    std::size_t iterations = 0;
    Tape tape;
    nn::Gradients accumulated;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        std::size_t cursor = 0;
        while (cursor < order.size()) {
            const std::size_t take = std::min(config.minibatch, order.size() - cursor);
            accumulated.zero();
            for (std::size_t i = 0; i < take; ++i) {
                const std::size_t index = order[cursor + i];
                tape.reset();
                BatchGraph graph;
                auto loss_node =
                    build_joint(tape, batches[index], model.params, layout, config, graph);
                const double loss = tape.value(loss_node)[0];
                if (!std::isfinite(loss)) throw NonFiniteLoss(index);
                epoch_loss += loss;
                tape.backward(loss_node, accumulated);
            }
            accumulated.scale(1.0 / static_cast<double>(take));
            freeze_leaf_sibling_columns(model.params, accumulated);
            nn::sgd_step(model.params, accumulated, config.lr);
            cursor += take;
            iterations += take;
        }
        const double mean_loss = epoch_loss / static_cast<double>(order.size());
        history.push_back(mean_loss);
        if (progress) progress(TrainProgress{epoch + 1, mean_loss, iterations});

        if (history.size() >= 6) {
            bool plateau = true;
            for (std::size_t i = history.size() - 5; i < history.size(); ++i)
                if (std::fabs(history[i] - history[i - 1]) >= 1e-6) plateau = false;
            if (plateau) break;
        }
    }
    return model;
}

}  // namespace hsu
