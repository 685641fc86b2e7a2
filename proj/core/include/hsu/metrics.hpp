#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsu/corpus.hpp"
#include "hsu/network.hpp"

namespace hsu {

// Slot-aligned label metrics for one inference call. The shorter sequence is
// padded so both sides have one label per slot.
struct InstanceScore {
    double accuracy = 0.0;
    double precision_micro = 0.0, recall_micro = 0.0, f1_micro = 0.0;
    double precision_macro = 0.0, recall_macro = 0.0, f1_macro = 0.0;
    double precision_weighted = 0.0, recall_weighted = 0.0, f1_weighted = 0.0;
    bool exact = false;
};

InstanceScore score_instance(std::span<const std::string> predicted,
                             std::span<const std::string> truth);

struct MetricStats {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation over instances
};

enum class EvalMode { next_line, generate, interpret, complete };

std::string_view to_string(EvalMode mode);
EvalMode eval_mode_from_string(std::string_view name);

struct EvalReport {
    EvalMode mode = EvalMode::next_line;
    std::size_t instance_count = 0;
    MetricStats accuracy;
    MetricStats precision_micro, recall_micro, f1_micro;
    MetricStats precision_macro, recall_macro, f1_macro;
    MetricStats precision_weighted, recall_weighted, f1_weighted;
    double exact_match = 0.0;
};

EvalReport aggregate_scores(EvalMode mode, std::span<const InstanceScore> scores);

// Runs the task behind `mode` over every instance the corpus provides:
// next-line uses every (child, successor) pair of every sampled sub-tree,
// the other modes use one instance per program. The random input line of the
// completion mode is drawn from a generator seeded by the model's seed.
EvalReport evaluate(const Model& model, const Corpus& corpus, EvalMode mode);

// Flat key-value rendering; ends with a newline.
std::string to_text(const EvalReport& report);
// Machine-readable rendering (JSON); ends with a newline.
std::string to_json_text(const EvalReport& report);

}  // namespace hsu
