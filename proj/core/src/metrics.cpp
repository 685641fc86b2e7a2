#include "hsu/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include <nlohmann/json.hpp>

#include "hsu/errors.hpp"
#include "hsu/tasks.hpp"

namespace hsu {

namespace {

constexpr const char* kPadLabel = "<pad>";

struct LabelCounts {
    std::size_t tp = 0, fp = 0, fn = 0, support = 0;
};

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f_score(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

std::vector<std::string> content_labels(const NodeContent& content) {
    std::vector<std::string> labels;
    labels.reserve(content.tokens.size() + 1);
    labels.emplace_back(to_string(content.type));
    labels.insert(labels.end(), content.tokens.begin(), content.tokens.end());
    return labels;
}

std::string join_words(std::span<const std::string> words) {
    std::string out;
    for (const std::string& word : words) {
        if (!out.empty()) out.push_back(' ');
        out += word;
    }
    return out;
}

std::string leaf_line_text(const ProgramAst& ast, NodeId leaf) {
    std::string out;
    for (const Token& token : ast.node(leaf).tokens) {
        if (!out.empty()) out.push_back(' ');
        out += token.text;
    }
    return out;
}

}  // namespace

InstanceScore score_instance(std::span<const std::string> predicted,
                             std::span<const std::string> truth) {
    InstanceScore score;
    score.exact = predicted.size() == truth.size() &&
                  std::equal(predicted.begin(), predicted.end(), truth.begin());

    const std::size_t slots = std::max(predicted.size(), truth.size());
    if (slots == 0) {
        score.accuracy = 1.0;
        score.precision_micro = score.recall_micro = score.f1_micro = 1.0;
        score.precision_macro = score.recall_macro = score.f1_macro = 1.0;
        score.precision_weighted = score.recall_weighted = score.f1_weighted = 1.0;
        return score;
    }

    std::map<std::string, LabelCounts> by_label;
    std::size_t matches = 0;
    for (std::size_t i = 0; i < slots; ++i) {
        const std::string& t = i < truth.size() ? truth[i] : kPadLabel;
        const std::string& p = i < predicted.size() ? predicted[i] : kPadLabel;
        ++by_label[t].support;
        if (p == t) {
            ++matches;
            ++by_label[t].tp;
        } else {
            ++by_label[t].fn;
            ++by_label[p].fp;
        }
    }

    score.accuracy = ratio(matches, slots);

    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& [label, c] : by_label) {
        tp += c.tp;
        fp += c.fp;
        fn += c.fn;
    }
    score.precision_micro = ratio(tp, tp + fp);
    score.recall_micro = ratio(tp, tp + fn);
    score.f1_micro = f_score(score.precision_micro, score.recall_micro);

    double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
    double pw_sum = 0.0, rw_sum = 0.0, fw_sum = 0.0;
    for (const auto& [label, c] : by_label) {
        const double p = ratio(c.tp, c.tp + c.fp);
        const double r = ratio(c.tp, c.tp + c.fn);
        const double f = f_score(p, r);
        p_sum += p;
        r_sum += r;
        f_sum += f;
        const double w = static_cast<double>(c.support);
        pw_sum += w * p;
        rw_sum += w * r;
        fw_sum += w * f;
    }
    const double labels = static_cast<double>(by_label.size());
    score.precision_macro = p_sum / labels;
    score.recall_macro = r_sum / labels;
    score.f1_macro = f_sum / labels;
    score.precision_weighted = pw_sum / static_cast<double>(slots);
    score.recall_weighted = rw_sum / static_cast<double>(slots);
    score.f1_weighted = fw_sum / static_cast<double>(slots);
    return score;
}

std::string_view to_string(EvalMode mode) {
    switch (mode) {
        case EvalMode::next_line: return "next-line";
        case EvalMode::generate: return "generate";
        case EvalMode::interpret: return "interpret";
        case EvalMode::complete: return "complete";
    }
    return "next-line";
}

EvalMode eval_mode_from_string(std::string_view name) {
    if (name == "next-line") return EvalMode::next_line;
    if (name == "generate") return EvalMode::generate;
    if (name == "interpret") return EvalMode::interpret;
    if (name == "complete") return EvalMode::complete;
    throw Error("unknown evaluation mode: " + std::string(name));
}

namespace {

MetricStats stats_of(std::span<const InstanceScore> scores, double InstanceScore::* field) {
    MetricStats stats;
    if (scores.empty()) return stats;
    const double n = static_cast<double>(scores.size());
    for (const InstanceScore& s : scores) stats.mean += s.*field;
    stats.mean /= n;
    double variance = 0.0;
    for (const InstanceScore& s : scores) {
        const double d = s.*field - stats.mean;
        variance += d * d;
    }
    stats.stddev = std::sqrt(variance / n);
    return stats;
}

}  // namespace

EvalReport aggregate_scores(EvalMode mode, std::span<const InstanceScore> scores) {
    EvalReport report;
    report.mode = mode;
    report.instance_count = scores.size();
    report.accuracy = stats_of(scores, &InstanceScore::accuracy);
    report.precision_micro = stats_of(scores, &InstanceScore::precision_micro);
    report.recall_micro = stats_of(scores, &InstanceScore::recall_micro);
    report.f1_micro = stats_of(scores, &InstanceScore::f1_micro);
    report.precision_macro = stats_of(scores, &InstanceScore::precision_macro);
    report.recall_macro = stats_of(scores, &InstanceScore::recall_macro);
    report.f1_macro = stats_of(scores, &InstanceScore::f1_macro);
    report.precision_weighted = stats_of(scores, &InstanceScore::precision_weighted);
    report.recall_weighted = stats_of(scores, &InstanceScore::recall_weighted);
    report.f1_weighted = stats_of(scores, &InstanceScore::f1_weighted);
    std::size_t exact = 0;
    for (const InstanceScore& s : scores) exact += s.exact ? 1 : 0;
    report.exact_match = scores.empty() ? 0.0 : ratio(exact, scores.size());
    return report;
}

EvalReport evaluate(const Model& model, const Corpus& corpus, EvalMode mode) {
    std::vector<InstanceScore> scores;
    switch (mode) {
        case EvalMode::next_line: {
            for (const CorpusProgram& program : corpus.programs) {
                for (NodeId id : program.ast.internal_nodes()) {
                    const AstNode& node = program.ast.node(id);
                    for (std::size_t i = 0; i < node.children.size(); ++i) {
                        NodeContent input = content_of(program.ast.node(node.children[i]));
                        NodeContent truth =
                            i + 1 < node.children.size()
                                ? content_of(program.ast.node(node.children[i + 1]))
                                : NodeContent{};
                        NodeContent predicted =
                            predict_right_sibling(encode_content(input, model.vocab), model);
                        scores.push_back(
                            score_instance(content_labels(predicted), content_labels(truth)));
                    }
                }
            }
            break;
        }
        case EvalMode::generate: {
            for (const CorpusProgram& program : corpus.programs) {
                GenerationResult result =
                    generate_program(join_words(program.comment_words), model);
                scores.push_back(score_instance(leaf_token_texts(result.ast),
                                                leaf_token_texts(program.ast)));
            }
            break;
        }
        case EvalMode::interpret: {
            for (const CorpusProgram& program : corpus.programs) {
                std::vector<std::string> predicted = interpret_program(program.ast, model);
                NodeContent truth = content_of(program.ast.node(program.ast.root()));
                scores.push_back(score_instance(predicted, truth.tokens));
            }
            break;
        }
        case EvalMode::complete: {
            std::mt19937 rng(static_cast<std::mt19937::result_type>(model.config.seed));
            for (const CorpusProgram& program : corpus.programs) {
                auto leaves = program.ast.leaves();
                std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
                const std::string line = leaf_line_text(program.ast, leaves[pick(rng)]);
                CompletionResult result = complete_program(line, model);
                scores.push_back(score_instance(leaf_token_texts(result.ast),
                                                leaf_token_texts(program.ast)));
            }
            break;
        }
    }
    return aggregate_scores(mode, scores);
}

namespace {

void append_stat(std::string& out, const char* name, const MetricStats& stats) {
    char line[128];
    std::snprintf(line, sizeof line, "%s: %.6f +/- %.6f\n", name, stats.mean, stats.stddev);
    out += line;
}

}  // namespace

std::string to_text(const EvalReport& report) {
    std::string out;
    out += "mode: ";
    out += to_string(report.mode);
    out += "\n";
    out += "instances: " + std::to_string(report.instance_count) + "\n";
    append_stat(out, "accuracy", report.accuracy);
    append_stat(out, "precision_micro", report.precision_micro);
    append_stat(out, "recall_micro", report.recall_micro);
    append_stat(out, "f1_micro", report.f1_micro);
    append_stat(out, "precision_macro", report.precision_macro);
    append_stat(out, "recall_macro", report.recall_macro);
    append_stat(out, "f1_macro", report.f1_macro);
    append_stat(out, "precision_weighted", report.precision_weighted);
    append_stat(out, "recall_weighted", report.recall_weighted);
    append_stat(out, "f1_weighted", report.f1_weighted);
    char line[64];
    std::snprintf(line, sizeof line, "exact_match: %.6f\n", report.exact_match);
    out += line;
    return out;
}

std::string to_json_text(const EvalReport& report) {
    nlohmann::json metrics;
    auto put = [&](const char* name, const MetricStats& stats) {
        metrics[name] = {{"mean", stats.mean}, {"std", stats.stddev}};
    };
    put("accuracy", report.accuracy);
    put("precision_micro", report.precision_micro);
    put("recall_micro", report.recall_micro);
    put("f1_micro", report.f1_micro);
    put("precision_macro", report.precision_macro);
    put("recall_macro", report.recall_macro);
    put("f1_macro", report.f1_macro);
    put("precision_weighted", report.precision_weighted);
    put("recall_weighted", report.recall_weighted);
    put("f1_weighted", report.f1_weighted);

    nlohmann::json doc{
        {"mode", std::string(to_string(report.mode))},
        {"instances", report.instance_count},
        {"metrics", metrics},
        {"exact_match", report.exact_match},
    };
    return doc.dump(2) + "\n";
}

}  // namespace hsu
