// Command-line front end: parse, train, generate, interpret, complete, eval.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hsu/corpus.hpp"
#include "hsu/errors.hpp"
#include "hsu/metrics.hpp"
#include "hsu/model_io.hpp"
#include "hsu/tasks.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw hsu::Error("cannot read file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void print_ast(const hsu::ProgramAst& ast, hsu::NodeId id, std::size_t depth, std::string& out) {
    const hsu::AstNode& node = ast.node(id);
    out.append(2 * depth, ' ');
    out += to_string(node.syntax_type);
    if (!node.tokens.empty()) {
        out += " :";
        for (const hsu::Token& token : node.tokens) {
            out.push_back(' ');
            out += token.text;
        }
    }
    if (!node.intention.empty()) {
        out += " #";
        for (const hsu::Token& token : node.intention) {
            out.push_back(' ');
            out += token.text;
        }
    }
    out.push_back('\n');
    for (hsu::NodeId child : node.children) print_ast(ast, child, depth + 1, out);
}

void write_output(const std::string& text, const std::string& out_path) {
    std::string payload = text;
    if (payload.empty() || payload.back() != '\n') payload.push_back('\n');
    if (out_path.empty()) {
        std::fputs(payload.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw hsu::Error("cannot write " + out_path);
    out << payload;
}

std::string join(const std::vector<hsu::Token>& tokens) {
    std::string out;
    for (const hsu::Token& token : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += token.text;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hsu: program synthesis over ASTs with hierarchical sequential units"};
    app.require_subcommand(1);

    long seed = 7;
    app.add_option("--seed", seed, "seed for every random choice")
        ->envname("HSU_SEED")
        ->capture_default_str();

    std::string file_arg, corpus_dir, model_path, out_path, intention, line, mode_name = "next-line";
    hsu::TrainConfig defaults;
    double lr = defaults.lr, alpha = defaults.alpha, beta = defaults.beta;
    std::size_t epochs = defaults.epochs, minibatch = defaults.minibatch, hidden = defaults.hidden;
    std::size_t max_depth = hsu::GenerationConfig{}.max_depth;
    bool as_json = false;

    CLI::App* cmd_parse = app.add_subcommand("parse", "print a source file's AST as indented text");
    cmd_parse->add_option("file", file_arg, "source file")->required();

    CLI::App* cmd_train = app.add_subcommand("train", "train a model on a corpus directory");
    cmd_train->add_option("--corpus", corpus_dir, "directory of .alg files")->required();
    cmd_train->add_option("--out", model_path, "model file to write")->required();
    cmd_train->add_option("--epochs", epochs)->capture_default_str()->check(CLI::PositiveNumber);
    cmd_train->add_option("--lr", lr)->capture_default_str()->check(CLI::PositiveNumber);
    cmd_train->add_option("--alpha", alpha)->capture_default_str();
    cmd_train->add_option("--beta", beta)->capture_default_str();
    cmd_train->add_option("--dh", hidden, "hidden width")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_train->add_option("--minibatch", minibatch)->capture_default_str()->check(CLI::PositiveNumber);

    CLI::App* cmd_generate = app.add_subcommand("generate", "generate a program from an intention");
    cmd_generate->add_option("--model", model_path)->required();
    cmd_generate->add_option("--intention", intention)->required();
    cmd_generate->add_option("--max-depth", max_depth)->capture_default_str()->check(CLI::PositiveNumber);

    CLI::App* cmd_interpret = app.add_subcommand("interpret", "infer a program's intention");
    cmd_interpret->add_option("--model", model_path)->required();
    cmd_interpret->add_option("file", file_arg, "source file")->required();

    CLI::App* cmd_complete = app.add_subcommand("complete", "complete a program from one statement");
    cmd_complete->add_option("--model", model_path)->required();
    cmd_complete->add_option("--line", line)->required();
    cmd_complete->add_option("--max-depth", max_depth)->capture_default_str()->check(CLI::PositiveNumber);

    CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate a model over a corpus");
    cmd_eval->add_option("--model", model_path)->required();
    cmd_eval->add_option("--corpus", corpus_dir)->required();
    cmd_eval->add_option("--mode", mode_name, "next-line | generate | interpret | complete")
        ->capture_default_str();
    cmd_eval->add_option("--out", out_path, "write the report here instead of stdout");
    cmd_eval->add_flag("--json", as_json, "machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*cmd_parse) {
            hsu::ProgramAst ast = hsu::parse_source(read_file(file_arg));
            auto lines = hsu::tokenize(read_file(file_arg));
            std::string comment;
            for (const std::string& word : hsu::leading_comment_words(lines)) {
                if (!comment.empty()) comment.push_back(' ');
                comment += word;
            }
            hsu::attach_intention(ast, comment);
            ast = hsu::truncate(ast);
            std::string out;
            print_ast(ast, ast.root(), 0, out);
            write_output(out, "");
        } else if (*cmd_train) {
            hsu::TrainConfig config;
            config.lr = lr;
            config.alpha = alpha;
            config.beta = beta;
            config.epochs = epochs;
            config.minibatch = minibatch;
            config.hidden = hidden;
            config.seed = seed;
            hsu::Corpus corpus = hsu::load_corpus(corpus_dir);
            hsu::TrainProgress last;
            hsu::Model model =
                hsu::train_corpus(corpus, config, [&](const hsu::TrainProgress& progress) {
                    last = progress;
                    if (progress.epoch % 25 == 0)
                        std::fprintf(stderr, "epoch %zu loss %.6f (%zu iterations)\n",
                                     progress.epoch, progress.mean_loss, progress.iterations);
                });
            hsu::save_model(model, model_path);
            char summary[256];
            std::snprintf(summary, sizeof summary, "model: %s\nepochs: %zu\niterations: %zu\nfinal_loss: %.6f",
                          model_path.c_str(), last.epoch, last.iterations, last.mean_loss);
            write_output(summary, "");
        } else if (*cmd_generate) {
            hsu::Model model = hsu::load_model(model_path);
            hsu::GenerationResult result =
                hsu::generate_program(intention, model, hsu::GenerationConfig{max_depth});
            if (result.depth_exceeded)
                std::fprintf(stderr, "warning: generation stopped at the depth limit\n");
            write_output(hsu::emit_source(result.ast), "");
        } else if (*cmd_interpret) {
            hsu::Model model = hsu::load_model(model_path);
            hsu::ProgramAst ast = hsu::truncate(hsu::parse_source(read_file(file_arg)), model.vocab.k());
            std::string out;
            for (const std::string& word : hsu::interpret_program(ast, model)) {
                if (!out.empty()) out.push_back(' ');
                out += word;
            }
            write_output(out, "");
        } else if (*cmd_complete) {
            hsu::Model model = hsu::load_model(model_path);
            hsu::CompletionResult result =
                hsu::complete_program(line, model, hsu::GenerationConfig{max_depth});
            if (result.ambiguous)
                std::fprintf(stderr,
                             "warning: the fragment line occurs more than once in the training "
                             "corpus; the completion is ambiguous\n");
            if (result.depth_exceeded)
                std::fprintf(stderr, "warning: no module root found within the depth limit\n");
            write_output(hsu::emit_source(result.ast), "");
        } else if (*cmd_eval) {
            hsu::Model model = hsu::load_model(model_path);
            hsu::Corpus corpus = hsu::load_corpus(corpus_dir);
            hsu::EvalReport report =
                hsu::evaluate(model, corpus, hsu::eval_mode_from_string(mode_name));
            write_output(as_json ? hsu::to_json_text(report) : hsu::to_text(report), out_path);
        }
    } catch (const hsu::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
