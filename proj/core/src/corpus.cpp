#include "hsu/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hsu/errors.hpp"

namespace hsu {

CorpusProgram make_program(std::string name, std::string source) {
    CorpusProgram program;
    program.name = std::move(name);
    program.source = std::move(source);

    auto lines = tokenize(program.source);
    program.comment_words = leading_comment_words(lines);
    ProgramAst ast = parse(lines);

    std::string comment;
    for (const std::string& word : program.comment_words) {
        if (!comment.empty()) comment.push_back(' ');
        comment += word;
    }
    attach_intention(ast, comment);
    program.ast = truncate(ast);
    return program;
}

Corpus load_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw Error("corpus directory not found: " + dir.string());
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".alg")
            paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw EmptyCorpus();

    Corpus corpus;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) throw Error("cannot read corpus file " + path.string());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        corpus.programs.push_back(make_program(path.stem().string(), buffer.str()));
    }
    return corpus;
}

Vocabulary corpus_vocabulary(const Corpus& corpus) {
    std::vector<ProgramAst> asts;
    asts.reserve(corpus.programs.size());
    for (const CorpusProgram& program : corpus.programs) asts.push_back(program.ast);
    return build_vocabulary(asts);
}

Model train_corpus(const Corpus& corpus, const TrainConfig& config, const ProgressFn& progress) {
    std::vector<ProgramAst> asts;
    asts.reserve(corpus.programs.size());
    for (const CorpusProgram& program : corpus.programs) asts.push_back(program.ast);
    Vocabulary vocab = build_vocabulary(asts);
    return train(asts, vocab, config, progress);
}

}  // namespace hsu
