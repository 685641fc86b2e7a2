#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hsu/grammar.hpp"
#include "hsu/network.hpp"

namespace hsu {

// One .alg source file: a leading comment block (the intention) plus the
// program body, already parsed, intention-attached and truncated.
struct CorpusProgram {
    std::string name;
    std::string source;
    std::vector<std::string> comment_words;  // original case, in order
    ProgramAst ast;
};

struct Corpus {
    std::vector<CorpusProgram> programs;
};

CorpusProgram make_program(std::string name, std::string source);

// Reads every *.alg file under `dir`, sorted by filename.
Corpus load_corpus(const std::filesystem::path& dir);

Vocabulary corpus_vocabulary(const Corpus& corpus);

Model train_corpus(const Corpus& corpus, const TrainConfig& config, const ProgressFn& progress = {});

}  // namespace hsu
