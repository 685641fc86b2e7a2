#include "hsu/model_io.hpp"

#include <cstring>
#include <fstream>

#include "hsu/errors.hpp"

namespace hsu {
namespace {

constexpr char kMagic[4] = {'H', 'S', 'U', 'M'};

class Writer {
public:
    explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
        if (!out_) throw Error("cannot open " + path.string() + " for writing");
    }

    void bytes(const void* data, std::size_t n) {
        out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    }
    void u32(std::uint32_t v) { bytes(&v, sizeof v); }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void i64(std::int64_t v) { bytes(&v, sizeof v); }
    void f64(double v) { bytes(&v, sizeof v); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }
    void matrix(const std::string& name, const nn::Matrix& m) {
        str(name);
        u64(m.rows);
        u64(m.cols);
        bytes(m.data.data(), m.data.size() * sizeof(double));
    }

    bool good() const { return static_cast<bool>(out_); }

private:
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
        if (!in_) throw Error("cannot open " + path.string() + " for reading");
    }

    void bytes(void* data, std::size_t n) {
        in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) throw CorruptModel("unexpected end of file");
    }
    std::uint32_t u32() {
        std::uint32_t v;
        bytes(&v, sizeof v);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        bytes(&v, sizeof v);
        return v;
    }
    std::int64_t i64() {
        std::int64_t v;
        bytes(&v, sizeof v);
        return v;
    }
    double f64() {
        double v;
        bytes(&v, sizeof v);
        return v;
    }
    std::string str() {
        std::uint32_t n = u32();
        if (n > (1u << 20)) throw CorruptModel("implausible string length");
        std::string s(n, '\0');
        if (n > 0) bytes(s.data(), n);
        return s;
    }
    nn::Matrix matrix(const std::string& expected_name) {
        std::string name = str();
        if (name != expected_name)
            throw CorruptModel("expected matrix '" + expected_name + "', found '" + name + "'");
        std::uint64_t rows = u64();
        std::uint64_t cols = u64();
        if (rows == 0 || cols == 0 || rows * cols > (1ull << 32))
            throw CorruptModel("implausible matrix shape for '" + name + "'");
        nn::Matrix m(rows, cols);
        bytes(m.data.data(), m.data.size() * sizeof(double));
        return m;
    }
    bool at_end() {
        in_.peek();
        return in_.eof();
    }

private:
    std::ifstream in_;
};

}  // namespace

void save_model(const Model& model, const std::filesystem::path& path) {
    Writer w(path);
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kModelFormatVersion);

    const Vocabulary& vocab = model.vocab;
    w.u32(static_cast<std::uint32_t>(vocab.syntax_types().size()));
    for (const auto& name : vocab.syntax_types()) w.str(name);
    w.u32(static_cast<std::uint32_t>(vocab.tokens().size()));
    for (const auto& token : vocab.tokens()) w.str(token);
    w.u64(vocab.k());
    w.u64(vocab.d_max());

    const TrainConfig& c = model.config;
    w.f64(c.lr);
    w.f64(c.alpha);
    w.f64(c.beta);
    w.u64(c.epochs);
    w.u64(c.minibatch);
    w.u64(c.hidden);
    w.i64(c.seed);

    w.u32(static_cast<std::uint32_t>(model.duplicates.size()));
    for (const NodeContent& content : model.duplicates) {
        w.u32(static_cast<std::uint32_t>(content.type));
        w.u32(static_cast<std::uint32_t>(content.tokens.size()));
        for (const auto& token : content.tokens) w.str(token);
    }

    std::uint32_t count = 0;
    model.params.for_each_matrix([&](const char*, const nn::Matrix&) { ++count; });
    w.u32(count);
    model.params.for_each_matrix(
        [&](const char* name, const nn::Matrix& m) { w.matrix(name, m); });
    if (!w.good()) throw Error("failed writing model file " + path.string());
}

Model load_model(const std::filesystem::path& path) {
    Reader r(path);
    char magic[4];
    r.bytes(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw CorruptModel("bad magic");
    const std::uint32_t version = r.u32();
    if (version != kModelFormatVersion) throw VersionMismatch(version, kModelFormatVersion);

    const std::uint32_t syntax_count = r.u32();
    if (syntax_count != kSyntaxTypeCount) throw CorruptModel("unexpected syntax type count");
    for (std::uint32_t i = 0; i < syntax_count; ++i) {
        if (r.str() != to_string(static_cast<SyntaxType>(i)))
            throw CorruptModel("syntax type table mismatch");
    }
    const std::uint32_t token_count = r.u32();
    if (token_count < 2) throw CorruptModel("token table too small");
    std::vector<std::string> tokens;
    tokens.reserve(token_count);
    for (std::uint32_t i = 0; i < token_count; ++i) tokens.push_back(r.str());
    const std::uint64_t k = r.u64();
    const std::uint64_t d_max = r.u64();
    if (k == 0 || d_max == 0) throw CorruptModel("bad k or d_max");

    Model model;
    model.vocab = Vocabulary(std::move(tokens), k, d_max);

    TrainConfig c;
    c.lr = r.f64();
    c.alpha = r.f64();
    c.beta = r.f64();
    c.epochs = r.u64();
    c.minibatch = r.u64();
    c.hidden = r.u64();
    c.seed = static_cast<long>(r.i64());
    model.config = c;

    const std::uint32_t duplicate_count = r.u32();
    for (std::uint32_t i = 0; i < duplicate_count; ++i) {
        NodeContent content;
        content.type = static_cast<SyntaxType>(r.u32());
        const std::uint32_t n = r.u32();
        for (std::uint32_t j = 0; j < n; ++j) content.tokens.push_back(r.str());
        model.duplicates.push_back(std::move(content));
    }

    std::vector<std::pair<std::string, nn::Matrix*>> slots;
    model.params.hidden = c.hidden;
    model.params.input_dim = model.vocab.width();
    model.params.max_degree = model.vocab.d_max();
    model.params.for_each_matrix(
        [&](const char* name, nn::Matrix& m) { slots.emplace_back(name, &m); });
    const std::uint32_t matrix_count = r.u32();
    if (matrix_count != slots.size()) throw CorruptModel("unexpected matrix count");
    for (auto& [name, slot] : slots) *slot = r.matrix(name);
    if (!r.at_end()) throw CorruptModel("trailing bytes after the matrix section");

    if (model.params.embed.rows != c.hidden || model.params.embed.cols != model.vocab.width())
        throw CorruptModel("embedding shape disagrees with the header");
    return model;
}

}  // namespace hsu
