#include "hsu/grammar.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "hsu/errors.hpp"

namespace hsu {
namespace {

const std::array<std::string_view, 17> kKeywords = {
    "import", "def", "class", "return", "for", "in", "while", "if",
    "elif",   "else", "pass", "break",  "continue", "and", "or", "not", "from",
};

const std::array<std::string_view, 11> kTwoCharOps = {
    "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=",
};

constexpr std::string_view kSingleCharOps = "=+-*/%<>()[]{},.:";

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) words.push_back(std::move(current)), current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

}  // namespace

bool is_keyword(std::string_view text) {
    return std::find(kKeywords.begin(), kKeywords.end(), text) != kKeywords.end();
}

Token classify_token(std::string_view text) {
    Token token{std::string(text), SyntaxType::identifier_token};
    if (text.empty()) return token;
    if (is_keyword(text)) {
        token.kind = SyntaxType::keyword_token;
    } else if (is_digit(text.front()) || text.front() == '"' || text.front() == '\'') {
        token.kind = SyntaxType::literal_token;
    } else if (kSingleCharOps.find(text.front()) != std::string_view::npos) {
        token.kind = SyntaxType::operator_token;
    }
    return token;
}

std::vector<TokenizedLine> tokenize(std::string_view source) {
    std::vector<TokenizedLine> lines;
    if (source.empty()) return lines;
    char indent_char = '\0';  // established by the first indented line

    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start <= source.size()) {
        if (start == source.size() && line_no > 0) break;
        std::size_t end = source.find('\n', start);
        if (end == std::string_view::npos) end = source.size();
        std::string_view raw = source.substr(start, end - start);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        ++line_no;

        TokenizedLine line;
        line.number = line_no;

        std::size_t i = 0;
        bool saw_tab = false, saw_space = false;
        while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) {
            (raw[i] == '\t' ? saw_tab : saw_space) = true;
            ++i;
        }
        if (i < raw.size()) {  // indentation only matters on non-blank lines
            if (saw_tab && saw_space) throw MixedIndent(line_no);
            if (saw_tab || saw_space) {
                char c = saw_tab ? '\t' : ' ';
                if (indent_char == '\0') indent_char = c;
                if (c != indent_char) throw MixedIndent(line_no);
            }
            line.indent = i;
        }

        if (i < raw.size() && raw[i] == '#') {
            line.is_comment = true;
            for (auto& word : split_words(raw.substr(i + 1)))
                line.tokens.push_back(Token{std::move(word), SyntaxType::comment_token});
            lines.push_back(std::move(line));
            start = end + 1;
            continue;
        }

        while (i < raw.size()) {
            char c = raw[i];
            if (c == ' ' || c == '\t') {
                ++i;
                continue;
            }
            if (is_ident_start(c)) {
                std::size_t j = i;
                while (j < raw.size() && is_ident_char(raw[j])) ++j;
                line.tokens.push_back(classify_token(raw.substr(i, j - i)));
                i = j;
            } else if (is_digit(c)) {
                std::size_t j = i;
                while (j < raw.size() && is_digit(raw[j])) ++j;
                line.tokens.push_back(Token{std::string(raw.substr(i, j - i)), SyntaxType::literal_token});
                i = j;
            } else if (c == '"' || c == '\'') {
                std::size_t j = raw.find(c, i + 1);
                if (j == std::string_view::npos) throw UnterminatedString(line_no);
                line.tokens.push_back(Token{std::string(raw.substr(i, j - i + 1)), SyntaxType::literal_token});
                i = j + 1;
            } else {
                std::string_view two = raw.substr(i, 2);
                if (two.size() == 2 &&
                    std::find(kTwoCharOps.begin(), kTwoCharOps.end(), two) != kTwoCharOps.end()) {
                    line.tokens.push_back(Token{std::string(two), SyntaxType::operator_token});
                    i += 2;
                } else if (kSingleCharOps.find(c) != std::string_view::npos) {
                    line.tokens.push_back(Token{std::string(1, c), SyntaxType::operator_token});
                    i += 1;
                } else {
                    throw SyntaxError(line_no, std::string("unexpected character '") + c + "'");
                }
            }
        }
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> leading_comment_words(const std::vector<TokenizedLine>& lines) {
    std::vector<std::string> words;
    for (const auto& line : lines) {
        if (line.is_comment) {
            for (const Token& t : line.tokens) words.push_back(t.text);
        } else if (!line.tokens.empty()) {
            break;
        }
    }
    return words;
}

// ---------------------------------------------------------------------------
// Statement validation: a small expression grammar over the unit tokens.
// ---------------------------------------------------------------------------

namespace {

class ExprChecker {
public:
    ExprChecker(const std::vector<Token>& tokens, std::size_t line)
        : tokens_(tokens), line_(line) {}

    // Parses tokens[begin, end) as one expression; throws SyntaxError otherwise.
    void check(std::size_t begin, std::size_t end) {
        pos_ = begin;
        end_ = end;
        if (pos_ == end_) fail("empty expression");
        expression();
        if (pos_ != end_) fail("unexpected token '" + tokens_[pos_].text + "'");
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(line_, what); }

    bool at_end() const { return pos_ >= end_; }
    const Token& peek() const {
        if (at_end()) fail("unexpected end of line");
        return tokens_[pos_];
    }
    bool peek_is(std::string_view text) const { return !at_end() && peek().text == text; }
    void advance() { ++pos_; }

    static bool is_binary_op(const Token& t) {
        static const std::array<std::string_view, 16> ops = {
            "+", "-", "*", "/", "//", "%", "**", "==", "!=", "<", ">", "<=", ">=", "and", "or", "in",
        };
        return std::find(ops.begin(), ops.end(), t.text) != ops.end();
    }

    void expression() {
        unary();
        while (!at_end() && is_binary_op(peek())) {
            advance();
            unary();
        }
    }

    void unary() {
        while (peek_is("-") || peek_is("not")) advance();
        primary();
    }

    void primary() {
        const Token& t = peek();
        if (t.kind == SyntaxType::literal_token) {
            advance();
        } else if (t.text == "(") {
            advance();
            expression();
            if (!peek_is(")")) fail("expected ')'");
            advance();
        } else if (t.kind == SyntaxType::identifier_token) {
            advance();
        } else {
            fail("unexpected token '" + t.text + "'");
        }
        postfix();
    }

    void postfix() {
        while (!at_end()) {
            if (peek_is("(")) {
                advance();
                if (!peek_is(")")) {
                    expression();
                    while (peek_is(",")) {
                        advance();
                        expression();
                    }
                }
                if (!peek_is(")")) fail("expected ')'");
                advance();
            } else if (peek_is("[")) {
                advance();
                expression();
                if (!peek_is("]")) fail("expected ']'");
                advance();
            } else if (peek_is(".")) {
                advance();
                if (at_end() || peek().kind != SyntaxType::identifier_token)
                    fail("expected a name after '.'");
                advance();
            } else {
                break;
            }
        }
    }

    const std::vector<Token>& tokens_;
    std::size_t line_;
    std::size_t pos_ = 0;
    std::size_t end_ = 0;
};

// Splits a token span into the paper's statement-level groups: contiguous
// postfix chains (calls, subscripts, attribute access, parenthesized groups)
// become expression nodes; everything else stays a bare token node.
class Grouper {
public:
    Grouper(ProgramAst& ast, const std::vector<Token>& tokens) : ast_(ast), tokens_(tokens) {}

    void attach(NodeId parent, std::size_t begin, std::size_t end) {
        std::size_t i = begin;
        while (i < end) {
            std::size_t j = group_end(i, end);
            if (j == i + 1 && !starts_group(i)) {
                NodeId leaf = ast_.add_node(tokens_[i].kind, {tokens_[i]}, parent);
                (void)leaf;
            } else {
                NodeId expr = ast_.add_node(SyntaxType::expression, {}, parent);
                for (std::size_t t = i; t < j; ++t)
                    ast_.add_node(tokens_[t].kind, {tokens_[t]}, expr);
            }
            i = j;
        }
    }

private:
    bool starts_group(std::size_t i) const {
        const Token& t = tokens_[i];
        if (t.text == "(") return true;
        if (t.kind != SyntaxType::identifier_token) return false;
        if (i + 1 >= tokens_.size()) return false;
        const std::string& next = tokens_[i + 1].text;
        return next == "(" || next == "[" || next == ".";
    }

    // End of the postfix chain starting at i (or i+1 for a bare token).
    std::size_t group_end(std::size_t i, std::size_t end) const {
        if (!starts_group(i)) return i + 1;
        std::size_t j = tokens_[i].text == "(" ? i : i + 1;
        while (j < end) {
            const std::string& text = tokens_[j].text;
            if (text == "(" || text == "[") {
                int depth = 0;
                while (j < end) {
                    if (tokens_[j].text == "(" || tokens_[j].text == "[") ++depth;
                    if (tokens_[j].text == ")" || tokens_[j].text == "]") --depth;
                    ++j;
                    if (depth == 0) break;
                }
            } else if (text == "." && j + 1 < end &&
                       tokens_[j + 1].kind == SyntaxType::identifier_token) {
                j += 2;
            } else {
                break;
            }
        }
        return j;
    }

    ProgramAst& ast_;
    const std::vector<Token>& tokens_;
};

class Parser {
public:
    explicit Parser(const std::vector<TokenizedLine>& lines, bool allow_dangling_header = false)
        : allow_dangling_header_(allow_dangling_header) {
        for (const auto& line : lines) {
            if (line.is_comment) continue;  // leading block handled by attach_intention
            if (line.tokens.empty()) continue;
            code_.push_back(&line);
        }
    }

    ProgramAst run() {
        ProgramAst ast;
        NodeId root = ast.add_node(SyntaxType::module);
        ast.set_root(root);
        if (code_.empty()) return ast;
        indents_.push_back(code_.front()->indent);
        if (code_.front()->indent != 0) throw IndentError(code_.front()->number);
        parse_block(ast, root);
        if (pos_ < code_.size()) throw IndentError(code_[pos_]->number);
        return ast;
    }

private:
    const TokenizedLine& line() const { return *code_[pos_]; }

    bool line_starts_with(std::string_view kw) const {
        return pos_ < code_.size() && !line().tokens.empty() && line().tokens.front().text == kw;
    }

    // Parses statements while lines stay at the current indent width.
    void parse_block(ProgramAst& ast, NodeId parent) {
        const std::size_t width = indents_.back();
        while (pos_ < code_.size()) {
            if (line().indent < width) {
                if (std::find(indents_.begin(), indents_.end(), line().indent) == indents_.end())
                    throw IndentError(line().number);
                return;  // dedent to an enclosing block
            }
            if (line().indent > width) throw IndentError(line().number);
            parse_statement(ast, parent);
        }
    }

    void parse_statement(ProgramAst& ast, NodeId parent) {
        const TokenizedLine& ln = line();
        const std::string& first = ln.tokens.front().text;
        if (first == "def") {
            parse_compound(ast, parent, SyntaxType::function);
        } else if (first == "class") {
            parse_compound(ast, parent, SyntaxType::class_def);
        } else if (first == "for" || first == "while") {
            parse_compound(ast, parent, SyntaxType::statement);
        } else if (first == "if") {
            parse_if_chain(ast, parent);
        } else if (first == "elif" || first == "else") {
            throw SyntaxError(ln.number, "'" + first + "' without a matching 'if'");
        } else {
            validate_simple(ln);
            NodeId stmt = ast.add_node(SyntaxType::statement, {}, parent);
            Grouper(ast, ln.tokens).attach(stmt, 0, ln.tokens.size());
            ++pos_;
        }
    }

    void validate_header(const TokenizedLine& ln) {
        const auto& toks = ln.tokens;
        if (toks.back().text != ":") throw SyntaxError(ln.number, "expected ':' at end of header");
        const std::string& kw = toks.front().text;
        ExprChecker check(toks, ln.number);
        if (kw == "for") {
            // for NAME in <expr> :
            if (toks.size() < 5 || toks[1].kind != SyntaxType::identifier_token ||
                toks[2].text != "in")
                throw SyntaxError(ln.number, "malformed for header");
            check.check(3, toks.size() - 1);
        } else if (kw == "while" || kw == "if" || kw == "elif") {
            if (toks.size() < 3) throw SyntaxError(ln.number, "missing condition");
            check.check(1, toks.size() - 1);
        } else if (kw == "else") {
            if (toks.size() != 2) throw SyntaxError(ln.number, "malformed else header");
        } else if (kw == "def" || kw == "class") {
            if (toks.size() < 3 || toks[1].kind != SyntaxType::identifier_token)
                throw SyntaxError(ln.number, "expected a name after '" + kw + "'");
            if (toks.size() > 3) check.check(1, toks.size() - 1);
        }
    }

    void validate_simple(const TokenizedLine& ln) {
        const auto& toks = ln.tokens;
        ExprChecker check(toks, ln.number);
        const std::string& first = toks.front().text;
        if (first == "import" || first == "from") {
            // import NAME (. NAME)*
            if (toks.size() < 2 || toks[1].kind != SyntaxType::identifier_token)
                throw SyntaxError(ln.number, "expected a module name after 'import'");
            for (std::size_t i = 2; i < toks.size(); i += 2)
                if (toks[i].text != "." || i + 1 >= toks.size() ||
                    toks[i + 1].kind != SyntaxType::identifier_token)
                    throw SyntaxError(ln.number, "malformed import");
            return;
        }
        if (first == "return") {
            if (toks.size() > 1) check.check(1, toks.size());
            return;
        }
        if (first == "pass" || first == "break" || first == "continue") {
            if (toks.size() != 1) throw SyntaxError(ln.number, "unexpected token after '" + first + "'");
            return;
        }
        // assignment (possibly augmented) or a bare call
        std::size_t eq = toks.size();
        int depth = 0;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const std::string& t = toks[i].text;
            if (t == "(" || t == "[") ++depth;
            if (t == ")" || t == "]") --depth;
            if (depth == 0 && (t == "=" || (t.size() == 2 && t[1] == '='
                               && std::string_view("+-*/%").find(t[0]) != std::string_view::npos))) {
                eq = i;
                break;
            }
        }
        if (eq < toks.size()) {
            if (eq == 0) throw SyntaxError(ln.number, "missing assignment target");
            check.check(0, eq);  // target: name, subscript or attribute chain
            check.check(eq + 1, toks.size());
            return;
        }
        check.check(0, toks.size());
        // a bare expression statement must be a call or attribute chain, not a lone name
        if (toks.size() == 1 && toks.front().kind != SyntaxType::keyword_token &&
            toks.front().kind != SyntaxType::literal_token &&
            toks.front().kind != SyntaxType::identifier_token)
            throw SyntaxError(ln.number, "not a statement");
    }

    // Internal-node contents must be pairwise distinct from every emitted
    // line: the wrapper drops the trailing ':' of its header (def/class
    // wrappers keep it, their syntax type already separates them), the body
    // drops the leading keyword instead.
    std::vector<Token> wrapper_tokens(const std::vector<Token>& header, SyntaxType type) const {
        if (type != SyntaxType::statement) return header;
        return std::vector<Token>(header.begin(), header.end() - 1);
    }

    std::vector<Token> body_tokens(const std::vector<Token>& header) const {
        return std::vector<Token>(header.begin() + 1, header.end());
    }

    NodeId add_condition(ProgramAst& ast, NodeId wrapper, const TokenizedLine& ln) {
        NodeId condition = ast.add_node(SyntaxType::statement, {}, wrapper);
        ast.node(condition).role = NodeRole::condition;
        Grouper(ast, ln.tokens).attach(condition, 0, ln.tokens.size());
        return condition;
    }

    void parse_body(ProgramAst& ast, NodeId wrapper, const std::vector<Token>& header) {
        NodeId body = ast.add_node(SyntaxType::statement, body_tokens(header), wrapper);
        ast.node(body).role = NodeRole::body;
        if (pos_ >= code_.size() && allow_dangling_header_) return;  // fragment seed
        if (pos_ >= code_.size() || line().indent <= indents_.back())
            throw SyntaxError(code_[pos_ - 1]->number, "expected an indented block");
        indents_.push_back(line().indent);
        parse_block(ast, body);
        indents_.pop_back();
    }

    void parse_compound(ProgramAst& ast, NodeId parent, SyntaxType wrapper_type) {
        const TokenizedLine& header_line = line();
        validate_header(header_line);
        NodeId wrapper =
            ast.add_node(wrapper_type, wrapper_tokens(header_line.tokens, wrapper_type), parent);
        ast.node(wrapper).role = NodeRole::wrapper;
        add_condition(ast, wrapper, header_line);
        ++pos_;
        parse_body(ast, wrapper, header_line.tokens);
    }

    void parse_if_chain(ProgramAst& ast, NodeId parent) {
        const TokenizedLine& if_line = line();
        validate_header(if_line);
        NodeId wrapper = ast.add_node(SyntaxType::statement,
                                      wrapper_tokens(if_line.tokens, SyntaxType::statement), parent);
        ast.node(wrapper).role = NodeRole::wrapper;
        add_condition(ast, wrapper, if_line);
        ++pos_;
        parse_body(ast, wrapper, if_line.tokens);

        const std::size_t width = indents_.back();
        while (pos_ < code_.size() && line().indent == width && line_starts_with("elif")) {
            const TokenizedLine& ln = line();
            validate_header(ln);
            add_condition(ast, wrapper, ln);
            ++pos_;
            parse_body(ast, wrapper, ln.tokens);
        }
        if (pos_ < code_.size() && line().indent == width && line_starts_with("else")) {
            const TokenizedLine& ln = line();
            validate_header(ln);
            add_condition(ast, wrapper, ln);
            ++pos_;
            parse_body(ast, wrapper, ln.tokens);
        }
    }

    std::vector<const TokenizedLine*> code_;
    std::size_t pos_ = 0;
    std::vector<std::size_t> indents_;
    bool allow_dangling_header_ = false;
};

void flatten_tokens(const ProgramAst& ast, NodeId id, std::vector<Token>& out) {
    const AstNode& node = ast.node(id);
    for (const Token& t : node.tokens) out.push_back(t);
    for (NodeId child : node.children) flatten_tokens(ast, child, out);
}

bool has_expression_children(const ProgramAst& ast, const AstNode& node) {
    for (NodeId child : node.children) {
        SyntaxType t = ast.node(child).syntax_type;
        if (t == SyntaxType::expression || is_token_type(t)) return true;
    }
    return false;
}

NodeId copy_truncated(const ProgramAst& src, NodeId id, ProgramAst& dst, NodeId parent,
                      std::size_t max_tokens) {
    const AstNode& node = src.node(id);
    if (has_expression_children(src, node) ||
        (node.is_leaf() && node.syntax_type == SyntaxType::statement &&
         node.role != NodeRole::body)) {
        std::vector<Token> tokens;
        flatten_tokens(src, id, tokens);
        if (tokens.size() > max_tokens) throw TruncationOverflow(id, tokens.size(), max_tokens);
        NodeId copy = dst.add_node(node.syntax_type, std::move(tokens), parent);
        dst.node(copy).role = node.role;
        return copy;
    }
    if (node.tokens.size() > max_tokens)
        throw TruncationOverflow(id, node.tokens.size(), max_tokens);
    NodeId copy = dst.add_node(node.syntax_type, node.tokens, parent);
    dst.node(copy).role = node.role;
    dst.node(copy).intention = node.intention;
    for (NodeId child : node.children) copy_truncated(src, child, dst, copy, max_tokens);
    return copy;
}

// Nesting depth of a leaf = number of enclosing body containers.
std::size_t emit_depth(const ProgramAst& ast, NodeId leaf) {
    std::size_t depth = 0;
    for (NodeId id = ast.node(leaf).parent; id != kNoNode; id = ast.node(id).parent)
        if (ast.node(id).role == NodeRole::body) ++depth;
    return depth;
}

}  // namespace

ProgramAst parse(const std::vector<TokenizedLine>& lines) { return Parser(lines).run(); }

ProgramAst parse_source(std::string_view source) { return parse(tokenize(source)); }

ProgramAst parse_fragment(std::string_view source) {
    return Parser(tokenize(source), /*allow_dangling_header=*/true).run();
}

ProgramAst truncate(const ProgramAst& ast, std::size_t max_tokens) {
    ProgramAst out;
    if (ast.root() == kNoNode) return out;
    out.set_root(copy_truncated(ast, ast.root(), out, kNoNode, max_tokens));
    return out;
}

std::vector<std::string> intention_words(std::string_view comment, std::size_t max_words) {
    std::vector<std::string> words;
    for (auto& word : split_words(comment)) {
        while (!word.empty() && word.front() == '#') word.erase(word.begin());
        if (word.empty()) continue;
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (words.size() == max_words) break;
        words.push_back(std::move(word));
    }
    return words;
}

void attach_intention(ProgramAst& ast, std::string_view comment, std::size_t max_words) {
    std::vector<Token> intention;
    for (auto& word : intention_words(comment, max_words))
        intention.push_back(Token{std::move(word), SyntaxType::comment_token});
    ast.node(ast.root()).intention = std::move(intention);
}

std::string emit_source(const ProgramAst& ast) {
    std::string out;
    if (ast.root() == kNoNode) return out;
    for (NodeId id : ast.leaves()) {
        const AstNode& leaf = ast.node(id);
        if (leaf.tokens.empty()) continue;  // an empty module root is its own leaf
        if (leaf.role == NodeRole::body) continue;  // childless body container
        out.append(emit_depth(ast, id), '\t');
        for (std::size_t i = 0; i < leaf.tokens.size(); ++i) {
            if (i > 0) out.push_back(' ');
            out += leaf.tokens[i].text;
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<std::string> leaf_token_texts(const ProgramAst& ast) {
    std::vector<std::string> out;
    if (ast.root() == kNoNode) return out;
    for (NodeId id : ast.leaves()) {
        if (ast.node(id).role == NodeRole::body) continue;
        for (const Token& t : ast.node(id).tokens) out.push_back(t.text);
    }
    return out;
}

bool is_compound_header(const NodeContent& content) {
    if (content.tokens.empty()) return false;
    const std::string& first = content.tokens.front();
    return first == "for" || first == "while" || first == "if";
}

bool opens_block(const NodeContent& content) {
    if (content.type == SyntaxType::function || content.type == SyntaxType::class_def)
        return !content.tokens.empty() && content.tokens.back() == ":";
    // loop/if wrapper contents carry their header without the trailing ':'
    return content.type == SyntaxType::statement && is_compound_header(content) &&
           content.tokens.back() != ":";
}

bool starts_with_block_keyword(const NodeContent& content) {
    if (content.tokens.empty()) return false;
    const std::string& first = content.tokens.front();
    return first == "for" || first == "while" || first == "if" || first == "elif" ||
           first == "else" || first == "def" || first == "class";
}

}  // namespace hsu
