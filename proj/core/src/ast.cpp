#include "hsu/ast.hpp"

#include <stdexcept>

namespace hsu {

std::string_view to_string(SyntaxType type) {
    switch (type) {
        case SyntaxType::pad: return "pad";
        case SyntaxType::module: return "module";
        case SyntaxType::class_def: return "class";
        case SyntaxType::function: return "function";
        case SyntaxType::statement: return "statement";
        case SyntaxType::expression: return "expression";
        case SyntaxType::keyword_token: return "keyword-token";
        case SyntaxType::identifier_token: return "identifier-token";
        case SyntaxType::operator_token: return "operator-token";
        case SyntaxType::literal_token: return "literal-token";
        case SyntaxType::comment_token: return "comment-token";
    }
    return "pad";
}

SyntaxType syntax_type_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kSyntaxTypeCount; ++i) {
        auto type = static_cast<SyntaxType>(i);
        if (to_string(type) == name) return type;
    }
    throw std::invalid_argument("unknown syntax type name: " + std::string(name));
}

bool is_token_type(SyntaxType type) {
    switch (type) {
        case SyntaxType::keyword_token:
        case SyntaxType::identifier_token:
        case SyntaxType::operator_token:
        case SyntaxType::literal_token:
        case SyntaxType::comment_token:
            return true;
        default:
            return false;
    }
}

NodeId ProgramAst::add_node(SyntaxType type, std::vector<Token> tokens, NodeId parent) {
    AstNode node;
    node.id = nodes_.size();
    node.syntax_type = type;
    node.tokens = std::move(tokens);
    node.parent = parent;
    nodes_.push_back(std::move(node));
    if (parent != kNoNode) nodes_[parent].children.push_back(nodes_.back().id);
    return nodes_.back().id;
}

void ProgramAst::add_child(NodeId parent, NodeId child) {
    nodes_.at(parent).children.push_back(child);
    nodes_.at(child).parent = parent;
}

void ProgramAst::preorder_into(NodeId id, std::vector<NodeId>& out) const {
    out.push_back(id);
    for (NodeId child : nodes_.at(id).children) preorder_into(child, out);
}

std::vector<NodeId> ProgramAst::preorder() const {
    std::vector<NodeId> out;
    if (root_ != kNoNode) preorder_into(root_, out);
    return out;
}

std::vector<NodeId> ProgramAst::leaves() const {
    std::vector<NodeId> out;
    for (NodeId id : preorder())
        if (node(id).is_leaf()) out.push_back(id);
    return out;
}

std::vector<NodeId> ProgramAst::internal_nodes() const {
    std::vector<NodeId> out;
    for (NodeId id : preorder())
        if (!node(id).is_leaf()) out.push_back(id);
    return out;
}

bool ProgramAst::same_shape(const ProgramAst& other) const {
    auto a = preorder();
    auto b = other.preorder();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const AstNode& x = node(a[i]);
        const AstNode& y = other.node(b[i]);
        if (x.syntax_type != y.syntax_type || x.tokens != y.tokens ||
            x.intention != y.intention || x.children.size() != y.children.size())
            return false;
    }
    return true;
}

NodeContent content_of(const AstNode& node) {
    NodeContent c;
    c.type = node.syntax_type;
    const auto& source = (node.syntax_type == SyntaxType::module) ? node.intention : node.tokens;
    c.tokens.reserve(source.size());
    for (const Token& t : source) c.tokens.push_back(t.text);
    return c;
}

}  // namespace hsu
