#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsu {

// Node categories. `pad` never appears in a parsed tree, only in padded batches.
enum class SyntaxType : std::uint8_t {
    pad = 0,
    module,
    class_def,
    function,
    statement,
    expression,
    keyword_token,
    identifier_token,
    operator_token,
    literal_token,
    comment_token,
};

inline constexpr std::size_t kSyntaxTypeCount = 11;

std::string_view to_string(SyntaxType type);
SyntaxType syntax_type_from_string(std::string_view name);
bool is_token_type(SyntaxType type);

struct Token {
    std::string text;
    SyntaxType kind = SyntaxType::identifier_token;

    bool operator==(const Token&) const = default;
};

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

// Structural role of a node inside compound statements. Wrappers own
// alternating condition/body children; conditions are the header lines
// themselves; bodies hold the indented block.
enum class NodeRole : std::uint8_t { plain, wrapper, condition, body };

struct AstNode {
    NodeId id = kNoNode;
    SyntaxType syntax_type = SyntaxType::statement;
    NodeRole role = NodeRole::plain;
    std::vector<Token> tokens;
    std::vector<Token> intention;  // non-empty only on the root
    std::vector<NodeId> children;
    NodeId parent = kNoNode;

    bool is_leaf() const { return children.empty(); }
};

// Tree of program component nodes. Sibling order is significant everywhere.
class ProgramAst {
public:
    ProgramAst() = default;

    NodeId add_node(SyntaxType type, std::vector<Token> tokens = {}, NodeId parent = kNoNode);
    void add_child(NodeId parent, NodeId child);

    const AstNode& node(NodeId id) const { return nodes_.at(id); }
    AstNode& node(NodeId id) { return nodes_.at(id); }
    NodeId root() const { return root_; }
    void set_root(NodeId id) { root_ = id; }
    std::size_t size() const { return nodes_.size(); }

    // Pre-order ids; children visited in sibling order.
    std::vector<NodeId> preorder() const;
    std::vector<NodeId> leaves() const;
    std::vector<NodeId> internal_nodes() const;

    // Structural equality ignoring node ids.
    bool same_shape(const ProgramAst& other) const;

private:
    void preorder_into(NodeId id, std::vector<NodeId>& out) const;

    std::vector<AstNode> nodes_;
    NodeId root_ = kNoNode;
};

// Content of one node as compared by the tasks and diagnostics: type plus token texts.
struct NodeContent {
    SyntaxType type = SyntaxType::pad;
    std::vector<std::string> tokens;

    bool operator==(const NodeContent&) const = default;
    bool operator<(const NodeContent& other) const {
        if (type != other.type) return type < other.type;
        return tokens < other.tokens;
    }
};

NodeContent content_of(const AstNode& node);

}  // namespace hsu
