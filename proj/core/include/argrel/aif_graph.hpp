#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace argrel::aif {

/// Node type of an AIF graph. Inference/Conflict/Rephrase are the scheme
/// nodes that carry relations (AIF tags RA/CA/MA). Any tag we do not model
/// (YA, TA, ...) is kept verbatim as Other.
class NodeKind {
 public:
  enum class Tag { Information, Inference, Conflict, Rephrase, Locution, Other };

  NodeKind() = default;
  static NodeKind from_aif(std::string_view type);
  static NodeKind other(std::string tag);

  static NodeKind information() { return NodeKind(Tag::Information); }
  static NodeKind inference() { return NodeKind(Tag::Inference); }
  static NodeKind conflict() { return NodeKind(Tag::Conflict); }
  static NodeKind rephrase() { return NodeKind(Tag::Rephrase); }
  static NodeKind locution() { return NodeKind(Tag::Locution); }

  Tag tag() const noexcept { return tag_; }
  /// The AIF "type" string this kind round-trips to.
  std::string aif_tag() const;
  bool is_relation() const noexcept {
    return tag_ == Tag::Inference || tag_ == Tag::Conflict || tag_ == Tag::Rephrase;
  }
  bool is_information() const noexcept { return tag_ == Tag::Information; }

  friend bool operator==(const NodeKind&, const NodeKind&) = default;

 private:
  explicit NodeKind(Tag tag) : tag_(tag) {}

  Tag tag_ = Tag::Information;
  std::string other_;
};

struct AifNode {
  std::string id;
  std::string text;
  NodeKind kind;

  friend bool operator==(const AifNode&, const AifNode&) = default;
};

struct AifEdge {
  std::string id;
  std::string from;
  std::string to;

  friend bool operator==(const AifEdge&, const AifEdge&) = default;
};

struct ArgumentMap {
  std::string map_id;
  std::string corpus_id;
  std::vector<AifNode> nodes;
  std::vector<AifEdge> edges;
};

/// Parses an AIFdb-style document: top-level "nodes" and "edges" arrays,
/// nodes carrying "nodeID"/"text"/"type", edges "edgeID"/"fromID"/"toID".
/// Ids may be JSON strings or integers. Unknown fields are ignored.
///
/// Throws MalformedJson on syntax errors and SchemaViolation on a missing
/// or mistyped field, a duplicate id, or an edge endpoint that names no node.
ArgumentMap parse_argument_map(std::string_view json_text, std::string_view map_id,
                               std::string_view corpus_id);

/// Inverse of parse_argument_map (canonical key order, 2-space indent).
std::string serialize_argument_map(const ArgumentMap& map);

/// RA/CA/MA nodes, sorted by id.
std::vector<AifNode> relation_nodes(const ArgumentMap& map);

struct Violation {
  std::string rule;
  std::string element_id;
  std::string map_id;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Rule names reported by validate().
inline constexpr std::string_view kRuleEmptyId = "empty-id";
inline constexpr std::string_view kRuleDuplicateNode = "duplicate-node-id";
inline constexpr std::string_view kRuleDuplicateEdge = "duplicate-edge-id";
inline constexpr std::string_view kRuleDanglingEdge = "dangling-edge";
inline constexpr std::string_view kRuleSelfLoop = "self-loop";
inline constexpr std::string_view kRuleMissingSource = "relation-missing-source";
inline constexpr std::string_view kRuleMissingTarget = "relation-missing-target";
inline constexpr std::string_view kRuleEmptyProposition = "empty-proposition";

/// Empty iff every map invariant holds. Never throws on bad data.
std::vector<Violation> validate(const ArgumentMap& map);

}  // namespace argrel::aif
