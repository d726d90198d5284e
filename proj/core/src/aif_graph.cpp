#include "argrel/aif_graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "argrel/errors.hpp"
#include "argrel/text.hpp"

namespace argrel::aif {

using nlohmann::json;

NodeKind NodeKind::from_aif(std::string_view type) {
  if (type == "I") return information();
  if (type == "RA") return inference();
  if (type == "CA") return conflict();
  if (type == "MA") return rephrase();
  if (type == "L") return locution();
  return other(std::string(type));
}

NodeKind NodeKind::other(std::string tag) {
  NodeKind k(Tag::Other);
  k.other_ = std::move(tag);
  return k;
}

std::string NodeKind::aif_tag() const {
  switch (tag_) {
    case Tag::Information: return "I";
    case Tag::Inference: return "RA";
    case Tag::Conflict: return "CA";
    case Tag::Rephrase: return "MA";
    case Tag::Locution: return "L";
    case Tag::Other: return other_;
  }
  return other_;
}

namespace {

std::string read_id(const json& obj, const char* field, const std::string& map_id,
                    const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw SchemaViolation(map_id, where + "/" + field, "missing required field");
  }
  std::string id;
  if (it->is_string()) {
    id = it->get<std::string>();
  } else if (it->is_number_integer()) {
    id = it->dump();
  } else {
    throw SchemaViolation(map_id, where + "/" + field, "expected string or integer id");
  }
  if (id.empty()) throw SchemaViolation(map_id, where + "/" + field, "empty id");
  return id;
}

std::string read_string(const json& obj, const char* field, const std::string& map_id,
                        const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw SchemaViolation(map_id, where + "/" + field, "missing required field");
  }
  if (!it->is_string()) {
    throw SchemaViolation(map_id, where + "/" + field, "expected string");
  }
  return it->get<std::string>();
}

const json& read_array(const json& doc, const char* field, const std::string& map_id) {
  auto it = doc.find(field);
  if (it == doc.end()) {
    throw SchemaViolation(map_id, std::string("/") + field, "missing required array");
  }
  if (!it->is_array()) throw SchemaViolation(map_id, std::string("/") + field, "expected array");
  return *it;
}

}  // namespace

ArgumentMap parse_argument_map(std::string_view json_text, std::string_view map_id,
                               std::string_view corpus_id) {
  ArgumentMap map;
  map.map_id = std::string(map_id);
  map.corpus_id = std::string(corpus_id);

  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw MalformedJson(map.map_id, e.byte, e.what());
  }
  if (!doc.is_object()) throw SchemaViolation(map.map_id, "/", "top level must be an object");

  const json& nodes = read_array(doc, "nodes", map.map_id);
  const json& edges = read_array(doc, "edges", map.map_id);

  std::unordered_set<std::string> node_ids;
  map.nodes.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "/nodes/" + std::to_string(i);
    const json& n = nodes[i];
    if (!n.is_object()) throw SchemaViolation(map.map_id, where, "expected object");
    AifNode node;
    node.id = read_id(n, "nodeID", map.map_id, where);
    node.text = std::string(text::trim(read_string(n, "text", map.map_id, where)));
    node.kind = NodeKind::from_aif(read_string(n, "type", map.map_id, where));
    if (!node_ids.insert(node.id).second) {
      throw SchemaViolation(map.map_id, where + "/nodeID", "duplicate node id " + node.id);
    }
    map.nodes.push_back(std::move(node));
  }

  std::unordered_set<std::string> edge_ids;
  map.edges.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "/edges/" + std::to_string(i);
    const json& e = edges[i];
    if (!e.is_object()) throw SchemaViolation(map.map_id, where, "expected object");
    AifEdge edge;
    edge.id = read_id(e, "edgeID", map.map_id, where);
    edge.from = read_id(e, "fromID", map.map_id, where);
    edge.to = read_id(e, "toID", map.map_id, where);
    if (!edge_ids.insert(edge.id).second) {
      throw SchemaViolation(map.map_id, where + "/edgeID", "duplicate edge id " + edge.id);
    }
    if (!node_ids.count(edge.from)) {
      throw SchemaViolation(map.map_id, where + "/fromID", "dangling endpoint " + edge.from);
    }
    if (!node_ids.count(edge.to)) {
      throw SchemaViolation(map.map_id, where + "/toID", "dangling endpoint " + edge.to);
    }
    map.edges.push_back(std::move(edge));
  }
  return map;
}

std::string serialize_argument_map(const ArgumentMap& map) {
  json doc = json::object();
  json nodes = json::array();
  for (const auto& n : map.nodes) {
    nodes.push_back({{"nodeID", n.id}, {"text", n.text}, {"type", n.kind.aif_tag()}});
  }
  json edges = json::array();
  for (const auto& e : map.edges) {
    edges.push_back({{"edgeID", e.id}, {"fromID", e.from}, {"toID", e.to}});
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

std::vector<AifNode> relation_nodes(const ArgumentMap& map) {
  std::vector<AifNode> out;
  for (const auto& n : map.nodes) {
    if (n.kind.is_relation()) out.push_back(n);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AifNode& a, const AifNode& b) { return a.id < b.id; });
  return out;
}

std::vector<Violation> validate(const ArgumentMap& map) {
  std::vector<Violation> out;
  auto report = [&](std::string_view rule, const std::string& id, std::string message) {
    out.push_back({std::string(rule), id, map.map_id, std::move(message)});
  };

  std::unordered_map<std::string, const AifNode*> by_id;
  for (const auto& n : map.nodes) {
    if (n.id.empty()) {
      report(kRuleEmptyId, n.id, "node with empty id");
      continue;
    }
    if (!by_id.emplace(n.id, &n).second) {
      report(kRuleDuplicateNode, n.id, "node id appears more than once");
    }
    if (n.kind.is_information() && text::trim(n.text).empty()) {
      report(kRuleEmptyProposition, n.id, "I-node text is empty");
    }
  }

  std::unordered_set<std::string> edge_ids;
  std::unordered_map<std::string, int> in_degree;
  std::unordered_map<std::string, int> out_degree;
  for (const auto& e : map.edges) {
    if (e.id.empty()) report(kRuleEmptyId, e.id, "edge with empty id");
    else if (!edge_ids.insert(e.id).second) {
      report(kRuleDuplicateEdge, e.id, "edge id appears more than once");
    }
    bool dangling = false;
    for (const std::string* end : {&e.from, &e.to}) {
      if (!by_id.count(*end)) {
        report(kRuleDanglingEdge, e.id, "endpoint " + *end + " names no node");
        dangling = true;
      }
    }
    if (e.from == e.to) report(kRuleSelfLoop, e.id, "edge starts and ends at " + e.from);
    if (!dangling) {
      ++out_degree[e.from];
      ++in_degree[e.to];
    }
  }

  for (const auto& n : relation_nodes(map)) {
    if (!in_degree.count(n.id)) {
      report(kRuleMissingSource, n.id, n.kind.aif_tag() + " node has no incoming edge");
    }
    if (!out_degree.count(n.id)) {
      report(kRuleMissingTarget, n.id, n.kind.aif_tag() + " node has no outgoing edge");
    }
  }
  return out;
}

}  // namespace argrel::aif
