#include "argrel/labels.hpp"

#include <algorithm>

namespace argrel {

std::string_view to_string(RelationLabel label) {
  switch (label) {
    case RelationLabel::RA: return "RA";
    case RelationLabel::CA: return "CA";
    case RelationLabel::MA: return "MA";
    case RelationLabel::NO: return "NO";
    case RelationLabel::Support: return "Support";
    case RelationLabel::Attack: return "Attack";
  }
  return "?";
}

std::optional<RelationLabel> parse_label(std::string_view text) {
  if (text == "RA") return RelationLabel::RA;
  if (text == "CA") return RelationLabel::CA;
  if (text == "MA") return RelationLabel::MA;
  if (text == "NO") return RelationLabel::NO;
  if (text == "Support") return RelationLabel::Support;
  if (text == "Attack") return RelationLabel::Attack;
  return std::nullopt;
}

const LabelSet& standard_labels() {
  static const LabelSet set{RelationLabel::RA, RelationLabel::CA, RelationLabel::MA,
                            RelationLabel::NO};
  return set;
}

const LabelSet& binary_labels() {
  static const LabelSet set{RelationLabel::Support, RelationLabel::Attack};
  return set;
}

std::optional<std::size_t> index_of(const LabelSet& set, RelationLabel label) {
  auto it = std::find(set.begin(), set.end(), label);
  if (it == set.end()) return std::nullopt;
  return static_cast<std::size_t>(it - set.begin());
}

std::string join_labels(const LabelSet& set) {
  std::string out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ',';
    out += to_string(set[i]);
  }
  return out;
}

std::optional<LabelSet> parse_label_set(std::string_view text) {
  LabelSet set;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = text.substr(0, comma);
    auto label = parse_label(item);
    if (!label || index_of(set, *label)) return std::nullopt;
    set.push_back(*label);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (set.empty()) return std::nullopt;
  return set;
}

}  // namespace argrel
