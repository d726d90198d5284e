#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace argrel {

/// Relation classes. RA/CA/MA/NO form the standard four-way task; Support and
/// Attack only appear after collapsing to the binary scheme.
enum class RelationLabel : std::uint8_t { RA, CA, MA, NO, Support, Attack };

using LabelSet = std::vector<RelationLabel>;

std::string_view to_string(RelationLabel label);
std::optional<RelationLabel> parse_label(std::string_view text);

/// [RA, CA, MA, NO]
const LabelSet& standard_labels();
/// [Support, Attack]
const LabelSet& binary_labels();

std::optional<std::size_t> index_of(const LabelSet& set, RelationLabel label);

/// "RA,CA,MA,NO"
std::string join_labels(const LabelSet& set);
/// Inverse of join_labels; nullopt on any unknown or repeated label.
std::optional<LabelSet> parse_label_set(std::string_view text);

}  // namespace argrel
