#pragma once

#include <string>
#include <string_view>

namespace argrel {

enum class Casing { Cased, Uncased };

std::string_view to_string(Casing casing);

namespace text {

/// ASCII whitespace plus U+00A0 (no-break space, common in transcripts).
std::string_view trim(std::string_view s);

/// Collapses every whitespace run to one space, trims both ends and, for
/// Uncased, lowercases ASCII letters. Non-ASCII bytes pass through.
/// Idempotent; the result never contains tabs or newlines.
std::string normalize(std::string_view s, Casing casing);

}  // namespace text
}  // namespace argrel
