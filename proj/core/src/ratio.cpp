#include "argrel/ratio.hpp"

#include <charconv>
#include <numeric>

#include "argrel/errors.hpp"

namespace argrel {

Ratio::Ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "ratio with zero denominator");
  const auto g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

std::uint64_t Ratio::floor_times(std::uint64_t n) const {
  const unsigned __int128 p = static_cast<unsigned __int128>(n) * num_;
  return static_cast<std::uint64_t>(p / den_);
}

std::string Ratio::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

namespace {

std::uint64_t parse_digits(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidArgument, "not a ratio: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Ratio Ratio::parse(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::InvalidArgument, "empty ratio");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Ratio(parse_digits(text.substr(0, slash), text),
                 parse_digits(text.substr(slash + 1), text));
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Ratio(parse_digits(text, text), 1);
  auto int_part = text.substr(0, dot);
  auto frac_part = text.substr(dot + 1);
  if (frac_part.empty() || frac_part.size() > 18) {
    throw Error(ErrorCode::InvalidArgument, "not a ratio: '" + std::string(text) + "'");
  }
  std::uint64_t scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  const std::uint64_t whole = int_part.empty() ? 0 : parse_digits(int_part, text);
  const std::uint64_t frac = parse_digits(frac_part, text);
  return Ratio(whole * scale + frac, scale);
}

}  // namespace argrel
