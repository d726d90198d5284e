#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace argrel {

/// Exact non-negative rational, always stored reduced.
class Ratio {
 public:
  Ratio(std::uint64_t num, std::uint64_t den);

  /// Accepts "0.65", "65/100", ".8" or "1". Throws InvalidArgument.
  static Ratio parse(std::string_view text);

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  /// True iff 0 < r < 1.
  bool in_open_unit() const noexcept { return num_ > 0 && num_ < den_; }
  /// floor(n * r), exact.
  std::uint64_t floor_times(std::uint64_t n) const;

  /// "13/20"
  std::string str() const;

  friend bool operator==(const Ratio&, const Ratio&) = default;

 private:
  std::uint64_t num_;
  std::uint64_t den_;
};

}  // namespace argrel
