#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace crowdspan {

// Converts between UTF-8 byte offsets (used internally) and Unicode code point
// offsets (used in every JSON record, so files interoperate with Python tools).
class Utf8Index {
 public:
  explicit Utf8Index(std::string_view text);

  std::size_t code_points() const { return byte_of_cp_.size() - 1; }
  std::size_t bytes() const { return byte_of_cp_.back(); }

  // Code point offset -> byte offset. Requires cp <= code_points().
  std::size_t to_byte(std::size_t cp) const { return byte_of_cp_[cp]; }

  // Byte offset -> code point offset; the byte must start a code point
  // (or equal bytes()). Returns npos otherwise.
  std::size_t to_code_point(std::size_t byte) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::size_t> byte_of_cp_;
};

// Length in bytes of the UTF-8 sequence introduced by lead byte c (1 for
// stray continuation bytes so scanning always advances).
std::size_t utf8_sequence_length(unsigned char c);

}  // namespace crowdspan
