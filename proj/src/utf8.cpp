#include "crowdspan/utf8.hpp"

#include <algorithm>

namespace crowdspan {

std::size_t utf8_sequence_length(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) return 2;
  if ((c & 0xF0) == 0xE0) return 3;
  if ((c & 0xF8) == 0xF0) return 4;
  return 1;
}

Utf8Index::Utf8Index(std::string_view text) {
  byte_of_cp_.reserve(text.size() + 1);
  std::size_t i = 0;
  while (i < text.size()) {
    byte_of_cp_.push_back(i);
    i += utf8_sequence_length(static_cast<unsigned char>(text[i]));
  }
  byte_of_cp_.push_back(std::min(i, text.size()));
}

std::size_t Utf8Index::to_code_point(std::size_t byte) const {
  auto it = std::lower_bound(byte_of_cp_.begin(), byte_of_cp_.end(), byte);
  if (it == byte_of_cp_.end() || *it != byte) return npos;
  return static_cast<std::size_t>(it - byte_of_cp_.begin());
}

}  // namespace crowdspan
