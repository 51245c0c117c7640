// Copyright 2026 The tsot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSOT_DETAIL_UTF8_HPP
#define TSOT_DETAIL_UTF8_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace tsot::detail {

// Code points with the Unicode White_Space property.
constexpr bool is_unicode_space(char32_t cp) noexcept {
  switch (cp) {
    case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
    case 0x0020: case 0x0085: case 0x00A0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Length in bytes of the whitespace character starting at `pos`, or 0 if the
// character there is not whitespace. Invalid UTF-8 is never whitespace.
constexpr std::size_t space_length_at(std::string_view s, std::size_t pos) noexcept {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return is_unicode_space(b0) ? 1 : 0;

  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else {
    // 4-byte sequences are outside the BMP; none of them is whitespace.
    return 0;
  }
  if (pos + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[pos + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  return is_unicode_space(cp) ? len : 0;
}

// Byte length of the (possibly malformed) character starting at `pos`.
constexpr std::size_t char_length_at(std::string_view s, std::size_t pos) noexcept {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  std::size_t len = 1;
  if ((b0 & 0xE0) == 0xC0) len = 2;
  else if ((b0 & 0xF0) == 0xE0) len = 3;
  else if ((b0 & 0xF8) == 0xF0) len = 4;
  return pos + len <= s.size() ? len : 1;
}

constexpr bool contains_space(std::string_view s) noexcept {
  for (std::size_t pos = 0; pos < s.size(); pos += char_length_at(s, pos)) {
    if (space_length_at(s, pos) != 0) return true;
  }
  return false;
}

}  // namespace tsot::detail

#endif  // TSOT_DETAIL_UTF8_HPP
