// Copyright 2026 The SEMDR Authors.
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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace semdr {

// One decoded Unicode scalar value and the byte range it occupies.
struct CodePoint {
  char32_t value;
  size_t offset;
  size_t length;
};

// Decodes UTF-8. Malformed bytes decode as U+FFFD covering one byte, so the
// function is total and byte offsets stay monotone.
std::vector<CodePoint> decode_utf8(std::string_view text);

std::u32string to_u32(std::string_view text);

// Byte sub-range [begin, end) with ASCII whitespace stripped from both ends.
struct ByteSpan {
  size_t begin = 0;
  size_t end = 0;
  size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
};

ByteSpan trim_span(std::string_view text, ByteSpan span);
std::string trim(std::string_view text);

}  // namespace semdr
