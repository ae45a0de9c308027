//
// Copyright 2026 The dashcam-hazard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DASHCAM_TEXT_H_
#define DASHCAM_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace dashcam {

// ASCII-only helpers; bytes >= 0x80 pass through untouched.
std::string_view Trim(std::string_view s);
std::string ToLower(std::string_view s);
std::vector<std::string> SplitWhitespace(std::string_view s);

// Lowercases and collapses runs of whitespace to one space, trimmed.
std::string NormalizeText(std::string_view s);

// Strips ASCII punctuation from both ends of a token.
std::string_view StripPunctuation(std::string_view token);

// Longest prefix of at most max_bytes bytes that does not split a UTF-8
// code point.
std::string Utf8Prefix(std::string_view s, std::size_t max_bytes);

}  // namespace dashcam

#endif  // DASHCAM_TEXT_H_
