// Copyright 2026 The namedis Authors
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

#include "namedis/text.hpp"

#include <algorithm>
#include <cstdint>

namespace namedis {
namespace {

// Decodes one UTF-8 sequence starting at text[pos]; advances pos. Returns
// nullopt for malformed input (one byte is consumed).
std::optional<char32_t> decode_utf8(std::string_view text, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  int extra = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++pos;
    return std::nullopt;
  }
  if (pos + extra >= text.size()) {
    pos = text.size();
    return std::nullopt;
  }
  for (int k = 1; k <= extra; ++k) {
    const auto c = static_cast<unsigned char>(text[pos + k]);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return std::nullopt;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  pos += extra + 1;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Base letters for U+00C0..U+00FF; empty entries are symbols (× and ÷).
constexpr const char* kLatin1[64] = {
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e",  "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o",  "",  "o", "u", "u",  "u", "u", "y", "th", "ss",
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e",  "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o",  "",  "o", "u", "u",  "u", "u", "y", "th", "y"};

// Base letters for U+0100..U+017F.
constexpr const char* kLatinExtA[128] = {
    "a",  "a",  "a", "a", "a", "a", "c", "c", "c", "c", "c", "c", "c", "c", "d", "d",
    "d",  "d",  "e", "e", "e", "e", "e", "e", "e", "e", "e", "e", "g", "g", "g", "g",
    "g",  "g",  "g", "g", "h", "h", "h", "h", "i", "i", "i", "i", "i", "i", "i", "i",
    "i",  "i",  "ij", "ij", "j", "j", "k", "k", "k", "l", "l", "l", "l", "l", "l", "l",
    "l",  "l",  "l", "n", "n", "n", "n", "n", "n", "n", "n", "n", "o", "o", "o", "o",
    "o",  "o",  "oe", "oe", "r", "r", "r", "r", "r", "r", "s", "s", "s", "s", "s", "s",
    "s",  "s",  "t", "t", "t", "t", "t", "t", "u", "u", "u", "u", "u", "u", "u", "u",
    "u",  "u",  "u", "u", "w", "w", "y", "y", "y", "z", "z", "z", "z", "z", "z", "s"};

bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  if (cp <= 0xBF) return false;               // Latin-1 symbols and controls
  if (cp == 0xD7 || cp == 0xF7) return false;  // × ÷
  if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;  // fullwidth punctuation
  if (cp == 0xFEFF) return false;
  return true;
}

template <class Fn>
void for_each_folded(std::string_view text, Fn&& emit) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto cp = decode_utf8(text, pos);
    if (!cp) continue;
    if (*cp < 0x80) {
      char c = static_cast<char>(*cp);
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      emit(static_cast<char32_t>(c), std::string_view(&c, 1));
    } else if (*cp >= 0xC0 && *cp <= 0xFF && kLatin1[*cp - 0xC0][0] != '\0') {
      emit(U'a', std::string_view(kLatin1[*cp - 0xC0]));
    } else if (*cp >= 0x100 && *cp <= 0x17F) {
      emit(U'a', std::string_view(kLatinExtA[*cp - 0x100]));
    } else {
      std::string buf;
      encode_utf8(*cp, buf);
      emit(*cp, std::string_view(buf));
    }
  }
}

}  // namespace

std::string fold_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for_each_folded(text, [&](char32_t, std::string_view piece) { out.append(piece); });
  return out;
}

std::optional<std::string> normalize_name(std::string_view raw) {
  std::string out;
  for_each_folded(raw, [&](char32_t cp, std::string_view piece) {
    if (is_word_char(cp)) out.append(piece);
  });
  if (out.empty()) return std::nullopt;
  return out;
}

std::optional<std::string> name_key(std::string_view raw) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  const auto flush = [&](std::size_t end) {
    if (end > start) {
      if (auto part = normalize_name(raw.substr(start, end - start))) parts.push_back(*part);
    }
  };
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',' || c == '_') {
      flush(i);
      start = i + 1;
    }
  }
  flush(raw.size());
  if (parts.empty()) return std::nullopt;
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const auto& p : parts) key += p;
  return key;
}

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  for_each_folded(text, [&](char32_t cp, std::string_view piece) {
    if (is_word_char(cp)) {
      current.append(piece);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  });
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TokenList tokenize_filtered(std::string_view text) {
  TokenList tokens = tokenize(text);
  std::erase_if(tokens, [](const std::string& t) { return is_stopword(t); });
  return tokens;
}

bool is_stopword(std::string_view token) {
  const auto& list = stopwords();
  return std::binary_search(list.begin(), list.end(), token);
}

TokenSet to_set(const TokenList& tokens) { return TokenSet(tokens.begin(), tokens.end()); }

std::string join(const TokenList& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

std::string join(const TokenSet& tokens, std::string_view sep) {
  return join(TokenList(tokens.begin(), tokens.end()), sep);
}

}  // namespace namedis
