// Copyright 2026 The mtgb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtgb/text.hpp"

#include <algorithm>
#include <iterator>
#include <fstream>
#include <sstream>

#include "mtgb/error.hpp"

namespace mtgb::text {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

struct Composition {
  char32_t base;
  char32_t mark;
  char32_t composed;
};

// clang-format off
constexpr Composition kCompositions[] = {
    {U'A', 0x0300, 0x00C0}, {U'E', 0x0300, 0x00C8}, {U'I', 0x0300, 0x00CC}, {U'O', 0x0300, 0x00D2}, {U'U', 0x0300, 0x00D9},
    {U'a', 0x0300, 0x00E0}, {U'e', 0x0300, 0x00E8}, {U'i', 0x0300, 0x00EC}, {U'o', 0x0300, 0x00F2}, {U'u', 0x0300, 0x00F9},
    {U'A', 0x0301, 0x00C1}, {U'E', 0x0301, 0x00C9}, {U'I', 0x0301, 0x00CD}, {U'O', 0x0301, 0x00D3}, {U'U', 0x0301, 0x00DA}, {U'Y', 0x0301, 0x00DD},
    {U'a', 0x0301, 0x00E1}, {U'e', 0x0301, 0x00E9}, {U'i', 0x0301, 0x00ED}, {U'o', 0x0301, 0x00F3}, {U'u', 0x0301, 0x00FA}, {U'y', 0x0301, 0x00FD},
    {U'A', 0x0302, 0x00C2}, {U'E', 0x0302, 0x00CA}, {U'I', 0x0302, 0x00CE}, {U'O', 0x0302, 0x00D4}, {U'U', 0x0302, 0x00DB},
    {U'a', 0x0302, 0x00E2}, {U'e', 0x0302, 0x00EA}, {U'i', 0x0302, 0x00EE}, {U'o', 0x0302, 0x00F4}, {U'u', 0x0302, 0x00FB},
    {U'A', 0x0303, 0x00C3}, {U'N', 0x0303, 0x00D1}, {U'O', 0x0303, 0x00D5},
    {U'a', 0x0303, 0x00E3}, {U'n', 0x0303, 0x00F1}, {U'o', 0x0303, 0x00F5},
    {U'A', 0x0308, 0x00C4}, {U'E', 0x0308, 0x00CB}, {U'I', 0x0308, 0x00CF}, {U'O', 0x0308, 0x00D6}, {U'U', 0x0308, 0x00DC},
    {U'a', 0x0308, 0x00E4}, {U'e', 0x0308, 0x00EB}, {U'i', 0x0308, 0x00EF}, {U'o', 0x0308, 0x00F6}, {U'u', 0x0308, 0x00FC}, {U'y', 0x0308, 0x00FF},
    {U'A', 0x030A, 0x00C5}, {U'a', 0x030A, 0x00E5},
    {U'C', 0x0327, 0x00C7}, {U'c', 0x0327, 0x00E7},
    {0x0418, 0x0306, 0x0419}, {0x0438, 0x0306, 0x0439},
    {0x0415, 0x0308, 0x0401}, {0x0435, 0x0308, 0x0451},
    {0x0406, 0x0308, 0x0407}, {0x0456, 0x0308, 0x0457},
    {0x0423, 0x0306, 0x040E}, {0x0443, 0x0306, 0x045E},
    {U'G', 0x0306, 0x011E}, {U'g', 0x0306, 0x011F},
    {U'S', 0x030C, 0x0160}, {U's', 0x030C, 0x0161}, {U'Z', 0x030C, 0x017D}, {U'z', 0x030C, 0x017E},
    {U'C', 0x030C, 0x010C}, {U'c', 0x030C, 0x010D},
    {U'E', 0x0306, 0x0114}, {U'e', 0x0306, 0x0115},
    {U'N', 0x0301, 0x0143}, {U'n', 0x0301, 0x0144},
};
// clang-format on

bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\v' || cp == U'\f' ||
         cp == 0x00A0 || cp == 0x2009 || cp == 0x202F || cp == 0x3000;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

}  // namespace

void append_utf8(std::string& out, char32_t cp) {
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

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      extra = 3;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + extra >= s.size()) {
      out.push_back(kReplacement);
      break;
    }
    bool valid = true;
    for (int k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) {
        valid = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!valid) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 32;
  if (cp >= 0x0100 && cp <= 0x0137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x014A && cp <= 0x0177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x0178) return 0x00FF;
  if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 80;
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 32;
  if (cp >= 0x0460 && cp <= 0x0481) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x048A && cp <= 0x04BF) return (cp % 2 == 0) ? cp + 1 : cp;
  return cp;
}

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : decode_utf8(s)) append_utf8(out, to_lower(cp));
  return out;
}

std::string compose_diacritics(std::string_view s) {
  const std::u32string in = decode_utf8(s);
  std::u32string out;
  out.reserve(in.size());
  for (char32_t cp : in) {
    if (!out.empty() && cp >= 0x0300 && cp <= 0x036F) {
      const auto it = std::find_if(std::begin(kCompositions), std::end(kCompositions), [&](const Composition& c) {
        return c.base == out.back() && c.mark == cp;
      });
      if (it != std::end(kCompositions)) {
        out.back() = it->composed;
        continue;
      }
    }
    out.push_back(cp);
  }
  return encode_utf8(out);
}

std::string strip_semitic_marks(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : decode_utf8(s)) {
    const bool hebrew_point = (cp >= 0x0591 && cp <= 0x05BD) || cp == 0x05BF || cp == 0x05C1 ||
                              cp == 0x05C2 || cp == 0x05C4 || cp == 0x05C5 || cp == 0x05C7;
    const bool arabic_mark = (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670 || cp == 0x0640;
    if (!hebrew_point && !arabic_mark) append_utf8(out, cp);
  }
  return out;
}

bool is_punctuation(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60) ||
           (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0x00A1:  // ¡
    case 0x00AB:  // «
    case 0x00BB:  // »
    case 0x00BF:  // ¿
    case 0x2013:
    case 0x2014:
    case 0x2026:
    case 0x05BE:  // maqaf
    case 0x060C:  // Arabic comma
    case 0x061B:
    case 0x061F:
    case 0x06D4:
      return true;
    default:
      return cp >= 0x2018 && cp <= 0x201F;
  }
}

bool is_letter(char32_t cp) {
  if (cp < 0x80) return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
  return cp >= 0xC0 && cp != 0xD7 && cp != 0xF7 && !is_punctuation(cp) && !is_space(cp);
}

namespace {

struct DecodedChar {
  char32_t cp;
  std::size_t begin;
  std::size_t end;
};

std::vector<DecodedChar> decode_with_offsets(std::string_view s) {
  std::vector<DecodedChar> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto c = static_cast<unsigned char>(s[pos]);
    std::size_t len = 1;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
    }
    len = std::min(len, s.size() - pos);
    const std::u32string cp = decode_utf8(s.substr(pos, len));
    out.push_back({cp.empty() ? kReplacement : cp.front(), pos, pos + len});
    pos += len;
  }
  return out;
}

}  // namespace

std::vector<TokenSpan> whitespace_spans(std::string_view sentence) {
  const auto chars = decode_with_offsets(sentence);
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  while (i < chars.size()) {
    while (i < chars.size() && is_space(chars[i].cp)) ++i;
    std::size_t end = i;
    while (end < chars.size() && !is_space(chars[end].cp)) ++end;
    if (end == i) break;
    spans.push_back({chars[i].begin, chars[end - 1].end});
    i = end;
  }
  return spans;
}

std::vector<TokenSpan> tokenize_spans(std::string_view sentence) {
  const auto chars = decode_with_offsets(sentence);
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  while (i < chars.size()) {
    while (i < chars.size() && is_space(chars[i].cp)) ++i;
    std::size_t end = i;
    while (end < chars.size() && !is_space(chars[end].cp)) ++end;
    if (end == i) break;
    std::size_t lo = i;
    std::size_t hi = end;
    while (lo < hi && is_punctuation(chars[lo].cp)) {
      spans.push_back({chars[lo].begin, chars[lo].end});
      ++lo;
    }
    std::vector<TokenSpan> trailing;
    while (hi > lo && is_punctuation(chars[hi - 1].cp)) {
      trailing.push_back({chars[hi - 1].begin, chars[hi - 1].end});
      --hi;
    }
    if (hi > lo) spans.push_back({chars[lo].begin, chars[hi - 1].end});
    spans.insert(spans.end(), trailing.rbegin(), trailing.rend());
    i = end;
  }
  return spans;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  for (const auto& span : tokenize_spans(sentence)) {
    tokens.emplace_back(sentence.substr(span.begin, span.end - span.begin));
  }
  return tokens;
}

std::vector<std::string> split_elisions(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const std::u32string cps = decode_utf8(tok);
    std::size_t apos = 0;
    while (apos < cps.size() && !is_apostrophe(cps[apos])) ++apos;
    const bool splittable = apos > 0 && apos + 1 < cps.size() && is_letter(cps[apos + 1]) &&
                            std::all_of(cps.begin(), cps.begin() + static_cast<std::ptrdiff_t>(apos), is_letter);
    if (!splittable) {
      out.push_back(tok);
      continue;
    }
    out.push_back(encode_utf8(cps.substr(0, apos + 1)));
    out.push_back(encode_utf8(cps.substr(apos + 1)));
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

bool iequals_ascii(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; };
    if (lower(a[i]) != lower(b[i])) return false;
  }
  return true;
}

std::string read_file(const std::string& path, const std::string& module) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(module, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::string& path, const std::string& module) {
  const std::string content = read_file(path, module);
  std::vector<std::string> lines;
  std::string current;
  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (c == '\r') {
      if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
      lines.push_back(std::move(current));
      current.clear();
    } else if (c == '\n') {
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

void write_file(const std::string& path, std::string_view content, const std::string& module) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(module, "cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(module, "write failed for '" + path + "'");
}

}  // namespace mtgb::text
