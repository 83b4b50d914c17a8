#pragma once

// Thin wrappers over ICU for the handful of Unicode operations the toolkit
// needs: NFC, lowercasing, grapheme segmentation and code point splitting.

#include <algorithm>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "attrkws/error.hpp"

namespace attrkws::unicode {

inline icu::UnicodeString from_utf8(std::string_view s) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

inline std::string to_utf8(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

inline std::string nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  icu::UnicodeString out = norm->normalize(from_utf8(s), status);
  if (U_FAILURE(status)) throw ParseError("invalid UTF-8 input");
  return to_utf8(out);
}

inline std::string lowercase(std::string_view s) {
  icu::UnicodeString u = from_utf8(s);
  u.toLower(icu::Locale::getRoot());
  return to_utf8(u);
}

inline std::string trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return std::string(s.substr(first, last - first + 1));
}

// Extended grapheme clusters, in order.
inline std::vector<std::string> graphemes(std::string_view s) {
  const icu::UnicodeString u = from_utf8(s);
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::BreakIterator> it(
      icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
  if (U_FAILURE(status)) throw std::runtime_error("ICU break iterator unavailable");
  it->setText(u);
  std::vector<std::string> out;
  int32_t start = it->first();
  for (int32_t end = it->next(); end != icu::BreakIterator::DONE; start = end, end = it->next()) {
    out.push_back(to_utf8(u.tempSubStringBetween(start, end)));
  }
  return out;
}

// Individual code points, each re-encoded as UTF-8.
inline std::vector<std::string> code_points(std::string_view s) {
  const icu::UnicodeString u = from_utf8(s);
  std::vector<std::string> out;
  for (int32_t i = 0; i < u.length();) {
    const UChar32 c = u.char32At(i);
    const int32_t n = U16_LENGTH(c);
    out.push_back(to_utf8(u.tempSubString(i, n)));
    i += n;
  }
  return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char* ws = " \t\r\n\f\v";
    i = std::min(s.find_first_not_of(ws, i), s.size());
    const std::size_t j = std::min(s.find_first_of(ws, i), s.size());
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string> split_char(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace attrkws::unicode
