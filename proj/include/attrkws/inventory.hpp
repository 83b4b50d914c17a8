#pragma once

// Universal speech-attribute inventory: manner and place classes, the
// manner-place attribute token, and the IPA phoneme -> token table.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "attrkws/default_phoneme_table.hpp"
#include "attrkws/error.hpp"
#include "attrkws/unicode.hpp"

namespace attrkws {

enum class Manner : std::uint8_t { approximant, tap, fricative, affricate, nasal, stop, vowel };

enum class ConsonantPlace : std::uint8_t {
  bilabial,
  labiodental,
  dental,
  alveolar,
  postalveolar,
  retroflex,
  palatal,
  velar,
  uvular,
  glottal
};

enum class VowelPlace : std::uint8_t { high, semi_high, upper_mid, mid, lower_mid, semi_mid, low, unknown };

inline constexpr std::array<std::string_view, 7> kMannerNames = {
    "approximant", "tap", "fricative", "affricate", "nasal", "stop", "vowel"};

inline constexpr std::array<std::string_view, 10> kConsonantPlaceNames = {
    "bilabial", "labiodental", "dental", "alveolar", "postalveolar",
    "retroflex", "palatal", "velar", "uvular", "glottal"};

inline constexpr std::array<std::string_view, 8> kVowelPlaceNames = {
    "high", "semi-high", "upper-mid", "mid", "lower-mid", "semi-mid", "low", "unknown"};

// Six consonant manners over ten places plus the vowel manner over eight.
inline constexpr std::size_t kLegalAttributeCount =
    (kMannerNames.size() - 1) * kConsonantPlaceNames.size() + kVowelPlaceNames.size();

using Place = std::variant<ConsonantPlace, VowelPlace>;

inline std::string_view name_of(Manner m) { return kMannerNames[static_cast<std::size_t>(m)]; }

inline std::string_view name_of(const Place& p) {
  if (const auto* c = std::get_if<ConsonantPlace>(&p)) return kConsonantPlaceNames[static_cast<std::size_t>(*c)];
  return kVowelPlaceNames[static_cast<std::size_t>(std::get<VowelPlace>(p))];
}

inline std::optional<Manner> parse_manner(std::string_view s) {
  for (std::size_t i = 0; i < kMannerNames.size(); ++i)
    if (kMannerNames[i] == s) return static_cast<Manner>(i);
  return std::nullopt;
}

// Consonant and vowel place names are disjoint, so a bare name is unambiguous.
inline std::optional<Place> parse_place(std::string_view s) {
  for (std::size_t i = 0; i < kConsonantPlaceNames.size(); ++i)
    if (kConsonantPlaceNames[i] == s) return Place{static_cast<ConsonantPlace>(i)};
  for (std::size_t i = 0; i < kVowelPlaceNames.size(); ++i)
    if (kVowelPlaceNames[i] == s) return Place{static_cast<VowelPlace>(i)};
  return std::nullopt;
}

inline bool is_legal_pairing(Manner m, const Place& p) {
  return (m == Manner::vowel) == std::holds_alternative<VowelPlace>(p);
}

class AttributeToken {
 public:
  AttributeToken(Manner manner, Place place) : manner_(manner), place_(place) {
    if (!is_legal_pairing(manner, place)) {
      throw Error("illegal manner/place pairing: " + std::string(name_of(manner)) + "-" +
                  std::string(name_of(place)));
    }
  }

  Manner manner() const { return manner_; }
  const Place& place() const { return place_; }

  // "<manner>-<place>", e.g. "tap-alveolar".
  std::string canonical() const { return std::string(name_of(manner_)) + "-" + std::string(name_of(place_)); }

  friend bool operator==(const AttributeToken& a, const AttributeToken& b) {
    return a.manner_ == b.manner_ && a.place_ == b.place_;
  }
  friend bool operator<(const AttributeToken& a, const AttributeToken& b) { return a.canonical() < b.canonical(); }

 private:
  Manner manner_;
  Place place_;
};

// Every legal (manner, place) combination.
inline std::vector<AttributeToken> all_legal_attributes() {
  std::vector<AttributeToken> out;
  for (std::size_t m = 0; m < kMannerNames.size(); ++m) {
    const auto manner = static_cast<Manner>(m);
    if (manner == Manner::vowel) {
      for (std::size_t p = 0; p < kVowelPlaceNames.size(); ++p) out.emplace_back(manner, static_cast<VowelPlace>(p));
    } else {
      for (std::size_t p = 0; p < kConsonantPlaceNames.size(); ++p)
        out.emplace_back(manner, static_cast<ConsonantPlace>(p));
    }
  }
  return out;
}

// IPA symbol normalization: NFC, then removal of suprasegmental marks.
// Marks listed in `keep` survive.
struct IpaNormalization {
  static std::set<std::string> default_strip() {
    return {"ː" /* ː */, "ˑ" /* ˑ */, "ˈ" /* ˈ */, "ˌ" /* ˌ */,
            "͡" /* tie above */, "͜" /* tie below */};
  }

  std::set<std::string> strip = default_strip();
  std::set<std::string> keep;

  std::string operator()(std::string_view symbol) const {
    std::string out;
    for (const auto& cp : unicode::code_points(unicode::nfc(unicode::trim(symbol)))) {
      if (strip.contains(cp) && !keep.contains(cp)) continue;
      out += cp;
    }
    return unicode::nfc(out);
  }
};

struct PhonemeEntry {
  std::string ipa;
  Manner manner;
  Place place;

  AttributeToken token() const { return AttributeToken(manner, place); }
};

class Inventory {
 public:
  Inventory() = default;
  explicit Inventory(IpaNormalization normalization) : normalization_(std::move(normalization)) {}

  // Rejects empty or duplicate (post-normalization) symbols and illegal pairings.
  void add(std::string_view ipa, Manner manner, Place place) {
    std::string key = normalization_(ipa);
    if (key.empty()) throw Error("empty IPA symbol after normalization: '" + std::string(ipa) + "'");
    AttributeToken(manner, place);  // throws on illegal pairing
    if (entries_.contains(key)) throw DuplicateError("duplicate IPA symbol '" + key + "'");
    entries_.emplace(key, PhonemeEntry{key, manner, place});
  }

  AttributeToken map_phoneme(std::string_view ipa) const {
    const auto it = entries_.find(normalization_(ipa));
    if (it == entries_.end()) throw UnknownSymbolError(std::string(ipa));
    return it->second.token();
  }

  bool contains(std::string_view ipa) const { return entries_.contains(normalization_(ipa)); }

  std::vector<AttributeToken> phonemes_to_attributes(const std::vector<std::string>& seq) const {
    std::vector<AttributeToken> out;
    out.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const auto it = entries_.find(normalization_(seq[i]));
      if (it == entries_.end()) throw UnknownSymbolError(seq[i], i);
      out.push_back(it->second.token());
    }
    return out;
  }

  // Sorted (by canonical string) unique tokens produced by the entries.
  std::vector<AttributeToken> attribute_vocab() const {
    std::map<std::string, AttributeToken> unique;
    for (const auto& [ipa, e] : entries_) unique.emplace(e.token().canonical(), e.token());
    std::vector<AttributeToken> out;
    for (const auto& [name, tok] : unique) out.push_back(tok);
    return out;
  }

  const std::map<std::string, PhonemeEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const IpaNormalization& normalization() const { return normalization_; }

  friend bool operator==(const Inventory& a, const Inventory& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (auto ia = a.entries_.begin(), ib = b.entries_.begin(); ia != a.entries_.end(); ++ia, ++ib) {
      if (ia->first != ib->first || ia->second.manner != ib->second.manner || ia->second.place != ib->second.place)
        return false;
    }
    return true;
  }

 private:
  IpaNormalization normalization_;
  std::map<std::string, PhonemeEntry> entries_;
};

// Parses the `ipa<TAB>manner<TAB>place` table. Blank and '#' lines are skipped.
inline Inventory load_phoneme_table(std::string_view source, IpaNormalization normalization = {}) {
  Inventory inv(std::move(normalization));
  std::size_t line_no = 0;
  for (const auto& raw : unicode::split_char(source, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = unicode::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cols = unicode::split_char(line, '\t');
    if (cols.size() != 3) throw ParseError("expected 3 tab-separated columns, got " + std::to_string(cols.size()), line_no);
    const auto manner = parse_manner(unicode::trim(cols[1]));
    if (!manner) throw ParseError("unknown manner '" + cols[1] + "'", line_no);
    const auto place = parse_place(unicode::trim(cols[2]));
    if (!place) throw ParseError("unknown place '" + cols[2] + "'", line_no);
    if (!is_legal_pairing(*manner, *place)) {
      throw ParseError("illegal pairing " + cols[1] + "-" + cols[2] +
                           (*manner == Manner::vowel ? " (vowel manner requires a vowel place)"
                                                     : " (consonant manner requires a consonant place)"),
                       line_no);
    }
    try {
      inv.add(cols[0], *manner, *place);
    } catch (const DuplicateError& e) {
      throw DuplicateError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return inv;
}

inline Inventory default_inventory(IpaNormalization normalization = {}) {
  return load_phoneme_table(kDefaultPhonemeTable, std::move(normalization));
}

}  // namespace attrkws
