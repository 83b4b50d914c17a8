#pragma once

// The non-trainable pronunciation model: keyword -> unit-token sequence in
// one of three unit systems, plus the CTC output vocabulary (blank at 0).

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "attrkws/blank.hpp"
#include "attrkws/error.hpp"
#include "attrkws/inventory.hpp"
#include "attrkws/unicode.hpp"

namespace attrkws {

enum class UnitSystem : std::uint8_t { character, phoneme, attribute };

inline std::string_view name_of(UnitSystem u) {
  switch (u) {
    case UnitSystem::character: return "character";
    case UnitSystem::phoneme: return "phoneme";
    case UnitSystem::attribute: return "attribute";
  }
  return "?";
}

inline std::optional<UnitSystem> parse_unit_system(std::string_view s) {
  if (s == "character") return UnitSystem::character;
  if (s == "phoneme") return UnitSystem::phoneme;
  if (s == "attribute") return UnitSystem::attribute;
  return std::nullopt;
}

// Keyword identity used everywhere keywords are compared: trimmed, NFC, lowercase.
inline std::string normalize_keyword(std::string_view keyword) {
  return unicode::lowercase(unicode::nfc(unicode::trim(keyword)));
}

inline std::vector<std::string> keyword_to_characters(std::string_view keyword) {
  const std::string norm = normalize_keyword(keyword);
  if (norm.empty()) throw Error("empty keyword");
  std::vector<std::string> out;
  for (auto& g : unicode::graphemes(norm)) {
    if (unicode::trim(g).empty()) continue;  // internal spaces carry no unit
    out.push_back(std::move(g));
  }
  return out;
}

struct LexiconRow {
  std::string keyword;
  std::string language;
  std::optional<std::vector<std::string>> phonemes;
  std::size_t line = 0;
};

// `keyword<TAB>language[<TAB>space-separated phonemes]`
inline std::vector<LexiconRow> parse_lexicon_rows(std::string_view text) {
  std::vector<LexiconRow> rows;
  std::size_t line_no = 0;
  for (auto line : unicode::split_char(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (unicode::trim(line).empty() || line.front() == '#') continue;
    const auto cols = unicode::split_char(line, '\t');
    if (cols.size() < 2 || cols.size() > 3)
      throw ParseError("expected keyword<TAB>language[<TAB>phonemes]", line_no);
    LexiconRow row{unicode::nfc(unicode::trim(cols[0])), unicode::trim(cols[1]), std::nullopt, line_no};
    if (row.keyword.empty()) throw ParseError("empty keyword", line_no);
    if (row.language.empty()) throw ParseError("empty language code", line_no);
    if (cols.size() == 3) {
      auto phones = unicode::split_ws(cols[2]);
      if (!phones.empty()) row.phonemes = std::move(phones);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct LexiconEntry {
  std::string keyword;
  std::string language;
  std::vector<std::string> pronunciation;
};

class Lexicon {
 public:
  // `vocab` must start with the blank token; entries are validated against it.
  Lexicon(UnitSystem system, std::vector<std::string> vocab, std::vector<LexiconEntry> entries)
      : system_(system), vocab_(std::move(vocab)), entries_(std::move(entries)) {
    if (vocab_.empty() || vocab_[kBlankIndex] != kBlankToken) throw Error("vocabulary must start with <blank>");
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      if (!index_.emplace(vocab_[i], i).second) throw DuplicateError("duplicate vocabulary token '" + vocab_[i] + "'");
    }
    std::sort(entries_.begin(), entries_.end(), [](const LexiconEntry& a, const LexiconEntry& b) {
      return std::tie(a.keyword, a.language) < std::tie(b.keyword, b.language);
    });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (e.pronunciation.empty()) throw Error("empty pronunciation for '" + e.keyword + "'");
      for (const auto& tok : e.pronunciation) {
        const auto it = index_.find(tok);
        if (it == index_.end()) throw UnknownSymbolError(tok);
        if (it->second == kBlankIndex) throw Error("pronunciation of '" + e.keyword + "' contains <blank>");
      }
      if (!by_key_.emplace(std::make_pair(e.keyword, e.language), i).second)
        throw DuplicateError("duplicate entry (" + e.keyword + ", " + e.language + ")");
    }
  }

  UnitSystem unit_system() const { return system_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::size_t index_of(std::string_view token) const {
    const auto it = index_.find(std::string(token));
    if (it == index_.end()) throw UnknownSymbolError(std::string(token));
    return it->second;
  }

  std::vector<std::size_t> indices(const LexiconEntry& e) const {
    std::vector<std::size_t> out;
    out.reserve(e.pronunciation.size());
    for (const auto& tok : e.pronunciation) out.push_back(index_.at(tok));
    return out;
  }

  bool contains(std::string_view keyword, std::string_view language) const {
    return by_key_.contains({unicode::nfc(unicode::trim(keyword)), std::string(language)});
  }

  const LexiconEntry& entry(std::string_view keyword, std::string_view language) const {
    const auto it = by_key_.find({unicode::nfc(unicode::trim(keyword)), std::string(language)});
    if (it == by_key_.end())
      throw NotFoundError("keyword '" + std::string(keyword) + "' (" + std::string(language) + ") not in lexicon");
    return entries_[it->second];
  }

  std::vector<std::size_t> lookup(std::string_view keyword, std::string_view language) const {
    return indices(entry(keyword, language));
  }

  std::string serialize() const {
    std::ostringstream out;
    out << "#vocab\t";
    for (std::size_t i = 0; i < vocab_.size(); ++i) out << (i ? " " : "") << vocab_[i];
    out << '\n';
    for (const auto& e : entries_) {
      out << e.keyword << '\t' << e.language << '\t' << name_of(system_) << '\t';
      for (std::size_t i = 0; i < e.pronunciation.size(); ++i) out << (i ? " " : "") << e.pronunciation[i];
      out << '\n';
    }
    return out.str();
  }

  static Lexicon parse(std::string_view text) {
    std::optional<std::vector<std::string>> vocab;
    std::optional<UnitSystem> system;
    std::vector<LexiconEntry> entries;
    std::size_t line_no = 0;
    for (auto line : unicode::split_char(text, '\n')) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (unicode::trim(line).empty()) continue;
      const auto cols = unicode::split_char(line, '\t');
      if (!vocab) {
        if (cols.size() != 2 || cols[0] != "#vocab") throw ParseError("expected '#vocab' header", line_no);
        vocab = unicode::split_ws(cols[1]);
        continue;
      }
      if (cols.size() != 4) throw ParseError("expected 4 tab-separated columns", line_no);
      const auto sys = parse_unit_system(cols[2]);
      if (!sys) throw ParseError("unknown unit system '" + cols[2] + "'", line_no);
      if (system && *system != *sys) throw ParseError("mixed unit systems", line_no);
      system = sys;
      entries.push_back({cols[0], cols[1], unicode::split_ws(cols[3])});
    }
    if (!vocab) throw ParseError("missing '#vocab' header");
    try {
      return Lexicon(system.value_or(UnitSystem::character), std::move(*vocab), std::move(entries));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  }

  friend bool operator==(const Lexicon& a, const Lexicon& b) { return a.serialize() == b.serialize(); }

 private:
  UnitSystem system_;
  std::vector<std::string> vocab_;
  std::vector<LexiconEntry> entries_;
  std::map<std::string, std::size_t> index_;
  std::map<std::pair<std::string, std::string>, std::size_t> by_key_;
};

// Blank first, then the tokens in byte-lexicographic order.
inline std::vector<std::string> make_vocab(const std::set<std::string>& tokens) {
  std::vector<std::string> out{std::string(kBlankToken)};
  for (const auto& t : tokens)
    if (t != kBlankToken) out.push_back(t);
  return out;
}

inline std::vector<std::string> attribute_unit_vocab(const Inventory& inv) {
  std::set<std::string> names;
  for (const auto& tok : inv.attribute_vocab()) names.insert(tok.canonical());
  return make_vocab(names);
}

struct LexiconBuildOptions {
  // Drop rows that cannot be tokenized (reported in the result) instead of failing.
  bool lenient = false;
  // Use this vocabulary (blank first) instead of deriving one from the
  // pronunciations. Needed when several lexicons must share an output layer.
  std::optional<std::vector<std::string>> fixed_vocab;
};

struct DroppedRow {
  std::size_t line = 0;
  std::string keyword;
  std::string language;
  std::string reason;
};

struct LexiconBuild {
  Lexicon lexicon;
  std::vector<DroppedRow> dropped;
};

inline LexiconBuild build_lexicon(const std::vector<LexiconRow>& rows, UnitSystem system, const Inventory* inv,
                                  const LexiconBuildOptions& options = {}) {
  if (system == UnitSystem::attribute && inv == nullptr)
    throw Error("attribute unit system requires a phoneme inventory");

  std::set<std::string> fixed;
  if (options.fixed_vocab) fixed.insert(options.fixed_vocab->begin(), options.fixed_vocab->end());

  std::vector<LexiconEntry> entries;
  std::vector<DroppedRow> dropped;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> tokens;

  for (const auto& row : rows) {
    const std::string where = "line " + std::to_string(row.line) + " (" + row.keyword + ", " + row.language + "): ";
    if (!seen.emplace(row.keyword, row.language).second)
      throw DuplicateError(where + "duplicate (keyword, language) entry");
    std::vector<std::string> pron;
    try {
      switch (system) {
        case UnitSystem::character: pron = keyword_to_characters(row.keyword); break;
        case UnitSystem::phoneme:
          if (!row.phonemes) throw Error("missing phoneme sequence");
          for (const auto& p : *row.phonemes) pron.push_back(unicode::nfc(p));
          break;
        case UnitSystem::attribute:
          if (!row.phonemes) throw Error("missing phoneme sequence");
          for (const auto& tok : inv->phonemes_to_attributes(*row.phonemes)) pron.push_back(tok.canonical());
          break;
      }
      if (pron.empty()) throw Error("empty pronunciation");
      for (std::size_t i = 0; i < pron.size(); ++i) {
        if (pron[i] == kBlankToken) throw Error("token <blank> is reserved");
        if (options.fixed_vocab && !fixed.contains(pron[i])) throw UnknownSymbolError(pron[i], i);
      }
    } catch (const UnknownSymbolError& e) {
      if (!options.lenient) throw UnknownSymbolError(e.symbol(), e.position(), where);
      dropped.push_back({row.line, row.keyword, row.language, e.what()});
      continue;
    } catch (const Error& e) {
      if (!options.lenient) throw Error(where + e.what());
      dropped.push_back({row.line, row.keyword, row.language, e.what()});
      continue;
    }
    tokens.insert(pron.begin(), pron.end());
    entries.push_back({row.keyword, row.language, std::move(pron)});
  }

  std::vector<std::string> vocab = options.fixed_vocab ? *options.fixed_vocab : make_vocab(tokens);
  return {Lexicon(system, std::move(vocab), std::move(entries)), std::move(dropped)};
}

}  // namespace attrkws
