#include <gtest/gtest.h>

#include "attrkws/lexicon.hpp"

using namespace attrkws;

namespace {

LexiconRow row(std::string kw, std::string lang, std::vector<std::string> phones = {}, std::size_t line = 1) {
  LexiconRow r{std::move(kw), std::move(lang), std::nullopt, line};
  if (!phones.empty()) r.phonemes = std::move(phones);
  return r;
}

}  // namespace

TEST(Lexicon, CharacterTokenization) {
  EXPECT_EQ(keyword_to_characters("abc"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(keyword_to_characters("Über"), (std::vector<std::string>{"ü", "b", "e", "r"}));
  EXPECT_EQ(keyword_to_characters("  New York "), (std::vector<std::string>{"n", "e", "w", "y", "o", "r", "k"}));
  EXPECT_THROW(keyword_to_characters(""), Error);
  EXPECT_THROW(keyword_to_characters("   "), Error);
}

TEST(Lexicon, AttributeEntryFromPhonemes) {
  const Inventory inv = default_inventory();
  const auto build = build_lexicon({row("ri", "xx", {"r", "i"})}, UnitSystem::attribute, &inv);
  EXPECT_EQ(build.lexicon.entry("ri", "xx").pronunciation, (std::vector<std::string>{"tap-alveolar", "vowel-high"}));
  EXPECT_EQ(build.lexicon.vocab(), (std::vector<std::string>{"<blank>", "tap-alveolar", "vowel-high"}));
}

TEST(Lexicon, PhonemeEntryKeepsSymbols) {
  const auto build = build_lexicon({row("ri", "xx", {"r", "i"})}, UnitSystem::phoneme, nullptr);
  EXPECT_EQ(build.lexicon.entry("ri", "xx").pronunciation, (std::vector<std::string>{"r", "i"}));
}

TEST(Lexicon, AttributeSystemNeedsInventory) {
  EXPECT_THROW(build_lexicon({row("ri", "xx", {"r", "i"})}, UnitSystem::attribute, nullptr), Error);
}

TEST(Lexicon, DuplicateRowRejected) {
  EXPECT_THROW(build_lexicon({row("hey", "en"), row("hey", "en", {}, 2)}, UnitSystem::character, nullptr),
               DuplicateError);
}

TEST(Lexicon, SameKeywordTwoLanguages) {
  const auto lex = build_lexicon({row("no", "en", {"n", "o"}), row("no", "es", {"n", "ɔ"})}, UnitSystem::phoneme,
                                 nullptr).lexicon;
  EXPECT_EQ(lex.size(), 2u);
  EXPECT_NE(lex.lookup("no", "en"), lex.lookup("no", "es"));
  EXPECT_THROW(lex.lookup("no", "fr"), NotFoundError);
  EXPECT_THROW(lex.lookup("si", "es"), NotFoundError);
}

TEST(Lexicon, UnknownPhonemeStrictAndLenient) {
  const Inventory inv = default_inventory();
  const std::vector<LexiconRow> rows{row("ok", "xx", {"o", "k"}), row("bad", "xx", {"b", "ʘ"}, 2),
                                     row("nopron", "xx", {}, 3)};
  EXPECT_THROW(build_lexicon(rows, UnitSystem::attribute, &inv), UnknownSymbolError);
  LexiconBuildOptions opt;
  opt.lenient = true;
  const auto build = build_lexicon(rows, UnitSystem::attribute, &inv, opt);
  EXPECT_EQ(build.lexicon.size(), 1u);
  ASSERT_EQ(build.dropped.size(), 2u);
  EXPECT_EQ(build.dropped[0].line, 2u);
  EXPECT_EQ(build.dropped[1].keyword, "nopron");
}

TEST(Lexicon, FixedVocabularySharedAcrossLexicons) {
  LexiconBuildOptions opt;
  opt.fixed_vocab = std::vector<std::string>{"<blank>", "a", "b", "c"};
  const auto lex = build_lexicon({row("ba", "xx", {"b", "a"})}, UnitSystem::phoneme, nullptr, opt).lexicon;
  EXPECT_EQ(lex.vocab_size(), 4u);
  EXPECT_EQ(lex.lookup("ba", "xx"), (std::vector<std::size_t>{2, 1}));
  EXPECT_THROW(build_lexicon({row("da", "xx", {"d", "a"})}, UnitSystem::phoneme, nullptr, opt), UnknownSymbolError);
}

TEST(Lexicon, VocabularyStartsWithBlank) {
  EXPECT_THROW(Lexicon(UnitSystem::character, {"a", "<blank>"}, {}), Error);
  EXPECT_THROW(Lexicon(UnitSystem::character, {"<blank>", "a"}, {{"b", "xx", {"b"}}}), UnknownSymbolError);
  EXPECT_THROW(Lexicon(UnitSystem::character, {"<blank>", "a"}, {{"x", "xx", {"<blank>"}}}), Error);
}

TEST(Lexicon, IndexRoundTrip) {
  const auto lex = build_lexicon({row("hello", "en"), row("hallo", "de"), row("hola", "es")}, UnitSystem::character,
                                 nullptr).lexicon;
  for (const auto& e : lex.entries()) {
    const auto idx = lex.indices(e);
    std::vector<std::string> back;
    for (std::size_t i : idx) back.push_back(lex.vocab()[i]);
    EXPECT_EQ(back, e.pronunciation);
    for (std::size_t i : idx) EXPECT_NE(i, kBlankIndex);
  }
}

TEST(Lexicon, SerializeParseRoundTrip) {
  const Inventory inv = default_inventory();
  const auto lex = build_lexicon({row("Rio", "es", {"r", "i", "o"}), row("mano", "es", {"m", "a", "n", "o"})},
                                 UnitSystem::attribute, &inv).lexicon;
  const auto back = Lexicon::parse(lex.serialize());
  EXPECT_EQ(back, lex);
  EXPECT_EQ(back.unit_system(), UnitSystem::attribute);
  EXPECT_EQ(back.serialize(), lex.serialize());
}

TEST(Lexicon, ParseRejectsMalformedInput) {
  EXPECT_THROW(Lexicon::parse("a\tb\n"), ParseError);
  EXPECT_THROW(Lexicon::parse("#vocab\t<blank> a\nx\txx\tbogus\ta\n"), ParseError);
  EXPECT_THROW(Lexicon::parse("#vocab\t<blank> a\nx\txx\tphoneme\tz\n"), ParseError);
}

TEST(Lexicon, RowParsing) {
  const auto rows = parse_lexicon_rows("# comment\nhola\tes\to l a\n\nhi\ten\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].line, 2u);
  EXPECT_EQ(*rows[0].phonemes, (std::vector<std::string>{"o", "l", "a"}));
  EXPECT_FALSE(rows[1].phonemes.has_value());
  EXPECT_THROW(parse_lexicon_rows("only-one-column\n"), ParseError);
}

TEST(Lexicon, UnitSystemNames) {
  for (auto u : {UnitSystem::character, UnitSystem::phoneme, UnitSystem::attribute})
    EXPECT_EQ(parse_unit_system(name_of(u)), u);
  EXPECT_FALSE(parse_unit_system("grapheme"));
}
