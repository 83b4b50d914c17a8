#include <gtest/gtest.h>

#include <random>

#include "attrkws/frame_matrix.hpp"
#include "attrkws/inventory.hpp"
#include "test_util.hpp"

using namespace attrkws;

namespace {

std::vector<std::string> canon(const std::vector<AttributeToken>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks) out.push_back(t.canonical());
  return out;
}

}  // namespace

TEST(Inventory, CategoryCardinalities) {
  EXPECT_EQ(kMannerNames.size(), 7u);
  EXPECT_EQ(kConsonantPlaceNames.size(), 10u);
  EXPECT_EQ(kVowelPlaceNames.size(), 8u);
  EXPECT_EQ(kLegalAttributeCount, 68u);
  EXPECT_EQ(all_legal_attributes().size(), kLegalAttributeCount);
}

TEST(Inventory, AnchorMappings) {
  const Inventory inv = default_inventory();
  EXPECT_EQ(inv.map_phoneme("r").canonical(), "tap-alveolar");
  EXPECT_EQ(inv.map_phoneme("i").canonical(), "vowel-high");
}

TEST(Inventory, ShippedTableVocabularySize) {
  const auto vocab = default_inventory().attribute_vocab();
  EXPECT_LE(vocab.size(), kLegalAttributeCount);
  EXPECT_EQ(vocab.size(), 49u);
}

TEST(Inventory, EmbeddedTableMatchesDataFile) {
  const std::string on_disk = read_file(fixtures::source_path("data/phoneme_table.tsv"));
  EXPECT_EQ(on_disk, std::string(kDefaultPhonemeTable));
  EXPECT_EQ(load_phoneme_table(on_disk), default_inventory());
}

TEST(Inventory, IllegalPairingsRejected) {
  EXPECT_THROW(AttributeToken(Manner::vowel, ConsonantPlace::alveolar), Error);
  EXPECT_THROW(AttributeToken(Manner::stop, VowelPlace::high), Error);
  try {
    load_phoneme_table("a\tvowel\thigh\nq\tstop\thigh\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Inventory, MalformedTableRowsReportLine) {
  try {
    load_phoneme_table("# header\n\np\tstop\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    load_phoneme_table("p\tplosive\tbilabial\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  EXPECT_THROW(load_phoneme_table("p\tstop\tnowhere\n"), ParseError);
}

TEST(Inventory, DuplicateSymbolRejected) {
  EXPECT_THROW(load_phoneme_table("p\tstop\tbilabial\np\tstop\tbilabial\n"), DuplicateError);
  // Length mark is stripped, so "aː" collides with "a".
  EXPECT_THROW(load_phoneme_table("a\tvowel\tlow\naː\tvowel\tlow\n"), DuplicateError);
}

TEST(Inventory, UnknownSymbolCarriesPosition) {
  const Inventory inv = default_inventory();
  EXPECT_THROW(inv.map_phoneme("ʘ"), UnknownSymbolError);
  try {
    inv.phonemes_to_attributes({"p", "a", "ʘ"});
    FAIL();
  } catch (const UnknownSymbolError& e) {
    EXPECT_EQ(e.symbol(), "ʘ");
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(Inventory, SuprasegmentalsStrippedUnlessKept) {
  const Inventory inv = default_inventory();
  EXPECT_EQ(inv.map_phoneme("iː"), inv.map_phoneme("i"));
  EXPECT_EQ(inv.map_phoneme("ˈa"), inv.map_phoneme("a"));
  EXPECT_EQ(inv.map_phoneme("t͡s"), inv.map_phoneme("ts"));

  IpaNormalization keep_length;
  keep_length.keep.insert("ː");
  const Inventory strict = default_inventory(keep_length);
  EXPECT_THROW(strict.map_phoneme("iː"), UnknownSymbolError);
}

TEST(Inventory, EmptySequenceMapsToEmpty) {
  EXPECT_TRUE(default_inventory().phonemes_to_attributes({}).empty());
}

// Mapping a concatenation equals concatenating the mappings, and repeated
// calls give identical output.
TEST(InventoryProperty, ConcatenationAndDeterminism) {
  const Inventory inv = default_inventory();
  std::vector<std::string> symbols;
  for (const auto& [ipa, e] : inv.entries()) symbols.push_back(ipa);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pick(0, symbols.size() - 1), len(0, 8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> a, b;
    for (std::size_t i = len(rng); i > 0; --i) a.push_back(symbols[pick(rng)]);
    for (std::size_t i = len(rng); i > 0; --i) b.push_back(symbols[pick(rng)]);
    std::vector<std::string> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    auto ma = canon(inv.phonemes_to_attributes(a));
    const auto mb = canon(inv.phonemes_to_attributes(b));
    const auto mab = canon(inv.phonemes_to_attributes(ab));
    ASSERT_EQ(mab.size(), ab.size());
    ma.insert(ma.end(), mb.begin(), mb.end());
    ASSERT_EQ(mab, ma);
    ASSERT_EQ(canon(inv.phonemes_to_attributes(ab)), mab);
  }
}

TEST(InventoryProperty, EveryEntryIsLegal) {
  const Inventory inv = default_inventory();
  for (const auto& [ipa, e] : inv.entries()) {
    EXPECT_TRUE(is_legal_pairing(e.manner, e.place)) << ipa;
  }
}

TEST(Inventory, ParseNamesRoundTrip) {
  for (const auto& tok : all_legal_attributes()) {
    const auto m = parse_manner(name_of(tok.manner()));
    const auto p = parse_place(name_of(tok.place()));
    ASSERT_TRUE(m && p);
    EXPECT_EQ(AttributeToken(*m, *p), tok);
  }
}
