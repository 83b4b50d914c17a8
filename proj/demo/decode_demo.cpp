// Builds an attribute lexicon for two keywords from IPA, fabricates a
// posterior grid that spells one of them, and decodes it.

#include <iostream>

#include "attrkws/attrkws.hpp"

int main() {
  using namespace attrkws;

  const Inventory inv = default_inventory();
  const auto rows = parse_lexicon_rows("rio\tes\tr i o\nmano\tes\tm a n o\n");
  const Lexicon lex = build_lexicon(rows, UnitSystem::attribute, &inv).lexicon;

  std::cout << "vocabulary:";
  for (const auto& tok : lex.vocab()) std::cout << ' ' << tok;
  std::cout << "\n";

  // Blank, then each unit of "rio" on two frames, then blank.
  std::vector<std::size_t> path{kBlankIndex};
  for (std::size_t u : lex.lookup("rio", "es")) path.insert(path.end(), {u, u});
  path.push_back(kBlankIndex);

  const double floor = 0.02 / static_cast<double>(lex.vocab_size() - 1);
  PosteriorMatrix post(path.size(), lex.vocab_size(), FrameKind::probability, floor);
  for (std::size_t t = 0; t < path.size(); ++t) post(t, path[t]) = 0.98;

  const auto result = beam_recognize(post, LexiconTrie(lex));
  std::cout << "recognized: " << result.keyword << " (" << result.language << "), log-score " << result.log_score
            << "\n";
  for (const auto& alt : result.alternatives)
    std::cout << "  " << alt.ref.keyword << " " << alt.log_score << "\n";
  return 0;
}
