#pragma once

// Seeded synthetic multi-language keyword corpus. Every frame is
//   prototype[unit or blank] + offset[language] + noise
// and all languages share the same keywords and pronunciations, so the
// language is recoverable only from the offset component.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "attrkws/dat_model.hpp"
#include "attrkws/lexicon.hpp"

namespace attrkws {

struct SyntheticConfig {
  std::size_t languages = 2;
  std::size_t keywords = 10;
  std::size_t units = 6;  // excluding blank
  std::size_t min_length = 2;
  std::size_t max_length = 4;
  std::size_t feature_dim = 16;
  double language_offset = 1.5;
  double noise = 0.6;
  std::size_t train_per_language = 150;
  std::size_t valid_per_language = 30;
  std::size_t test_per_language = 60;
  std::uint64_t seed = 7;
};

struct SyntheticUtterance {
  std::string utt_id;
  std::string keyword;
  std::string language;
  std::string split;  // train | valid | test
  Utterance data;
};

struct SyntheticDataset {
  SyntheticConfig config;
  std::vector<std::string> languages;
  Lexicon lexicon;
  std::vector<SyntheticUtterance> train, valid, test;
};

inline std::string synthetic_name(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02zu", prefix, i);
  return buf;
}

inline SyntheticDataset make_synthetic_dataset(const SyntheticConfig& cfg) {
  if (cfg.languages < 2 || cfg.keywords == 0 || cfg.units == 0 || cfg.feature_dim == 0 || cfg.min_length == 0 ||
      cfg.min_length > cfg.max_length)
    throw Error("invalid synthetic dataset configuration");

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto uniform = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  // Prototype 0 is the blank/silence frame.
  std::vector<std::vector<double>> prototypes(cfg.units + 1, std::vector<double>(cfg.feature_dim));
  for (auto& p : prototypes)
    for (double& v : p) v = gauss(rng);
  std::vector<std::vector<double>> offsets(cfg.languages, std::vector<double>(cfg.feature_dim));
  for (auto& o : offsets) {
    double norm = 0.0;
    for (double& v : o) norm += (v = gauss(rng)) * v;
    for (double& v : o) v *= cfg.language_offset / std::sqrt(norm);
  }

  std::vector<std::string> languages;
  for (std::size_t l = 0; l < cfg.languages; ++l) languages.push_back(synthetic_name("lang", l));

  // Distinct random unit sequences.
  std::vector<std::vector<std::size_t>> prons;
  while (prons.size() < cfg.keywords) {
    std::vector<std::size_t> p(uniform(cfg.min_length, cfg.max_length));
    for (auto& u : p) u = uniform(1, cfg.units);
    if (std::find(prons.begin(), prons.end(), p) == prons.end()) prons.push_back(std::move(p));
  }

  std::vector<std::string> unit_names{std::string(kBlankToken)};
  for (std::size_t u = 1; u <= cfg.units; ++u) unit_names.push_back(synthetic_name("u", u));
  std::vector<LexiconEntry> entries;
  for (std::size_t k = 0; k < cfg.keywords; ++k) {
    std::vector<std::string> tokens;
    for (auto u : prons[k]) tokens.push_back(unit_names[u]);
    for (const auto& lang : languages) entries.push_back({synthetic_name("kw", k), lang, tokens});
  }

  SyntheticDataset ds{cfg, languages, Lexicon(UnitSystem::phoneme, make_vocab({unit_names.begin() + 1, unit_names.end()}), entries), {}, {}, {}};
  // make_vocab sorts names; u01..u99 sort the same as their indices.

  auto make_utterance = [&](std::size_t lang, std::size_t kw) {
    std::vector<std::size_t> frames;
    auto silence = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t n = uniform(lo, hi); n > 0; --n) frames.push_back(0);
    };
    silence(1, 3);
    for (std::size_t i = 0; i < prons[kw].size(); ++i) {
      if (i > 0) silence(prons[kw][i] == prons[kw][i - 1] ? 1 : 0, 2);
      for (std::size_t n = uniform(2, 4); n > 0; --n) frames.push_back(prons[kw][i]);
    }
    silence(1, 3);
    FrameMatrix f(frames.size(), cfg.feature_dim, FrameKind::features);
    for (std::size_t t = 0; t < frames.size(); ++t)
      for (std::size_t d = 0; d < cfg.feature_dim; ++d)
        f(t, d) = prototypes[frames[t]][d] + offsets[lang][d] + cfg.noise * gauss(rng);
    return Utterance{std::move(f), prons[kw], lang};
  };

  auto fill = [&](std::vector<SyntheticUtterance>& out, const char* split, std::size_t per_language) {
    for (std::size_t i = 0; i < per_language; ++i) {
      for (std::size_t lang = 0; lang < cfg.languages; ++lang) {
        const std::size_t kw = uniform(0, cfg.keywords - 1);
        char id[64];
        std::snprintf(id, sizeof id, "%s-%s-%04zu", split, languages[lang].c_str(), i);
        out.push_back({id, synthetic_name("kw", kw), languages[lang], split, make_utterance(lang, kw)});
      }
    }
  };
  fill(ds.train, "train", cfg.train_per_language);
  fill(ds.valid, "valid", cfg.valid_per_language);
  fill(ds.test, "test", cfg.test_per_language);
  return ds;
}

}  // namespace attrkws
