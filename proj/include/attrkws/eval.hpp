#pragma once

// Keyword WER and language-ID accuracy over ID-IV / ID-OOV / UL splits.
// Utterances hold a single keyword, so WER is the percentage of
// misrecognized utterances.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attrkws/decoder.hpp"
#include "attrkws/error.hpp"
#include "attrkws/lexicon.hpp"
#include "attrkws/manifest.hpp"

namespace attrkws {

inline constexpr std::array<std::string_view, 3> kSplitNames = {"ID-IV", "ID-OOV", "UL"};

inline bool is_zero_shot_split(std::string_view split) { return split == "ID-OOV" || split == "UL"; }

inline std::size_t split_rank(std::string_view split) {
  for (std::size_t i = 0; i < kSplitNames.size(); ++i)
    if (kSplitNames[i] == split) return i;
  throw ParseError("unknown split tag '" + std::string(split) + "' (expected ID-IV, ID-OOV or UL)");
}

inline double compute_wer(const std::vector<std::string>& predictions, const std::vector<std::string>& references) {
  if (predictions.size() != references.size()) throw DimensionError("WER: prediction/reference length mismatch");
  if (predictions.empty()) throw DimensionError("WER: empty input");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    errors += normalize_keyword(predictions[i]) != normalize_keyword(references[i]);
  return 100.0 * static_cast<double>(errors) / static_cast<double>(predictions.size());
}

inline double lid_accuracy(const std::vector<std::string>& predicted, const std::vector<std::string>& reference) {
  if (predicted.size() != reference.size()) throw DimensionError("LID: prediction/reference length mismatch");
  if (predicted.empty()) throw DimensionError("LID: empty input");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == reference[i];
  return 100.0 * static_cast<double>(correct) / static_cast<double>(predicted.size());
}

struct EvalCell {
  std::string split;
  std::string language;
  std::size_t samples = 0;
  std::size_t errors = 0;
  double wer = 0.0;

  friend bool operator==(const EvalCell&, const EvalCell&) = default;
};

struct SplitSummary {
  std::string split;
  std::size_t samples = 0;
  std::size_t errors = 0;
  double wer_weighted = 0.0;    // 100 * errors / samples
  double wer_unweighted = 0.0;  // mean of per-language WERs

  friend bool operator==(const SplitSummary&, const SplitSummary&) = default;
};

struct LidSummary {
  std::size_t samples = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;

  friend bool operator==(const LidSummary&, const LidSummary&) = default;
};

struct EvalFailure {
  std::string utt_id;
  std::string message;

  friend bool operator==(const EvalFailure&, const EvalFailure&) = default;
};

struct EvalReport {
  std::vector<EvalCell> cells;  // ordered by split, then language
  std::vector<SplitSummary> splits;
  std::optional<LidSummary> lid;
  std::vector<EvalFailure> failures;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct ScoredUtterance {
  std::string split;
  std::string language;
  std::string reference;
  std::string prediction;
};

// Groups utterances by (split, language) and fills WER cells and split averages.
inline EvalReport aggregate(const std::vector<ScoredUtterance>& utts) {
  std::map<std::pair<std::size_t, std::string>, EvalCell> cells;
  for (const auto& u : utts) {
    auto& c = cells[{split_rank(u.split), u.language}];
    c.split = u.split;
    c.language = u.language;
    ++c.samples;
    c.errors += normalize_keyword(u.prediction) != normalize_keyword(u.reference);
  }
  EvalReport r;
  std::map<std::size_t, std::vector<const EvalCell*>> by_split;
  for (auto& [key, c] : cells) {
    c.wer = 100.0 * static_cast<double>(c.errors) / static_cast<double>(c.samples);
    r.cells.push_back(c);
  }
  for (const auto& c : r.cells) by_split[split_rank(c.split)].push_back(&c);
  for (const auto& [rank, members] : by_split) {
    SplitSummary s{std::string(kSplitNames[rank]), 0, 0, 0.0, 0.0};
    for (const auto* c : members) {
      s.samples += c->samples;
      s.errors += c->errors;
      s.wer_unweighted += c->wer;
    }
    s.wer_weighted = 100.0 * static_cast<double>(s.errors) / static_cast<double>(s.samples);
    s.wer_unweighted /= static_cast<double>(members.size());
    r.splits.push_back(s);
  }
  return r;
}

// Zero-shot contract: no ID-OOV/UL record may be a training lexicon entry,
// and UL languages must be absent from training altogether.
inline void check_zero_shot_disjoint(const std::vector<ManifestRecord>& records, const Lexicon& training) {
  std::set<std::string> train_languages;
  for (const auto& e : training.entries()) train_languages.insert(e.language);
  for (const auto& r : records) {
    if (!is_zero_shot_split(r.split)) continue;
    if (training.contains(r.keyword, r.language))
      throw Error("zero-shot disjointness violation: " + r.split + " record '" + r.utt_id + "' (" + r.keyword + ", " +
                  r.language + ") is a training lexicon entry");
    if (r.split == "UL" && train_languages.contains(r.language))
      throw Error("zero-shot disjointness violation: UL language '" + r.language + "' appears in training lexicon");
  }
}

struct EvalOptions {
  BeamOptions beam;
  std::size_t workers = 1;
  const Lexicon* training_lexicon = nullptr;
  const std::map<std::string, std::string>* language_predictions = nullptr;
};

struct EvalRun {
  EvalReport report;
  std::vector<std::optional<RecognitionResult>> results;  // per manifest record
};

inline EvalRun run_eval(const std::vector<ManifestRecord>& records, const Lexicon& lexicon,
                        const EvalOptions& options = {}) {
  for (const auto& r : records) split_rank(r.split);
  if (options.training_lexicon) check_zero_shot_disjoint(records, *options.training_lexicon);

  const LexiconTrie trie(lexicon);
  std::vector<std::filesystem::path> paths;
  for (const auto& r : records) paths.push_back(r.path);
  auto batch = batch_recognize(paths, trie, options.beam, options.workers);
  for (const auto& f : batch.failures)
    if (f.vocab_mismatch) throw DimensionError(records[f.index].utt_id + ": " + f.message);

  std::vector<ScoredUtterance> scored;
  std::vector<EvalFailure> failures;
  std::size_t lid_samples = 0, lid_correct = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (!batch.results[i]) continue;
    scored.push_back({rec.split, rec.language, rec.keyword, batch.results[i]->keyword});
    if (options.language_predictions) {
      const auto it = options.language_predictions->find(rec.utt_id);
      if (it != options.language_predictions->end()) {
        ++lid_samples;
        lid_correct += it->second == rec.language;
      }
    }
  }
  for (const auto& f : batch.failures) failures.push_back({records[f.index].utt_id, f.message});

  EvalRun run;
  run.report = scored.empty() ? EvalReport{} : aggregate(scored);
  run.report.failures = std::move(failures);
  if (lid_samples > 0)
    run.report.lid = LidSummary{lid_samples, lid_correct,
                                100.0 * static_cast<double>(lid_correct) / static_cast<double>(lid_samples)};
  run.results = std::move(batch.results);
  return run;
}

inline std::string report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "attrkws.eval_report/1";
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) {
    nlohmann::ordered_json cj;
    cj["split"] = c.split;
    cj["language"] = c.language;
    cj["samples"] = c.samples;
    cj["errors"] = c.errors;
    cj["wer"] = c.wer;
    j["cells"].push_back(cj);
  }
  j["splits"] = nlohmann::ordered_json::array();
  for (const auto& s : r.splits) {
    nlohmann::ordered_json sj;
    sj["split"] = s.split;
    sj["samples"] = s.samples;
    sj["errors"] = s.errors;
    sj["wer_weighted"] = s.wer_weighted;
    sj["wer_unweighted"] = s.wer_unweighted;
    j["splits"].push_back(sj);
  }
  if (r.lid) {
    j["lid"] = {{"samples", r.lid->samples}, {"correct", r.lid->correct}, {"accuracy", r.lid->accuracy}};
  } else {
    j["lid"] = nullptr;
  }
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : r.failures) j["failures"].push_back({{"utt_id", f.utt_id}, {"message", f.message}});
  return j.dump(2) + "\n";
}

inline EvalReport report_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("schema") != "attrkws.eval_report/1") throw ParseError("eval report: unsupported schema");
    EvalReport r;
    for (const auto& c : j.at("cells"))
      r.cells.push_back({c.at("split"), c.at("language"), c.at("samples"), c.at("errors"), c.at("wer")});
    for (const auto& s : j.at("splits"))
      r.splits.push_back({s.at("split"), s.at("samples"), s.at("errors"), s.at("wer_weighted"), s.at("wer_unweighted")});
    if (!j.at("lid").is_null()) {
      const auto& l = j.at("lid");
      r.lid = LidSummary{l.at("samples"), l.at("correct"), l.at("accuracy")};
    }
    for (const auto& f : j.at("failures")) r.failures.push_back({f.at("utt_id"), f.at("message")});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("eval report: ") + e.what());
  }
}

// Plain-text table: one block per split, languages as columns plus averages.
inline std::string report_to_table(const EvalReport& r) {
  std::ostringstream out;
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  for (const auto& s : r.splits) {
    std::vector<std::string> header{s.split};
    std::vector<std::string> row{"WER (%)"};
    for (const auto& c : r.cells) {
      if (c.split != s.split) continue;
      header.push_back(c.language);
      row.push_back(fmt(c.wer));
    }
    header.push_back("Avg.");
    row.push_back(fmt(s.wer_weighted));
    header.push_back("Avg.(unw)");
    row.push_back(fmt(s.wer_unweighted));
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = std::max(header[i].size(), row[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i == 0) {
          out << cells[i] << std::string(width[i] - cells[i].size(), ' ') << " |";
        } else {
          out << ' ' << std::string(width[i] - cells[i].size(), ' ') << cells[i];
        }
      }
      out << '\n';
    };
    line(header);
    std::size_t total = 2;
    for (std::size_t w : width) total += w + 1;
    out << std::string(total, '-') << '\n';
    line(row);
    out << '\n';
  }
  if (r.lid) out << "LID accuracy (%): " << fmt(r.lid->accuracy) << " (" << r.lid->correct << "/" << r.lid->samples << ")\n";
  if (!r.failures.empty()) out << "failed utterances: " << r.failures.size() << '\n';
  return out.str();
}

}  // namespace attrkws
