// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "attrkws/attrkws.hpp"
#include "cli_runner.hpp"
#include "decoder_fixtures.hpp"
#include "eval_fixtures.hpp"
#include "test_util.hpp"

using namespace attrkws;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ------------------------------------------------------------------ CTC

Outcome ctc_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  const int n = 600;
  double worst = 0.0;
  int mismatches = 0, infeasible = 0;
  for (int i = 0; i < n; ++i) {
    const std::size_t T = 1 + rng() % 6, V = 2 + rng() % 3, L = rng() % 4;
    LabelSequence labels(L);
    for (auto& l : labels) l = 1 + rng() % (V - 1);
    const auto p = fixtures::random_posteriors(rng, T, V);
    const double fast = ctc_log_forward(p, labels), slow = brute_force_ctc(p, labels);
    if (fast == kLogZero || slow == kLogZero) {
      infeasible += slow == kLogZero;
      mismatches += fast != slow;
      continue;
    }
    const double d = std::abs(fast - slow);
    worst = std::max(worst, d);
    mismatches += !(d < 1e-9);
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0,
          fmt("%d instances (%d infeasible), max |diff| %.3g, %d mismatches, %.2f s", n, infeasible, worst, mismatches,
              secs)};
}

Outcome ctc_gradient() {
  std::mt19937_64 rng(102);
  const int n = 150;
  const double h = 1e-4;
  double worst_rel = 0.0, worst_row = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::size_t T = 1 + rng() % 5, V = 2 + rng() % 3;
    LabelSequence labels;
    for (std::size_t L = rng() % 4; L > 0; --L) labels.push_back(1 + rng() % (V - 1));
    while (min_frames(labels) > T) labels.pop_back();
    auto logits = fixtures::random_logits(rng, T, V);
    const auto r = ctc_loss_and_grad(logits, labels);
    for (std::size_t t = 0; t < T; ++t) {
      double row = 0.0;
      for (std::size_t k = 0; k < V; ++k) {
        row += r.grad(t, k);
        const double keep = logits(t, k);
        logits(t, k) = keep + h;
        const double up = ctc_loss_and_grad(logits, labels).loss;
        logits(t, k) = keep - h;
        const double down = ctc_loss_and_grad(logits, labels).loss;
        logits(t, k) = keep;
        const double numeric = (up - down) / (2 * h);
        // Relative to the larger magnitude; a floor keeps exact zeros meaningful.
        const double rel = std::abs(r.grad(t, k) - numeric) / std::max({std::abs(r.grad(t, k)), std::abs(numeric), 1e-3});
        worst_rel = std::max(worst_rel, rel);
      }
      worst_row = std::max(worst_row, std::abs(row));
    }
  }
  return {worst_rel < 1e-4 && worst_row < 1e-8,
          fmt("%d instances, max relative error %.3g, max |row sum| %.3g", n, worst_rel, worst_row)};
}

// ------------------------------------------------------------------ decoder

Outcome decoder_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(103);
  const int n = 1200;
  int unpruned_agree = 0, beam_agree = 0, compared = 0;
  int band_total[4] = {}, band_miss[4] = {};  // beam misses per sharpness band [0,1) .. [3,4)
  BeamOptions unpruned;
  unpruned.beam_width = kUnpruned;
  const BeamOptions beam16{16, 5};
  for (int i = 0; i < n; ++i) {
    const std::size_t V = 3 + rng() % 8, T = 5 + rng() % 46, entries = 1 + rng() % 50;
    const auto lex = fixtures::random_lexicon(rng, entries, V, 8);
    const LexiconTrie trie(lex);
    const auto& target = lex.entries()[rng() % lex.size()];
    const double sharpness = std::uniform_real_distribution<double>(0.0, 4.0)(rng);
    const auto post = fixtures::planted_posteriors(rng, T, V, lex.indices(target), sharpness);
    const auto all = score_all(post, lex);
    const auto band = std::min<std::size_t>(3, static_cast<std::size_t>(sharpness));
    ++band_total[band];
    ++compared;
    if (all.front().log_score == kLogZero) {
      // Nothing feasible: both decoders must refuse.
      bool threw = false;
      try {
        beam_recognize(post, trie, unpruned);
      } catch (const InfeasibleError&) {
        threw = true;
      }
      unpruned_agree += threw;
      beam_agree += threw;
      continue;
    }
    const KeywordRef best = all.front().ref;
    const auto u = beam_recognize(post, trie, unpruned);
    unpruned_agree += KeywordRef{u.keyword, u.language} == best;
    bool hit = false;
    try {
      const auto b = beam_recognize(post, trie, beam16);
      hit = KeywordRef{b.keyword, b.language} == best;
    } catch (const InfeasibleError&) {
    }
    beam_agree += hit;
    band_miss[band] += !hit;
  }
  const double secs = seconds_since(t0);
  const double beam_rate = 100.0 * beam_agree / compared;
  return {unpruned_agree == compared && beam_rate >= 99.0 && secs < 60.0,
          fmt("%d trials, unpruned agreement %d/%d, beam=16 agreement %.2f%%, %.2f s (beam misses by sharpness "
              "band: [0,1) %d/%d, [1,2) %d/%d, [2,3) %d/%d, [3,4) %d/%d)",
              compared, unpruned_agree, compared, beam_rate, secs, band_miss[0], band_total[0], band_miss[1],
              band_total[1], band_miss[2], band_total[2], band_miss[3], band_total[3])};
}

// ------------------------------------------------------------------ adversarial update

Outcome reversal_update() {
  // Scalar case: theta_E = 1.0, dL_O = 0.2, dL_C = 0.4, lr 0.1, lambda 0.5.
  std::vector<double> theta{1.0}, g_c{0.4};
  GradientReversal{0.5}.backward(g_c);
  detail::sgd_update(theta, std::vector<double>{0.2 + g_c[0]}, 0.1);
  const bool scalar_ok = theta[0] == 1.0;

  ModelConfig c;
  c.feature_dim = 3;
  c.context = 1;
  c.encoder_layers = 2;
  c.encoder_width = 5;
  c.vocab_size = 4;
  c.classifier_layers = 3;
  c.classifier_width = 4;
  c.num_languages = 3;
  c.optimizer = OptimizerKind::sgd;
  c.learning_rate = 0.05;
  std::mt19937_64 rng(104);
  std::normal_distribution<double> nd(0.0, 1.0);
  double worst = 0.0;
  for (double lambda : {0.0, 0.3, 1.0, 2.0}) {
    c.lambda = lambda;
    c.seed = 1 + static_cast<std::uint64_t>(lambda * 10);
    const auto s = init_model(c);
    std::vector<Utterance> batch;
    for (std::size_t i = 0; i < 3; ++i) {
      FrameMatrix f(4 + i, 3, FrameKind::features);
      for (double& x : f.data()) x = nd(rng);
      batch.push_back({std::move(f), LabelSequence{1 + i % 3, 1 + (i + 1) % 3}, i % 3});
    }
    const auto stepped = train_step(s, batch, c.learning_rate, lambda).state;
    auto g_o = compute_gradients(s, batch, GradientRoute::output_only, lambda).grad;
    auto g_cls = compute_gradients(s, batch, GradientRoute::classifier_only, lambda).grad;
    auto expected = s.params;
    std::vector<std::vector<double>*> e, o, cl, got;
    expected.for_each_encoder([&](std::vector<double>& v) { e.push_back(&v); });
    g_o.for_each_encoder([&](std::vector<double>& v) { o.push_back(&v); });
    g_cls.for_each_encoder([&](std::vector<double>& v) { cl.push_back(&v); });
    auto stepped_params = stepped.params;
    stepped_params.for_each_encoder([&](std::vector<double>& v) { got.push_back(&v); });
    for (std::size_t b = 0; b < e.size(); ++b)
      for (std::size_t j = 0; j < e[b]->size(); ++j) {
        const double want = (*e[b])[j] - c.learning_rate * ((*o[b])[j] - lambda * (*cl[b])[j]);
        worst = std::max(worst, std::abs(want - (*got[b])[j]));
      }
  }
  return {scalar_ok && worst < 1e-10,
          fmt("scalar case -> %.17g, max |GRL - explicit| over encoder params %.3g", theta[0], worst)};
}

// ------------------------------------------------------------------ adversarial trend

struct TrendRun {
  double classifier_accuracy = 0.0;  // the model's own language classifier on the test split
  double probe_accuracy = 0.0;       // fresh logistic-regression probe on pooled embeddings
  double wer = 0.0;
  std::size_t epochs = 0;
  double seconds = 0.0;
};

TrendRun trend_run(const SyntheticDataset& ds, double lambda) {
  const auto t0 = Clock::now();
  auto utts = [](const std::vector<SyntheticUtterance>& v) {
    std::vector<Utterance> out;
    for (const auto& u : v) out.push_back(u.data);
    return out;
  };
  const auto tr = utts(ds.train), va = utts(ds.valid);
  ModelConfig c;
  c.feature_dim = ds.config.feature_dim;
  c.vocab_size = ds.lexicon.vocab_size();
  c.num_languages = ds.languages.size();
  c.lambda = lambda;
  const auto result = train(init_model(c), tr, va);
  const auto& m = result.best;

  const LexiconTrie trie(ds.lexicon);
  std::vector<std::string> pred, ref, lid_pred, lid_ref;
  std::vector<std::vector<double>> xtr, xte;
  std::vector<std::size_t> ytr, yte;
  for (const auto& u : ds.train) {
    xtr.push_back(pooled_embedding(m, u.data.features));
    ytr.push_back(u.data.language);
  }
  for (const auto& u : ds.test) {
    pred.push_back(beam_recognize(posteriors(m, u.data.features), trie).keyword);
    ref.push_back(u.keyword);
    lid_pred.push_back(ds.languages[*predict_language(m, u.data.features)]);
    lid_ref.push_back(u.language);
    xte.push_back(pooled_embedding(m, u.data.features));
    yte.push_back(u.data.language);
  }
  LanguageProbe probe;
  probe.fit(xtr, ytr, ds.languages.size());
  return {lid_accuracy(lid_pred, lid_ref), probe.accuracy(xte, yte), compute_wer(pred, ref), result.curves.size(),
          seconds_since(t0)};
}

Outcome adversarial_trend() {
  const auto ds = make_synthetic_dataset(SyntheticConfig{});
  const auto plain = trend_run(ds, 0.0);
  const auto dat = trend_run(ds, 1.0);
  const double total = plain.seconds + dat.seconds;
  const bool ok = std::abs(dat.classifier_accuracy - 50.0) <= 10.0 && plain.classifier_accuracy > 80.0 &&
                  std::abs(dat.wer - plain.wer) <= 5.0 && total <= 300.0;
  return {ok, fmt("LID accuracy lambda=0 %.2f%% vs lambda=1 %.2f%%; WER %.2f vs %.2f; %zu+%zu epochs in %.1f s "
                  "(fresh linear probe, informational: %.2f%% vs %.2f%%)",
                  plain.classifier_accuracy, dat.classifier_accuracy, plain.wer, dat.wer, plain.epochs, dat.epochs,
                  total, plain.probe_accuracy, dat.probe_accuracy)};
}

// ------------------------------------------------------------------ attribute inventory

Outcome attribute_anchors() {
  const Inventory inv = default_inventory();
  const std::string r = inv.map_phoneme("r").canonical(), i = inv.map_phoneme("i").canonical();
  const std::size_t vocab = inv.attribute_vocab().size();
  const bool ok = r == "tap-alveolar" && i == "vowel-high" && kMannerNames.size() == 7 &&
                  kConsonantPlaceNames.size() == 10 && kVowelPlaceNames.size() == 8 && vocab <= 68 && vocab == 49;
  return {ok, fmt("/r/ -> %s, /i/ -> %s; categories %zu/%zu/%zu; shipped vocabulary %zu (golden 49, max 68)",
                  r.c_str(), i.c_str(), kMannerNames.size(), kConsonantPlaceNames.size(), kVowelPlaceNames.size(),
                  vocab)};
}

Outcome vocabulary_compactness() {
  const auto rows = parse_lexicon_rows(read_file(fixtures::source_path("data/demo_keywords.tsv")));
  const Inventory inv = default_inventory();
  auto size = [&](UnitSystem u) { return build_lexicon(rows, u, &inv).lexicon.vocab_size() - 1; };
  const std::size_t a = size(UnitSystem::attribute), p = size(UnitSystem::phoneme), ch = size(UnitSystem::character);
  std::set<std::string> langs;
  for (const auto& r : rows) langs.insert(r.language);
  return {a < p && p < ch, fmt("%zu keywords in %zu languages: attribute %zu < phoneme %zu < character %zu",
                               rows.size(), langs.size(), a, p, ch)};
}

// ------------------------------------------------------------------ WER report

Outcome wer_report() {
  fixtures::TempDir dir("acc-wer");
  std::vector<fixtures::FixtureUtt> utts;
  fixtures::add_cell(utts, "ID-IV", "de", 10, 2);   // 20%
  fixtures::add_cell(utts, "ID-IV", "en", 10, 4);   // 40%
  fixtures::add_cell(utts, "ID-OOV", "en", 5, 0);   // 0%
  fixtures::add_cell(utts, "UL", "pl", 4, 4);       // 100%
  fixtures::add_cell(utts, "UL", "ru", 12, 0);      // 0%
  const auto records = fixtures::build_fixture(dir.path(), utts);
  const auto run = run_eval(records, fixtures::single_unit_lexicon({"de", "en", "pl", "ru"}));
  const auto& s = run.report.splits;
  const bool direct = compute_wer({"a", "b"}, {"a", "b"}) == 0.0 &&
                      compute_wer({"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"},
                                  {"a", "b", "c", "d", "e", "f", "g", "x", "y", "z"}) == 30.0 &&
                      compute_wer({"a"}, {"b"}) == 100.0;
  const bool ok = direct && s.size() == 3 && s[0].wer_weighted == 30.0 && s[1].wer_weighted == 0.0 &&
                  s[2].wer_weighted == 25.0 && s[2].wer_unweighted == 50.0 && run.report.cells.size() == 5 &&
                  run.report.cells[3].wer == 100.0 && run.report.failures.empty();
  return {ok, fmt("ID-IV %.2f, ID-OOV %.2f, UL weighted %.2f / unweighted %.2f; direct 0/30/100 %s",
                  s.size() > 0 ? s[0].wer_weighted : -1.0, s.size() > 1 ? s[1].wer_weighted : -1.0,
                  s.size() > 2 ? s[2].wer_weighted : -1.0, s.size() > 2 ? s[2].wer_unweighted : -1.0,
                  direct ? "exact" : "WRONG")};
}

// ------------------------------------------------------------------ CLI determinism

Outcome cli_determinism() {
  fixtures::TempDir dir("acc-det");
  auto run = [&](const std::vector<std::string>& args) { return fixtures::run_cli(args, dir.path()).exit_code; };
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  std::vector<std::string> failures;
  if (run({"synth-data", "--out-dir", p("syn"), "--train-per-language", "40", "--valid-per-language", "10",
           "--test-per-language", "15", "--seed", "3"}) != 0)
    return {false, "synth-data failed"};
  for (int i = 1; i <= 2; ++i) {
    const std::string tag = std::to_string(i);
    if (run({"train", "--train-manifest", p("syn/train.jsonl"), "--valid-manifest", p("syn/valid.jsonl"), "--lexicon",
             p("syn/lexicon.tsv"), "--out", p("model" + tag + ".json"), "--max-epochs", "4", "--seed", "11"}) != 0)
      failures.push_back("train run " + tag);
  }
  if (run({"export-posteriors", "--model", p("model1.json"), "--manifest", p("syn/test.jsonl"), "--out-dir", p("post"),
           "--out-manifest", p("post.jsonl"), "--lid-out", p("lid.jsonl")}) != 0)
    return {false, "export-posteriors failed"};
  for (int i = 1; i <= 2; ++i) {
    const std::string tag = std::to_string(i);
    if (run({"decode", "--lexicon", p("syn/lexicon.tsv"), "--posteriors", p("post.jsonl"), "--workers", "4", "--out",
             p("decode" + tag + ".jsonl")}) != 0)
      failures.push_back("decode run " + tag);
    if (run({"evaluate", "--manifest", p("post.jsonl"), "--lexicon", p("syn/lexicon.tsv"), "--lid-predictions",
             p("lid.jsonl"), "--workers", "4", "--out", p("report" + tag + ".json"), "--table",
             p("table" + tag + ".txt")}) != 0)
      failures.push_back("evaluate run " + tag);
  }
  if (!failures.empty()) return {false, "command failed: " + failures.front()};
  std::vector<std::string> differing;
  for (const char* stem : {"model%d.json", "decode%d.jsonl", "report%d.json", "table%d.txt"}) {
    const std::string a = read_file(dir / fmt(stem, 1)), b = read_file(dir / fmt(stem, 2));
    if (a.empty() || a != b) differing.push_back(fmt(stem, 1));
  }
  std::string detail = "train, decode, evaluate outputs byte-identical across two runs";
  if (!differing.empty()) {
    detail = "differs:";
    for (const auto& d : differing) detail += " " + d;
  }
  return {differing.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"ctc-oracle-equivalence", ctc_oracle},
      {"ctc-gradient-check", ctc_gradient},
      {"decoder-oracle-equivalence", decoder_oracle},
      {"reversal-update-equivalence", reversal_update},
      {"adversarial-trend", adversarial_trend},
      {"attribute-anchors", attribute_anchors},
      {"vocabulary-compactness", vocabulary_compactness},
      {"wer-report-exactness", wer_report},
      {"cli-determinism", cli_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all acceptance criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
