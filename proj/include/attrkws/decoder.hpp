#pragma once

// Pronunciation-model decoding: pick the lexicon keyword whose unit sequence
// best explains a posterior grid, either by exhaustive CTC rescoring or by a
// frame-synchronous prefix beam search constrained to the lexicon trie.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "attrkws/ctc.hpp"
#include "attrkws/error.hpp"
#include "attrkws/lexicon.hpp"
#include "attrkws/log_math.hpp"

namespace attrkws {

struct KeywordRef {
  std::string keyword;
  std::string language;

  friend auto operator<=>(const KeywordRef&, const KeywordRef&) = default;
};

class LexiconTrie {
 public:
  static constexpr std::size_t kRoot = 0;
  static constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

  struct Node {
    std::size_t token = kBlankIndex;  // unit emitted on entering this node (unused for the root)
    std::size_t depth = 0;
    std::map<std::size_t, std::size_t> children;  // token -> node id, ordered for determinism
    std::vector<KeywordRef> terminals;            // sorted
    std::size_t min_tokens_to_terminal = kUnreachable;
  };

  explicit LexiconTrie(const Lexicon& lex) : vocab_size_(lex.vocab_size()) {
    if (lex.empty()) throw Error("cannot build a trie from an empty lexicon");
    nodes_.emplace_back();
    for (const auto& e : lex.entries()) {
      std::size_t cur = kRoot;
      for (std::size_t tok : lex.indices(e)) {
        auto it = nodes_[cur].children.find(tok);
        if (it == nodes_[cur].children.end()) {
          Node child;
          child.token = tok;
          child.depth = nodes_[cur].depth + 1;
          nodes_.push_back(std::move(child));
          it = nodes_[cur].children.emplace(tok, nodes_.size() - 1).first;
        }
        cur = it->second;
      }
      nodes_[cur].terminals.push_back({e.keyword, e.language});
    }
    // Children always have larger ids than their parent, so one reverse pass
    // settles the distance to the nearest terminal.
    for (std::size_t n = nodes_.size(); n-- > 0;) {
      auto& node = nodes_[n];
      std::sort(node.terminals.begin(), node.terminals.end());
      if (!node.terminals.empty()) node.min_tokens_to_terminal = 0;
      for (const auto& [tok, child] : node.children) {
        const std::size_t d = nodes_[child].min_tokens_to_terminal;
        if (d != kUnreachable) node.min_tokens_to_terminal = std::min(node.min_tokens_to_terminal, d + 1);
      }
    }
  }

  const Node& node(std::size_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t vocab_size() const { return vocab_size_; }

  // Node reached by following `tokens` from the root, if any.
  std::optional<std::size_t> find(std::span<const std::size_t> tokens) const {
    std::size_t cur = kRoot;
    for (std::size_t tok : tokens) {
      const auto it = nodes_[cur].children.find(tok);
      if (it == nodes_[cur].children.end()) return std::nullopt;
      cur = it->second;
    }
    return cur;
  }

 private:
  std::vector<Node> nodes_;
  std::size_t vocab_size_;
};

struct ScoredKeyword {
  KeywordRef ref;
  double log_score = kLogZero;
};

// Descending score; ties broken by (keyword, language).
inline bool ranks_before(const ScoredKeyword& a, const ScoredKeyword& b) {
  if (a.log_score != b.log_score) return a.log_score > b.log_score;
  return a.ref < b.ref;
}

struct RecognitionResult {
  std::string keyword;
  std::string language;
  double log_score = kLogZero;
  std::vector<ScoredKeyword> alternatives;  // top-k, best first
};

inline void check_vocab(const PosteriorMatrix& post, std::size_t vocab) {
  if (post.cols() != vocab)
    throw DimensionError("posterior vocabulary size " + std::to_string(post.cols()) +
                         " does not match lexicon vocabulary size " + std::to_string(vocab));
}

// Exhaustive CTC rescoring of every lexicon entry.
inline std::vector<ScoredKeyword> score_all(const PosteriorMatrix& post, const Lexicon& lex) {
  check_vocab(post, lex.vocab_size());
  const FrameMatrix logp = log_probabilities(post);
  std::vector<ScoredKeyword> out;
  out.reserve(lex.size());
  for (const auto& e : lex.entries()) {
    out.push_back({{e.keyword, e.language}, ctc_log_forward_logp(logp, lex.indices(e), kBlankIndex)});
  }
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

inline constexpr std::size_t kUnpruned = std::numeric_limits<std::size_t>::max();

struct BeamOptions {
  std::size_t beam_width = 16;  // kUnpruned disables pruning
  std::size_t top_k = 5;
};

// Frame-synchronous CTC prefix beam search over trie paths. Each hypothesis
// is a trie node (the node identifies the emitted prefix) with its score
// split into paths ending in blank and paths ending in the node's token.
// At most beam_width non-terminal nodes survive each frame; terminal nodes
// are always kept.
inline RecognitionResult beam_recognize(const PosteriorMatrix& post, const LexiconTrie& trie,
                                        const BeamOptions& options = {}) {
  if (options.beam_width == 0) throw Error("beam width must be at least 1");
  check_vocab(post, trie.vocab_size());
  const FrameMatrix logp = log_probabilities(post);
  const std::size_t T = logp.rows();
  if (T == 0) throw DimensionError("posterior grid has no frames");

  const std::size_t N = trie.size();
  std::vector<double> blank(N, kLogZero), nonblank(N, kLogZero);
  std::vector<double> next_blank(N, kLogZero), next_nonblank(N, kLogZero);
  std::vector<std::size_t> active{LexiconTrie::kRoot}, touched;
  std::vector<char> is_touched(N, 0);
  blank[LexiconTrie::kRoot] = 0.0;

  auto touch = [&](std::size_t n) {
    if (!is_touched[n]) {
      is_touched[n] = 1;
      touched.push_back(n);
    }
  };

  // Frame 0 is handled like any other: the root starts with log 1 "before" the
  // first frame, and the loop consumes frames 0..T-1.
  for (std::size_t t = 0; t < T; ++t) {
    const auto lp = logp.row(t);
    const std::size_t frames_left = T - t - 1;
    touched.clear();
    for (std::size_t n : active) {
      const double pb = blank[n];
      const double pnb = nonblank[n];
      const double total = log_add(pb, pnb);
      const auto& node = trie.node(n);

      touch(n);
      if (!is_log_zero(total)) next_blank[n] = log_add(next_blank[n], total + lp[kBlankIndex]);
      if (n != LexiconTrie::kRoot && !is_log_zero(pnb))
        next_nonblank[n] = log_add(next_nonblank[n], pnb + lp[node.token]);

      for (const auto& [tok, child] : node.children) {
        // A child that cannot reach a terminal in the frames left is dead.
        if (trie.node(child).min_tokens_to_terminal > frames_left) continue;
        const double from = (n != LexiconTrie::kRoot && tok == node.token) ? pb : total;
        if (is_log_zero(from) || is_log_zero(lp[tok])) continue;
        touch(child);
        next_nonblank[child] = log_add(next_nonblank[child], from + lp[tok]);
      }
    }

    for (std::size_t n : active) blank[n] = nonblank[n] = kLogZero;
    active.clear();
    for (std::size_t n : touched) {
      is_touched[n] = 0;
      blank[n] = next_blank[n];
      nonblank[n] = next_nonblank[n];
      next_blank[n] = next_nonblank[n] = kLogZero;
      if (trie.node(n).min_tokens_to_terminal > frames_left) {
        blank[n] = nonblank[n] = kLogZero;
        continue;
      }
      if (!is_log_zero(log_add(blank[n], nonblank[n]))) active.push_back(n);
    }

    // Only non-terminal nodes compete for the beam.
    if (options.beam_width != kUnpruned && active.size() > options.beam_width) {
      const auto split = std::stable_partition(active.begin(), active.end(),
                                               [&](std::size_t n) { return trie.node(n).terminals.empty(); });
      const auto partial = static_cast<std::size_t>(split - active.begin());
      if (partial > options.beam_width) {
        auto better = [&](std::size_t a, std::size_t b) {
          const double sa = log_add(blank[a], nonblank[a]);
          const double sb = log_add(blank[b], nonblank[b]);
          if (sa != sb) return sa > sb;
          return a < b;
        };
        const auto cut = active.begin() + static_cast<std::ptrdiff_t>(options.beam_width);
        std::nth_element(active.begin(), cut, split, better);
        for (auto it = cut; it != split; ++it) blank[*it] = nonblank[*it] = kLogZero;
        active.erase(cut, split);
      }
    }
    std::sort(active.begin(), active.end());
  }

  std::vector<ScoredKeyword> finals;
  for (std::size_t n : active) {
    const double score = log_add(blank[n], nonblank[n]);
    for (const auto& ref : trie.node(n).terminals) finals.push_back({ref, score});
  }
  std::sort(finals.begin(), finals.end(), ranks_before);
  if (finals.empty() || is_log_zero(finals.front().log_score))
    throw InfeasibleError("no feasible keyword for this posterior grid");

  RecognitionResult result{finals.front().ref.keyword, finals.front().ref.language, finals.front().log_score, {}};
  for (const auto& f : finals) {
    if (result.alternatives.size() >= options.top_k) break;
    result.alternatives.push_back(f);
  }
  return result;
}

struct BatchFailure {
  std::size_t index = 0;
  std::string path;
  std::string message;
  bool vocab_mismatch = false;
};

struct BatchOutcome {
  // One slot per input file, in input order; empty where decoding failed.
  std::vector<std::optional<RecognitionResult>> results;
  std::vector<BatchFailure> failures;  // sorted by index
};

inline BatchOutcome batch_recognize(const std::vector<std::filesystem::path>& files, const LexiconTrie& trie,
                                    const BeamOptions& options, std::size_t workers) {
  BatchOutcome out;
  out.results.resize(files.size());
  if (files.empty()) return out;
  workers = std::clamp<std::size_t>(workers, 1, files.size());

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        out.results[i] = beam_recognize(read_frame_matrix(files[i]), trie, options);
      } catch (const DimensionError& e) {
        std::lock_guard lock(failure_mutex);
        out.failures.push_back({i, files[i].string(), e.what(), true});
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        out.failures.push_back({i, files[i].string(), e.what(), false});
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  std::sort(out.failures.begin(), out.failures.end(),
            [](const BatchFailure& a, const BatchFailure& b) { return a.index < b.index; });
  return out;
}

}  // namespace attrkws
