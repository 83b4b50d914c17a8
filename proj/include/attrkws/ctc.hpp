#pragma once

// Connectionist temporal classification in natural-log space: forward
// scoring, loss with gradients w.r.t. logits, collapse, and a brute-force
// enumeration oracle.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "attrkws/blank.hpp"
#include "attrkws/error.hpp"
#include "attrkws/frame_matrix.hpp"
#include "attrkws/log_math.hpp"

namespace attrkws {

using LabelSequence = std::vector<std::size_t>;

// Per-frame log-probabilities. Probability grids are logged, logit grids
// go through a row-wise log-softmax.
inline FrameMatrix log_probabilities(const PosteriorMatrix& post) {
  if (post.kind() == FrameKind::features) throw DimensionError("expected posteriors, got raw features");
  FrameMatrix out(post.rows(), post.cols(), FrameKind::logit);
  for (std::size_t t = 0; t < post.rows(); ++t) {
    auto dst = out.row(t);
    const auto src = post.row(t);
    if (post.kind() == FrameKind::probability) {
      for (std::size_t k = 0; k < src.size(); ++k) dst[k] = safe_log(src[k]);
    } else {
      std::copy(src.begin(), src.end(), dst.begin());
      log_softmax_inplace(dst);
    }
  }
  return out;
}

inline void check_labels(std::span<const std::size_t> labels, std::size_t vocab, std::size_t blank) {
  if (blank >= vocab) throw DimensionError("blank index out of range");
  for (std::size_t l : labels) {
    if (l >= vocab) throw DimensionError("label index " + std::to_string(l) + " out of range for V=" + std::to_string(vocab));
    if (l == blank) throw DimensionError("label sequence contains the blank index");
  }
}

// Minimum number of frames that can emit `labels`: one per label plus one
// separating blank per adjacent repeat.
inline std::size_t min_frames(std::span<const std::size_t> labels) {
  std::size_t n = labels.size();
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] == labels[i - 1]) ++n;
  return n;
}

namespace detail {

// Extended label l' = blank, l1, blank, l2, ..., blank (length 2L+1).
inline std::vector<std::size_t> extend_labels(std::span<const std::size_t> labels, std::size_t blank) {
  std::vector<std::size_t> ext(2 * labels.size() + 1, blank);
  for (std::size_t i = 0; i < labels.size(); ++i) ext[2 * i + 1] = labels[i];
  return ext;
}

// alpha(t, s): log-prob of all prefixes of length t+1 ending in state s.
inline FrameMatrix ctc_alpha(const FrameMatrix& logp, const std::vector<std::size_t>& ext) {
  const std::size_t T = logp.rows();
  const std::size_t S = ext.size();
  FrameMatrix alpha(T, S, FrameKind::logit, kLogZero);
  alpha(0, 0) = logp(0, ext[0]);
  if (S > 1) alpha(0, 1) = logp(0, ext[1]);
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      double acc = alpha(t - 1, s);
      if (s >= 1) acc = log_add(acc, alpha(t - 1, s - 1));
      if (s >= 2 && ext[s] != ext[s - 2]) acc = log_add(acc, alpha(t - 1, s - 2));
      alpha(t, s) = is_log_zero(acc) ? kLogZero : acc + logp(t, ext[s]);
    }
  }
  return alpha;
}

// beta(t, s): log-prob of all suffixes from frame t (inclusive) given state s at t.
inline FrameMatrix ctc_beta(const FrameMatrix& logp, const std::vector<std::size_t>& ext) {
  const std::size_t T = logp.rows();
  const std::size_t S = ext.size();
  FrameMatrix beta(T, S, FrameKind::logit, kLogZero);
  beta(T - 1, S - 1) = logp(T - 1, ext[S - 1]);
  if (S > 1) beta(T - 1, S - 2) = logp(T - 1, ext[S - 2]);
  for (std::size_t t = T - 1; t-- > 0;) {
    for (std::size_t s = 0; s < S; ++s) {
      double acc = beta(t + 1, s);
      if (s + 1 < S) acc = log_add(acc, beta(t + 1, s + 1));
      if (s + 2 < S && ext[s] != ext[s + 2]) acc = log_add(acc, beta(t + 1, s + 2));
      beta(t, s) = is_log_zero(acc) ? kLogZero : acc + logp(t, ext[s]);
    }
  }
  return beta;
}

// Paths end in the last label or the trailing blank; an empty label
// sequence has only the blank state.
inline double final_state_sum(const FrameMatrix& alpha, std::size_t S) {
  const std::size_t T = alpha.rows();
  return S == 1 ? alpha(T - 1, 0) : log_add(alpha(T - 1, S - 1), alpha(T - 1, S - 2));
}

inline double ctc_forward_logp(const FrameMatrix& logp, std::span<const std::size_t> labels, std::size_t blank) {
  if (logp.rows() < min_frames(labels)) return kLogZero;
  const auto ext = extend_labels(labels, blank);
  const auto alpha = ctc_alpha(logp, ext);
  return detail::final_state_sum(alpha, ext.size());
}

}  // namespace detail

// log P(labels | posteriors); kLogZero when no path collapses to `labels`.
inline double ctc_log_forward(const PosteriorMatrix& post, std::span<const std::size_t> labels,
                              std::size_t blank = kBlankIndex) {
  check_labels(labels, post.cols(), blank);
  if (post.rows() == 0) throw DimensionError("posterior grid has no frames");
  return detail::ctc_forward_logp(log_probabilities(post), labels, blank);
}

// Same as above for a grid that already holds per-frame log-probabilities.
inline double ctc_log_forward_logp(const FrameMatrix& logp, std::span<const std::size_t> labels,
                                   std::size_t blank = kBlankIndex) {
  check_labels(labels, logp.cols(), blank);
  if (logp.rows() == 0) throw DimensionError("posterior grid has no frames");
  return detail::ctc_forward_logp(logp, labels, blank);
}

struct CtcLossGrad {
  double loss = 0.0;
  FrameMatrix grad;  // d loss / d logit, T x V
};

// loss = -log P(labels | softmax(logits)); grad through the per-frame softmax:
//   grad(t,k) = softmax(t,k) - sum_{s: l'_s = k} exp(alpha(t,s) + beta(t,s) - logp(t,k) - log P)
inline CtcLossGrad ctc_loss_and_grad(const PosteriorMatrix& logits, std::span<const std::size_t> labels,
                                     std::size_t blank = kBlankIndex) {
  if (logits.kind() != FrameKind::logit) throw DimensionError("ctc_loss_and_grad expects a logit grid");
  check_labels(labels, logits.cols(), blank);
  const std::size_t T = logits.rows();
  const std::size_t V = logits.cols();
  if (T == 0) throw DimensionError("posterior grid has no frames");
  if (T < min_frames(labels))
    throw InfeasibleError("label sequence of length " + std::to_string(labels.size()) + " needs at least " +
                          std::to_string(min_frames(labels)) + " frames, got " + std::to_string(T));

  const FrameMatrix logp = log_probabilities(logits);
  const auto ext = detail::extend_labels(labels, blank);
  const auto alpha = detail::ctc_alpha(logp, ext);
  const auto beta = detail::ctc_beta(logp, ext);
  const std::size_t S = ext.size();
  const double log_total = detail::final_state_sum(alpha, S);
  if (is_log_zero(log_total) || !std::isfinite(log_total)) throw NumericError("CTC probability underflow");

  CtcLossGrad out{-log_total, FrameMatrix(T, V, FrameKind::logit)};
  std::vector<double> occupancy(V);
  for (std::size_t t = 0; t < T; ++t) {
    std::fill(occupancy.begin(), occupancy.end(), kLogZero);
    for (std::size_t s = 0; s < S; ++s) {
      const double ab = alpha(t, s) + beta(t, s);
      if (!std::isnan(ab)) occupancy[ext[s]] = log_add(occupancy[ext[s]], ab);
    }
    for (std::size_t k = 0; k < V; ++k) {
      const double posterior = std::exp(logp(t, k));
      const double gamma = is_log_zero(occupancy[k]) ? 0.0 : std::exp(occupancy[k] - logp(t, k) - log_total);
      out.grad(t, k) = posterior - gamma;
    }
  }
  return out;
}

// Merge adjacent repeats, then drop blanks.
inline LabelSequence greedy_collapse(std::span<const std::size_t> path, std::size_t blank = kBlankIndex) {
  LabelSequence out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0 && path[i] == path[i - 1]) continue;
    if (path[i] != blank) out.push_back(path[i]);
  }
  return out;
}

inline LabelSequence best_path(const PosteriorMatrix& post) {
  LabelSequence path(post.rows());
  for (std::size_t t = 0; t < post.rows(); ++t) {
    const auto r = post.row(t);
    path[t] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return path;
}

inline constexpr double kBruteForceLimit = 1e6;

// Enumerates all V^T frame paths. Test oracle for ctc_log_forward.
inline double brute_force_ctc(const PosteriorMatrix& post, std::span<const std::size_t> labels,
                              std::size_t blank = kBlankIndex) {
  check_labels(labels, post.cols(), blank);
  const std::size_t T = post.rows();
  const std::size_t V = post.cols();
  if (std::pow(static_cast<double>(V), static_cast<double>(T)) > kBruteForceLimit)
    throw DimensionError("brute-force enumeration bound exceeded (V^T > 1e6)");

  FrameMatrix prob = log_probabilities(post);
  for (double& x : prob.data()) x = std::exp(x);

  const LabelSequence target(labels.begin(), labels.end());
  std::vector<std::size_t> path(T, 0);
  double total = 0.0;
  while (true) {
    if (greedy_collapse(path, blank) == target) {
      double p = 1.0;
      for (std::size_t t = 0; t < T; ++t) p *= prob(t, path[t]);
      total += p;
    }
    std::size_t t = 0;
    while (t < T && ++path[t] == V) path[t++] = 0;
    if (t == T) break;
  }
  return safe_log(total);
}

}  // namespace attrkws
