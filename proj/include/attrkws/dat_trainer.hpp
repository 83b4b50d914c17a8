#pragma once

// Parameter updates and the training loop for the adversarial model.
//
// Per step, with g_O = dL_O and g_C = dL_C:
//   θ_E -= α (g_O(θ_E) - λ g_C(θ_E))     (the GRL supplies the -λ)
//   θ_C -= α g_C(θ_C)
//   θ_O -= α g_O(θ_O)
// in plain SGD mode; AdamW mode feeds the same gradients through AdamW.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "attrkws/dat_model.hpp"

namespace attrkws {

namespace detail {

inline void sgd_update(std::vector<double>& w, const std::vector<double>& g, double lr) {
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * g[i];
}

inline void adamw_update(std::vector<double>& w, const std::vector<double>& g, std::vector<double>& m,
                         std::vector<double>& v, const ModelConfig& c, std::uint64_t step) {
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < w.size(); ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    w[i] -= c.learning_rate * (mhat / (std::sqrt(vhat) + c.epsilon) + c.weight_decay * w[i]);
  }
}

// Visits (param, grad, m, v) blocks in lockstep; `classifier` flags θ_C blocks.
inline void for_each_block(Parameters& p, const Parameters& g, Parameters& m, Parameters& v,
                           const std::function<void(std::vector<double>&, const std::vector<double>&,
                                                    std::vector<double>&, std::vector<double>&, bool)>& fn) {
  for (std::size_t l = 0; l < p.encoder.size(); ++l) {
    fn(p.encoder[l].weight, g.encoder[l].weight, m.encoder[l].weight, v.encoder[l].weight, false);
    fn(p.encoder[l].bias, g.encoder[l].bias, m.encoder[l].bias, v.encoder[l].bias, false);
  }
  fn(p.output.weight, g.output.weight, m.output.weight, v.output.weight, false);
  fn(p.output.bias, g.output.bias, m.output.bias, v.output.bias, false);
  for (std::size_t l = 0; l < p.classifier.size(); ++l) {
    fn(p.classifier[l].weight, g.classifier[l].weight, m.classifier[l].weight, v.classifier[l].weight, true);
    fn(p.classifier[l].bias, g.classifier[l].bias, m.classifier[l].bias, v.classifier[l].bias, true);
  }
}

}  // namespace detail

// Applies one optimizer update with precomputed gradients.
inline void apply_gradients(ModelState& s, const Parameters& grad, double learning_rate) {
  ++s.step;
  ModelConfig cfg = s.config;
  cfg.learning_rate = learning_rate;
  detail::for_each_block(s.params, grad, s.first_moment, s.second_moment,
                         [&](std::vector<double>& w, const std::vector<double>& g, std::vector<double>& m,
                             std::vector<double>& v, bool is_classifier) {
                           if (is_classifier && cfg.freeze_classifier) return;
                           if (cfg.optimizer == OptimizerKind::sgd) detail::sgd_update(w, g, learning_rate);
                           else detail::adamw_update(w, g, m, v, cfg, s.step);
                         });
}

struct StepResult {
  ModelState state;
  LossReport losses;  // measured before the update
};

inline StepResult train_step(const ModelState& s, std::span<const Utterance> batch, double learning_rate,
                             double lambda) {
  const auto g = compute_gradients(s, batch, GradientRoute::adversarial, lambda);
  StepResult r{s, g.losses};
  apply_gradients(r.state, g.grad, learning_rate);
  return r;
}

struct EpochStats {
  std::size_t epoch = 0;
  double train_ctc = 0.0;
  double train_classifier = 0.0;
  double valid_ctc = 0.0;
};

struct TrainResult {
  ModelState best;
  std::size_t best_epoch = 0;
  std::vector<EpochStats> curves;
};

// Mean L_O/L_C over `data`, evaluated in chunks.
inline LossReport evaluate_losses(const ModelState& s, std::span<const Utterance> data) {
  LossReport total;
  for (std::size_t i = 0; i < data.size(); i += 64) {
    const auto chunk = data.subspan(i, std::min<std::size_t>(64, data.size() - i));
    const auto r = forward(s, chunk).losses;
    const double w = static_cast<double>(chunk.size()) / static_cast<double>(data.size());
    total.ctc += w * r.ctc;
    total.classifier += w * r.classifier;
  }
  return total;
}

// Epochs of seeded-shuffled mini-batches; stops once validation L_O has not
// improved for `patience` consecutive epochs (patience 0 = a single epoch)
// or after max_epochs. Returns the best-validation state.
inline TrainResult train(ModelState initial, std::span<const Utterance> train_set, std::span<const Utterance> valid_set,
                         const std::function<void(const EpochStats&)>& on_epoch = {}) {
  const ModelConfig& cfg = initial.config;
  cfg.validate();
  if (train_set.empty()) throw Error("training set is empty");
  if (valid_set.empty()) throw Error("validation set is empty");

  std::mt19937_64 shuffle_rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result{initial, 0, {}};
  double best_valid = std::numeric_limits<double>::infinity();
  std::size_t since_improvement = 0;
  ModelState state = std::move(initial);
  std::vector<Utterance> batch;

  for (std::size_t epoch = 1; epoch <= std::max<std::size_t>(cfg.max_epochs, 1); ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    EpochStats stats{epoch, 0.0, 0.0, 0.0};
    std::size_t batches = 0;
    for (std::size_t i = 0; i < order.size(); i += cfg.batch_size) {
      batch.clear();
      for (std::size_t j = i; j < std::min(order.size(), i + cfg.batch_size); ++j) batch.push_back(train_set[order[j]]);
      auto step = train_step(state, batch, cfg.learning_rate, cfg.lambda);
      state = std::move(step.state);
      stats.train_ctc += step.losses.ctc;
      stats.train_classifier += step.losses.classifier;
      ++batches;
    }
    stats.train_ctc /= static_cast<double>(batches);
    stats.train_classifier /= static_cast<double>(batches);
    stats.valid_ctc = evaluate_losses(state, valid_set).ctc;
    if (!std::isfinite(stats.train_ctc) || !std::isfinite(stats.valid_ctc))
      throw NumericError("training diverged at epoch " + std::to_string(epoch));
    result.curves.push_back(stats);
    if (on_epoch) on_epoch(stats);

    if (stats.valid_ctc < best_valid) {
      best_valid = stats.valid_ctc;
      result.best = state;
      result.best_epoch = epoch;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    if (since_improvement >= cfg.patience) break;
  }
  return result;
}

// Argmax of the classifier head, or nullopt when the model has none.
inline std::optional<std::size_t> predict_language(const ModelState& s, const FrameMatrix& features) {
  if (s.params.classifier.empty()) return std::nullopt;
  const auto a = forward_utterance(s, features);
  const auto& logits = a.classifier.back();
  return static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

}  // namespace attrkws
