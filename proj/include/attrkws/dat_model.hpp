#pragma once

// Desk-scale acoustic model for domain adversarial training.
//
//   features --(context window)--> encoder E (tanh MLP) --> output layer O (per-frame CTC logits)
//                                                      \--> mean over time --> GRL --> classifier C (language logits)
//
// Backpropagation is written out by hand so every gradient can be checked
// against finite differences.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "attrkws/ctc.hpp"
#include "attrkws/error.hpp"
#include "attrkws/frame_matrix.hpp"
#include "attrkws/log_math.hpp"

namespace attrkws {

enum class OptimizerKind : std::uint8_t { sgd, adamw };

inline std::string_view name_of(OptimizerKind k) { return k == OptimizerKind::sgd ? "sgd" : "adamw"; }

struct ModelConfig {
  std::size_t feature_dim = 0;
  std::size_t context = 2;  // frames on each side
  std::size_t encoder_layers = 2;
  std::size_t encoder_width = 64;
  std::size_t vocab_size = 0;  // includes blank
  std::size_t classifier_layers = 3;  // linear layers in C; 0 removes the branch
  std::size_t classifier_width = 32;
  std::size_t num_languages = 2;

  double lambda = 1.0;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::adamw;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
  bool freeze_classifier = false;

  std::size_t batch_size = 16;
  std::size_t max_epochs = 50;
  std::size_t patience = 5;
  std::uint64_t seed = 1;

  std::size_t input_dim() const { return feature_dim * (2 * context + 1); }

  void validate() const {
    if (feature_dim == 0) throw Error("feature_dim must be positive");
    if (encoder_layers == 0 || encoder_width == 0) throw Error("encoder needs at least one layer of positive width");
    if (vocab_size < 2) throw Error("vocab_size must be at least 2 (blank + one unit)");
    if (classifier_layers > 0 && num_languages < 2) throw Error("language classifier needs at least 2 classes");
    if (classifier_layers > 1 && classifier_width == 0) throw Error("classifier_width must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error("lambda must be a finite non-negative number");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw Error("learning_rate must be positive");
    if (batch_size == 0) throw Error("batch_size must be positive");
  }
};

// y = W x + b, W stored row-major as out x in.
struct Dense {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;
  std::vector<double> bias;

  Dense() = default;
  Dense(std::size_t in_dim, std::size_t out_dim) : in(in_dim), out(out_dim), weight(in_dim * out_dim), bias(out_dim) {}

  void apply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t o = 0; o < out; ++o) {
      const double* w = weight.data() + o * in;
      double acc = bias[o];
      for (std::size_t i = 0; i < in; ++i) acc += w[i] * x[i];
      y[o] = acc;
    }
  }

  // Accumulates dW += dy x^T, db += dy into `grad`; adds W^T dy into dx when given.
  void backward(std::span<const double> x, std::span<const double> dy, Dense& grad, std::span<double> dx) const {
    for (std::size_t o = 0; o < out; ++o) {
      const double g = dy[o];
      if (g == 0.0) continue;
      grad.bias[o] += g;
      double* gw = grad.weight.data() + o * in;
      for (std::size_t i = 0; i < in; ++i) gw[i] += g * x[i];
      if (!dx.empty()) {
        const double* w = weight.data() + o * in;
        for (std::size_t i = 0; i < in; ++i) dx[i] += g * w[i];
      }
    }
  }

  friend bool operator==(const Dense&, const Dense&) = default;
};

// θ_E, θ_O, θ_C. Also used as the container for gradients and optimizer moments.
struct Parameters {
  std::vector<Dense> encoder;
  Dense output;
  std::vector<Dense> classifier;

  static Parameters zeros_like(const Parameters& p) {
    Parameters z = p;
    z.for_each([](std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); });
    return z;
  }

  void for_each(const std::function<void(std::vector<double>&)>& fn) {
    for (auto& d : encoder) fn(d.weight), fn(d.bias);
    fn(output.weight), fn(output.bias);
    for (auto& d : classifier) fn(d.weight), fn(d.bias);
  }

  void for_each_encoder(const std::function<void(std::vector<double>&)>& fn) {
    for (auto& d : encoder) fn(d.weight), fn(d.bias);
  }

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

struct ModelState {
  ModelConfig config;
  std::vector<std::string> languages;  // class index -> language code
  std::vector<std::string> vocab;      // output index -> unit token
  Parameters params;
  Parameters first_moment;
  Parameters second_moment;
  std::uint64_t step = 0;
};

// Xavier-uniform weights, zero biases. Layers are drawn in the order
// encoder, output, classifier so a model without classifier branch shares
// the encoder and output initialization of one with it.
inline ModelState init_model(const ModelConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  auto make = [&rng](std::size_t in, std::size_t out) {
    Dense d(in, out);
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : d.weight) w = dist(rng);
    return d;
  };
  ModelState s;
  s.config = config;
  std::size_t in = config.input_dim();
  for (std::size_t l = 0; l < config.encoder_layers; ++l) {
    s.params.encoder.push_back(make(in, config.encoder_width));
    in = config.encoder_width;
  }
  s.params.output = make(config.encoder_width, config.vocab_size);
  in = config.encoder_width;
  for (std::size_t l = 0; l < config.classifier_layers; ++l) {
    const bool last = l + 1 == config.classifier_layers;
    const std::size_t out = last ? config.num_languages : config.classifier_width;
    s.params.classifier.push_back(make(in, out));
    in = out;
  }
  s.first_moment = Parameters::zeros_like(s.params);
  s.second_moment = Parameters::zeros_like(s.params);
  return s;
}

struct Utterance {
  FrameMatrix features;  // T x feature_dim
  LabelSequence labels;  // unit indices, no blank
  std::size_t language = 0;
};

struct LossReport {
  double ctc = 0.0;         // L_O, mean CTC loss
  double classifier = 0.0;  // L_C, mean cross-entropy
};

// Identity forward; backward multiplies the incoming gradient by -lambda.
struct GradientReversal {
  double lambda = 1.0;

  std::span<const double> forward(std::span<const double> x) const { return x; }
  void backward(std::span<double> grad) const {
    for (double& g : grad) g *= -lambda;
  }
};

struct UtteranceActivations {
  std::vector<FrameMatrix> encoder;  // [0] = windowed input, [l+1] = tanh output of layer l
  FrameMatrix logits;                // T x V
  std::vector<double> pooled;        // mean of the last encoder layer over time
  std::vector<std::vector<double>> classifier;  // [0] = pooled, [l+1] = output of layer l (tanh except last)
};

inline FrameMatrix window_features(const FrameMatrix& features, std::size_t context) {
  const std::size_t T = features.rows();
  const std::size_t D = features.cols();
  const std::size_t W = 2 * context + 1;
  FrameMatrix x(T, D * W, FrameKind::features);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t w = 0; w < W; ++w) {
      const auto src = static_cast<std::ptrdiff_t>(t + w) - static_cast<std::ptrdiff_t>(context);
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(T)) continue;
      const auto r = features.row(static_cast<std::size_t>(src));
      std::copy(r.begin(), r.end(), x.row(t).begin() + static_cast<std::ptrdiff_t>(w * D));
    }
  }
  return x;
}

inline UtteranceActivations forward_utterance(const ModelState& s, const FrameMatrix& features) {
  const auto& cfg = s.config;
  if (features.cols() != cfg.feature_dim)
    throw DimensionError("feature dimension " + std::to_string(features.cols()) + " does not match model " +
                         std::to_string(cfg.feature_dim));
  if (features.rows() == 0) throw DimensionError("utterance has no frames");
  const std::size_t T = features.rows();
  UtteranceActivations a;
  a.encoder.push_back(window_features(features, cfg.context));
  for (const auto& layer : s.params.encoder) {
    FrameMatrix h(T, layer.out, FrameKind::features);
    for (std::size_t t = 0; t < T; ++t) {
      auto y = h.row(t);
      layer.apply(a.encoder.back().row(t), y);
      for (double& v : y) v = std::tanh(v);
    }
    a.encoder.push_back(std::move(h));
  }
  const FrameMatrix& top = a.encoder.back();
  a.logits = FrameMatrix(T, cfg.vocab_size, FrameKind::logit);
  for (std::size_t t = 0; t < T; ++t) s.params.output.apply(top.row(t), a.logits.row(t));

  a.pooled.assign(top.cols(), 0.0);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t k = 0; k < top.cols(); ++k) a.pooled[k] += top(t, k);
  for (double& v : a.pooled) v /= static_cast<double>(T);

  if (!s.params.classifier.empty()) {
    a.classifier.push_back(a.pooled);
    for (std::size_t l = 0; l < s.params.classifier.size(); ++l) {
      const auto& layer = s.params.classifier[l];
      std::vector<double> y(layer.out);
      layer.apply(a.classifier.back(), y);
      if (l + 1 < s.params.classifier.size())
        for (double& v : y) v = std::tanh(v);
      a.classifier.push_back(std::move(y));
    }
  }
  for (double v : a.logits.data())
    if (!std::isfinite(v)) throw NumericError("non-finite output activation");
  return a;
}

struct ForwardResult {
  std::vector<FrameMatrix> ctc_logits;
  std::vector<std::vector<double>> language_logits;
  LossReport losses;
};

inline double cross_entropy(std::span<const double> logits, std::size_t target) {
  std::vector<double> lp(logits.begin(), logits.end());
  log_softmax_inplace(lp);
  return -lp[target];
}

inline ForwardResult forward(const ModelState& s, std::span<const Utterance> batch) {
  if (batch.empty()) throw Error("empty batch");
  ForwardResult r;
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& u : batch) {
    auto a = forward_utterance(s, u.features);
    const LabelSequence& labels = u.labels;
    r.losses.ctc += scale * (-ctc_log_forward(a.logits, labels, kBlankIndex));
    if (!a.classifier.empty()) {
      if (u.language >= s.config.num_languages) throw DimensionError("language label out of range");
      r.losses.classifier += scale * cross_entropy(a.classifier.back(), u.language);
      r.language_logits.push_back(a.classifier.back());
    }
    r.ctc_logits.push_back(std::move(a.logits));
  }
  if (!std::isfinite(r.losses.ctc) || !std::isfinite(r.losses.classifier))
    throw NumericError("non-finite loss (infeasible labels or divergence)");
  return r;
}

enum class GradientRoute : std::uint8_t {
  adversarial,      // θ_O, θ_E from L_O; θ_C from L_C; L_C reaches θ_E through the GRL
  output_only,      // d L_O only
  classifier_only,  // d L_C only, GRL bypassed (plain gradient into θ_E)
};

struct GradientResult {
  Parameters grad;
  LossReport losses;
};

inline GradientResult compute_gradients(const ModelState& s, std::span<const Utterance> batch, GradientRoute route,
                                        double lambda) {
  if (batch.empty()) throw Error("empty batch");
  const auto& P = s.params;
  GradientResult r{Parameters::zeros_like(P), {}};
  const double scale = 1.0 / static_cast<double>(batch.size());
  const bool use_output = route != GradientRoute::classifier_only;
  const bool use_classifier = route != GradientRoute::output_only && !P.classifier.empty();
  const GradientReversal grl{lambda};

  for (const auto& u : batch) {
    const auto a = forward_utterance(s, u.features);
    const std::size_t T = u.features.rows();
    const std::size_t H = s.config.encoder_width;
    FrameMatrix d_top(T, H, FrameKind::features);

    const auto ctc = ctc_loss_and_grad(a.logits, u.labels, kBlankIndex);
    r.losses.ctc += scale * ctc.loss;
    if (use_output) {
      for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> dz(ctc.grad.row(t).begin(), ctc.grad.row(t).end());
        for (double& g : dz) g *= scale;
        P.output.backward(a.encoder.back().row(t), dz, r.grad.output, d_top.row(t));
      }
    }

    if (!P.classifier.empty()) {
      if (u.language >= s.config.num_languages) throw DimensionError("language label out of range");
      r.losses.classifier += scale * cross_entropy(a.classifier.back(), u.language);
    }
    if (use_classifier) {
      std::vector<double> dy(a.classifier.back().begin(), a.classifier.back().end());
      softmax_inplace(dy);
      dy[u.language] -= 1.0;
      for (double& g : dy) g *= scale;
      for (std::size_t l = P.classifier.size(); l-- > 0;) {
        if (l + 1 < P.classifier.size()) {
          const auto& y = a.classifier[l + 1];
          for (std::size_t i = 0; i < dy.size(); ++i) dy[i] *= 1.0 - y[i] * y[i];
        }
        std::vector<double> dx(P.classifier[l].in, 0.0);
        P.classifier[l].backward(a.classifier[l], dy, r.grad.classifier[l], dx);
        dy = std::move(dx);
      }
      if (route == GradientRoute::adversarial) grl.backward(dy);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t k = 0; k < H; ++k) d_top(t, k) += dy[k] / static_cast<double>(T);
    }

    FrameMatrix delta = std::move(d_top);
    for (std::size_t l = P.encoder.size(); l-- > 0;) {
      const auto& y = a.encoder[l + 1];
      FrameMatrix d_in(T, P.encoder[l].in, FrameKind::features);
      for (std::size_t t = 0; t < T; ++t) {
        auto d = delta.row(t);
        for (std::size_t k = 0; k < d.size(); ++k) d[k] *= 1.0 - y(t, k) * y(t, k);
        P.encoder[l].backward(a.encoder[l].row(t), d, r.grad.encoder[l], l > 0 ? d_in.row(t) : std::span<double>{});
      }
      delta = std::move(d_in);
    }
  }

  bool finite = true;
  r.grad.for_each([&finite](std::vector<double>& v) {
    for (double g : v) finite = finite && std::isfinite(g);
  });
  if (!finite) throw NumericError("non-finite gradient");
  return r;
}

// Softmaxed per-frame posteriors, T x V.
inline PosteriorMatrix posteriors(const ModelState& s, const FrameMatrix& features) {
  FrameMatrix p = forward_utterance(s, features).logits;
  for (std::size_t t = 0; t < p.rows(); ++t) softmax_inplace(p.row(t));
  p.set_kind(FrameKind::probability);
  return p;
}

// Time-mean of the encoder output: what the language classifier sees.
inline std::vector<double> pooled_embedding(const ModelState& s, const FrameMatrix& features) {
  return forward_utterance(s, features).pooled;
}

}  // namespace attrkws
