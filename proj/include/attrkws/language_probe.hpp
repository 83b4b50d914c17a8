#pragma once

// Post-hoc language probe: multinomial logistic regression on frozen,
// standardized embeddings. Measures how much language information an
// encoder's pooled output still carries.

#include <algorithm>
#include <cmath>
#include <vector>

#include "attrkws/error.hpp"
#include "attrkws/log_math.hpp"

namespace attrkws {

struct ProbeOptions {
  std::size_t iterations = 500;
  double learning_rate = 0.5;
  double l2 = 1e-4;
};

class LanguageProbe {
 public:
  void fit(const std::vector<std::vector<double>>& x, const std::vector<std::size_t>& y, std::size_t classes,
           const ProbeOptions& opt = {}) {
    if (x.empty() || x.size() != y.size()) throw DimensionError("probe: empty or mismatched training data");
    classes_ = classes;
    dim_ = x.front().size();
    mean_.assign(dim_, 0.0);
    scale_.assign(dim_, 0.0);
    const double n = static_cast<double>(x.size());
    for (const auto& row : x)
      for (std::size_t d = 0; d < dim_; ++d) mean_[d] += row[d] / n;
    for (const auto& row : x)
      for (std::size_t d = 0; d < dim_; ++d) scale_[d] += (row[d] - mean_[d]) * (row[d] - mean_[d]) / n;
    for (double& s : scale_) s = s > 1e-12 ? 1.0 / std::sqrt(s) : 0.0;

    std::vector<std::vector<double>> z;
    z.reserve(x.size());
    for (const auto& row : x) z.push_back(standardize(row));

    weight_.assign(classes_ * (dim_ + 1), 0.0);
    std::vector<double> grad(weight_.size()), p(classes_);
    for (std::size_t it = 0; it < opt.iterations; ++it) {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = 0; i < z.size(); ++i) {
        logits(z[i], p);
        softmax_inplace(p);
        p[y[i]] -= 1.0;
        for (std::size_t c = 0; c < classes_; ++c) {
          double* g = grad.data() + c * (dim_ + 1);
          for (std::size_t d = 0; d < dim_; ++d) g[d] += p[c] * z[i][d] / n;
          g[dim_] += p[c] / n;
        }
      }
      for (std::size_t k = 0; k < weight_.size(); ++k)
        weight_[k] -= opt.learning_rate * (grad[k] + opt.l2 * weight_[k]);
    }
  }

  std::size_t predict(const std::vector<double>& x) const {
    std::vector<double> p(classes_);
    logits(standardize(x), p);
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  }

  // Percentage of rows predicted correctly.
  double accuracy(const std::vector<std::vector<double>>& x, const std::vector<std::size_t>& y) const {
    if (x.empty() || x.size() != y.size()) throw DimensionError("probe: empty or mismatched evaluation data");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < x.size(); ++i) correct += predict(x[i]) == y[i];
    return 100.0 * static_cast<double>(correct) / static_cast<double>(x.size());
  }

 private:
  std::vector<double> standardize(const std::vector<double>& x) const {
    if (x.size() != dim_) throw DimensionError("probe: embedding dimension mismatch");
    std::vector<double> z(dim_);
    for (std::size_t d = 0; d < dim_; ++d) z[d] = (x[d] - mean_[d]) * scale_[d];
    return z;
  }

  void logits(const std::vector<double>& z, std::vector<double>& out) const {
    for (std::size_t c = 0; c < classes_; ++c) {
      const double* w = weight_.data() + c * (dim_ + 1);
      double acc = w[dim_];
      for (std::size_t d = 0; d < dim_; ++d) acc += w[d] * z[d];
      out[c] = acc;
    }
  }

  std::size_t classes_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> mean_, scale_, weight_;
};

}  // namespace attrkws
