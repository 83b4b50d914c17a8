#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "attrkws/frame_matrix.hpp"

namespace attrkws::fixtures {

// Random strictly positive probability grid.
inline FrameMatrix random_posteriors(std::mt19937_64& rng, std::size_t T, std::size_t V) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  FrameMatrix m(T, V, FrameKind::probability);
  for (std::size_t t = 0; t < T; ++t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < V; ++k) sum += m(t, k) = u(rng);
    for (std::size_t k = 0; k < V; ++k) m(t, k) /= sum;
  }
  return m;
}

inline FrameMatrix random_logits(std::mt19937_64& rng, std::size_t T, std::size_t V, double scale = 2.0) {
  std::normal_distribution<double> n(0.0, scale);
  FrameMatrix m(T, V, FrameKind::logit);
  for (double& x : m.data()) x = n(rng);
  return m;
}

// Fresh scratch directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("attrkws-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path source_path(const std::string& rel) {
  return std::filesystem::path(ATTRKWS_SOURCE_DIR) / rel;
}

}  // namespace attrkws::fixtures
