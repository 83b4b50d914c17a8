#pragma once

// T x D row-major frame grid and its on-disk container.
//
// KWSP layout (little-endian):
//   "KWSP" | u16 version | u8 kind | u32 rows | u32 cols | rows*cols f32
// kind: 0 = probabilities, 1 = logits, 2 = raw features.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "attrkws/error.hpp"
#include "attrkws/unicode.hpp"

namespace attrkws {

enum class FrameKind : std::uint8_t { probability = 0, logit = 1, features = 2 };

inline std::string_view name_of(FrameKind k) {
  switch (k) {
    case FrameKind::probability: return "prob";
    case FrameKind::logit: return "logit";
    case FrameKind::features: return "features";
  }
  return "?";
}

class FrameMatrix {
 public:
  FrameMatrix() = default;
  FrameMatrix(std::size_t rows, std::size_t cols, FrameKind kind, double fill = 0.0)
      : rows_(rows), cols_(cols), kind_(kind), data_(rows * cols, fill) {}
  FrameMatrix(std::size_t rows, std::size_t cols, FrameKind kind, std::vector<double> data)
      : rows_(rows), cols_(cols), kind_(kind), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw DimensionError("frame matrix data size does not match shape");
  }
  FrameMatrix(FrameKind kind, const std::vector<std::vector<double>>& rows) : kind_(kind) {
    rows_ = rows.size();
    cols_ = rows.empty() ? 0 : rows.front().size();
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged frame rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  FrameKind kind() const { return kind_; }
  void set_kind(FrameKind k) { kind_ = k; }

  double& operator()(std::size_t t, std::size_t k) { return data_[t * cols_ + k]; }
  double operator()(std::size_t t, std::size_t k) const { return data_[t * cols_ + k]; }

  std::span<double> row(std::size_t t) { return {data_.data() + t * cols_, cols_}; }
  std::span<const double> row(std::size_t t) const { return {data_.data() + t * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  friend bool operator==(const FrameMatrix&, const FrameMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  FrameKind kind_ = FrameKind::probability;
  std::vector<double> data_;
};

// A posterior grid is a FrameMatrix of kind probability or logit.
using PosteriorMatrix = FrameMatrix;

inline constexpr char kKwspMagic[4] = {'K', 'W', 'S', 'P'};
inline constexpr std::uint16_t kKwspVersion = 1;
inline constexpr double kRowSumTolerance = 1e-5;

// Checks the container invariants: finite values, and for probability grids
// T >= 1, V >= 2, values in [0,1] and rows summing to 1.
inline void validate(const FrameMatrix& m) {
  if (m.rows() == 0) throw DimensionError("frame matrix has no frames");
  if (m.cols() == 0) throw DimensionError("frame matrix has no columns");
  for (double v : m.data())
    if (!std::isfinite(v)) throw NumericError("non-finite value in frame matrix");
  if (m.kind() == FrameKind::features) return;
  if (m.cols() < 2) throw DimensionError("posterior grid needs blank plus at least one unit (V >= 2)");
  if (m.kind() != FrameKind::probability) return;
  for (std::size_t t = 0; t < m.rows(); ++t) {
    double sum = 0.0;
    for (double p : m.row(t)) {
      if (p < 0.0 || p > 1.0) throw NumericError("probability outside [0,1] at frame " + std::to_string(t));
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw NumericError("probability row " + std::to_string(t) + " sums to " + std::to_string(sum));
  }
}

namespace detail {

template <typename U>
void put_le(std::string& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

template <typename U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(p[i]) << (8 * i));
  return v;
}

}  // namespace detail

inline std::string encode_kwsp(const FrameMatrix& m) {
  std::string out(kKwspMagic, 4);
  detail::put_le<std::uint16_t>(out, kKwspVersion);
  out.push_back(static_cast<char>(m.kind()));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  for (double v : m.data()) detail::put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

inline FrameMatrix decode_kwsp(std::string_view bytes) {
  constexpr std::size_t kHeader = 4 + 2 + 1 + 4 + 4;
  if (bytes.size() < kHeader) throw ParseError("KWSP: truncated header");
  if (std::memcmp(bytes.data(), kKwspMagic, 4) != 0) throw ParseError("KWSP: bad magic");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const auto version = detail::get_le<std::uint16_t>(p + 4);
  if (version != kKwspVersion) throw ParseError("KWSP: unsupported version " + std::to_string(version));
  const std::uint8_t kind = p[6];
  if (kind > 2) throw ParseError("KWSP: unknown mode byte " + std::to_string(kind));
  const std::uint64_t rows = detail::get_le<std::uint32_t>(p + 7);
  const std::uint64_t cols = detail::get_le<std::uint32_t>(p + 11);
  if (bytes.size() != kHeader + rows * cols * 4)
    throw ParseError("KWSP: payload size does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i)
    data[i] = std::bit_cast<float>(detail::get_le<std::uint32_t>(p + kHeader + 4 * i));
  FrameMatrix m(rows, cols, static_cast<FrameKind>(kind), std::move(data));
  validate(m);
  return m;
}

// Debug format: one comma-separated row per frame; an optional first line
// "#kind=prob|logit|features" (default prob).
inline FrameMatrix parse_frame_csv(std::string_view text) {
  FrameKind kind = FrameKind::probability;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  for (auto line : unicode::split_char(text, '\n')) {
    ++line_no;
    line = unicode::trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line == "#kind=prob") kind = FrameKind::probability;
      else if (line == "#kind=logit") kind = FrameKind::logit;
      else if (line == "#kind=features") kind = FrameKind::features;
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : unicode::split_char(line, ',')) {
      const std::string c = unicode::trim(cell);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        throw ParseError("not a number: '" + c + "'", line_no);
      }
      if (used != c.size()) throw ParseError("not a number: '" + c + "'", line_no);
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("ragged CSV row", line_no);
    rows.push_back(std::move(row));
  }
  FrameMatrix m(kind, rows);
  validate(m);
  return m;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// Dispatches on extension: ".csv" is the debug format, anything else KWSP.
inline FrameMatrix read_frame_matrix(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  try {
    return path.extension() == ".csv" ? parse_frame_csv(bytes) : decode_kwsp(bytes);
  } catch (const Error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_frame_matrix(const std::filesystem::path& path, const FrameMatrix& m) {
  write_file(path, encode_kwsp(m));
}

}  // namespace attrkws
