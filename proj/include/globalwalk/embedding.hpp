#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "globalwalk/graph.hpp"

namespace globalwalk {

/// Dense row-major matrix of doubles; one row per node.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool all_finite() const;
  /// Order-sensitive hash of the exact bit patterns of all entries.
  std::uint64_t checksum() const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Input embeddings (the published Φ) plus the trainer's context matrix.
struct EmbeddingMatrix {
  Matrix input;
  Matrix context;

  std::size_t rows() const { return input.rows(); }
  std::size_t dim() const { return input.cols(); }
};

/// Input rows uniform on [-0.5/d, 0.5/d), context rows zero.
EmbeddingMatrix init_embeddings(std::size_t node_count, std::size_t dim, std::uint64_t seed);

/// ‖Φ(u)−Φ(v)‖₂ / max_{w∈N(u)} ‖Φ(u)−Φ(w)‖₂, or 0 when that max is below
/// kZeroDenominator. v must be an out-neighbor of u.
double normalized_distance(const Graph& g, const Matrix& phi, NodeId u, NodeId v);

/// ξ(u, ·) for every neighbor of u, in adjacency order.
std::vector<double> normalized_distances(const Graph& g, const Matrix& phi, NodeId u);

inline constexpr double kZeroDenominator = 1e-12;

double euclidean_distance(std::span<const double> a, std::span<const double> b);

struct NamedEmbeddings {
  std::vector<std::string> names;
  Matrix values;
};

/// Text format: "node_count d" header, then "name v1 ... vd" per node with
/// six fractional digits, single spaces and '\n' endings.
std::string format_embeddings(const Matrix& phi, const NodeNames& names);
void save_embeddings(const Matrix& phi, const NodeNames& names, const std::filesystem::path& path);
NamedEmbeddings parse_embeddings(std::string_view text);
NamedEmbeddings load_embeddings(const std::filesystem::path& path);

}  // namespace globalwalk
