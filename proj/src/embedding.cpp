#include "globalwalk/embedding.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "globalwalk/errors.hpp"
#include "globalwalk/rng.hpp"

namespace globalwalk {

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

std::uint64_t Matrix::checksum() const {
  std::uint64_t h = mix64(rows_ ^ (cols_ << 32));
  for (double x : data_) h = mix64(h ^ std::bit_cast<std::uint64_t>(x));
  return h;
}

EmbeddingMatrix init_embeddings(std::size_t node_count, std::size_t dim, std::uint64_t seed) {
  require(node_count >= 1, "node_count must be >= 1");
  require(dim >= 1, "dim must be >= 1");
  EmbeddingMatrix m{Matrix(node_count, dim), Matrix(node_count, dim, 0.0)};
  Rng rng = make_rng(derive_seed(seed, Stream::Init));
  const double half_width = 0.5 / static_cast<double>(dim);
  for (double& x : m.input.data()) x = (uniform01(rng) - 0.5) * 2.0 * half_width;
  return m;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<double> normalized_distances(const Graph& g, const Matrix& phi, NodeId u) {
  const auto nb = g.neighbors(u);
  require(!nb.empty(), "normalized distance needs a non-empty neighborhood");
  require(phi.rows() == g.node_count(), "embedding rows do not match graph");
  std::vector<double> dist(nb.size());
  double max_dist = 0.0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    dist[i] = euclidean_distance(phi.row(u), phi.row(nb[i]));
    max_dist = std::max(max_dist, dist[i]);
  }
  if (max_dist < kZeroDenominator) {
    std::fill(dist.begin(), dist.end(), 0.0);
    return dist;
  }
  for (double& d : dist) d = std::min(d / max_dist, 1.0);
  return dist;
}

double normalized_distance(const Graph& g, const Matrix& phi, NodeId u, NodeId v) {
  const auto nb = g.neighbors(u);
  const auto it = std::lower_bound(nb.begin(), nb.end(), v);
  require(it != nb.end() && *it == v, "v is not a neighbor of u");
  return normalized_distances(g, phi, u)[static_cast<std::size_t>(it - nb.begin())];
}

std::string format_embeddings(const Matrix& phi, const NodeNames& names) {
  require(phi.rows() == names.size(), "embedding rows do not match name count");
  std::string out = std::to_string(phi.rows()) + ' ' + std::to_string(phi.cols()) + '\n';
  char buf[64];
  for (std::size_t r = 0; r < phi.rows(); ++r) {
    out += names.name(static_cast<NodeId>(r));
    for (double x : phi.row(r)) {
      std::snprintf(buf, sizeof buf, " %.6f", x);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void save_embeddings(const Matrix& phi, const NodeNames& names, const std::filesystem::path& path) {
  const std::string text = format_embeddings(phi, names);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\r' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\r' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, const std::string& where) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw FormatError(where + ": non-numeric value '" + std::string(token) + "'");
  return value;
}

}  // namespace

NamedEmbeddings parse_embeddings(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!split_spaces(line).empty()) lines.push_back(line);
    pos = end + 1;
  }
  if (lines.empty()) throw FormatError("missing header");
  const auto header = split_spaces(lines[0]);
  if (header.size() != 2) throw FormatError("header must be 'node_count d'");
  const auto rows = parse_number<std::size_t>(header[0], "header");
  const auto dim = parse_number<std::size_t>(header[1], "header");
  if (rows == 0) throw FormatError("empty graph");
  if (dim == 0) throw FormatError("embedding dimension must be >= 1");
  if (lines.size() - 1 != rows) {
    throw FormatError("header declares " + std::to_string(rows) + " rows but body has " +
                      std::to_string(lines.size() - 1));
  }
  NamedEmbeddings out{{}, Matrix(rows, dim)};
  out.names.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto tokens = split_spaces(lines[r + 1]);
    const std::string where = "row " + std::to_string(r + 1);
    if (tokens.size() != dim + 1) {
      throw FormatError(where + ": expected " + std::to_string(dim) + " values, got " +
                        std::to_string(tokens.size() - 1));
    }
    out.names.emplace_back(tokens[0]);
    for (std::size_t c = 0; c < dim; ++c) {
      const double x = parse_number<double>(tokens[c + 1], where);
      if (!std::isfinite(x)) throw FormatError(where + ": non-finite value");
      out.values(r, c) = x;
    }
  }
  return out;
}

NamedEmbeddings load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_embeddings(buf.str());
}

}  // namespace globalwalk
