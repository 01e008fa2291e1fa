#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace globalwalk {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Bijection between external string identifiers and dense indices.
class NodeNames {
 public:
  NodeNames() = default;
  explicit NodeNames(std::vector<std::string> names);

  /// Returns the index for `name`, registering it if unseen.
  NodeId intern(std::string_view name);
  std::optional<NodeId> find(std::string_view name) const;
  const std::string& name(NodeId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& all() const { return names_; }

  bool operator==(const NodeNames& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Immutable unweighted graph in compressed sparse row form.
///
/// Adjacency lists are sorted ascending, duplicate-free and contain no
/// self-loops. Undirected graphs store every edge in both lists.
class Graph {
 public:
  Graph() = default;

  /// Builds from raw edges; self-loops are dropped and duplicates collapsed.
  /// Every endpoint must be < names.size().
  static Graph from_edges(NodeNames names, std::span<const Edge> edges, bool directed);

  std::size_t node_count() const { return names_.size(); }
  bool directed() const { return directed_; }

  /// Out-neighbors of u. Throws ContractViolation when u is out of range.
  std::span<const NodeId> neighbors(NodeId u) const;
  std::size_t degree(NodeId u) const { return neighbors(u).size(); }
  bool has_edge(NodeId u, NodeId v) const;

  /// Total stored adjacency entries (2|E| for undirected graphs).
  std::size_t arc_count() const { return targets_.size(); }
  /// Distinct edges: arcs for directed graphs, unordered pairs otherwise.
  std::size_t edge_count() const { return directed_ ? targets_.size() : targets_.size() / 2; }

  /// Edge list with each edge once (u < v for undirected graphs).
  std::vector<Edge> edges() const;

  const NodeNames& names() const { return names_; }

  bool operator==(const Graph& other) const = default;

 private:
  NodeNames names_;
  bool directed_ = false;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
};

/// Reads a whitespace-separated edge list. Lines starting with '#' and
/// blank lines are skipped; nodes are indexed in order of first appearance.
Graph load_edge_list(const std::filesystem::path& path, bool directed);
Graph parse_edge_list(std::string_view text, bool directed);

/// Writes a file that load_edge_list turns back into an identical graph.
/// Each node is first registered by a self-loop line (dropped on load) so
/// that index order and isolated nodes survive the round trip.
void write_edge_list(const Graph& g, const std::filesystem::path& path);
std::string format_edge_list(const Graph& g);

/// Ground-truth community labels with dense community ids.
struct LabelMap {
  static constexpr int kUnlabeled = -1;

  std::vector<int> labels;                   ///< per node; kUnlabeled if absent
  std::vector<std::string> community_names;  ///< id -> original label text

  int k() const { return static_cast<int>(community_names.size()); }
  bool is_labeled(NodeId u) const { return labels.at(u) != kUnlabeled; }
  std::size_t labeled_count() const;
};

LabelMap load_labels(const std::filesystem::path& path, const NodeNames& names);
LabelMap parse_labels(std::string_view text, const NodeNames& names);

}  // namespace globalwalk
