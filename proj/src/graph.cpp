#include "globalwalk/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "globalwalk/errors.hpp"

namespace globalwalk {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Splits on whitespace; returns false for blank and comment lines.
bool tokenize(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size() && is_space(line[i])) ++i;
  if (i == line.size() || line[i] == '#') return false;
  while (i < line.size()) {
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    out.push_back(line.substr(i, j - i));
    while (j < line.size() && is_space(line[j])) ++j;
    i = j;
  }
  return true;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    fn(++line_no, text.substr(pos, end - pos));
    pos = end + 1;
  }
}

}  // namespace

NodeNames::NodeNames(std::vector<std::string> names) : names_(std::move(names)) {
  index_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], static_cast<NodeId>(i)).second)
      throw Error("duplicate node name '" + names_[i] + "'");
  }
}

NodeId NodeNames::intern(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<NodeId>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  return id;
}

std::optional<NodeId> NodeNames::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Graph Graph::from_edges(NodeNames names, std::span<const Edge> edges, bool directed) {
  const std::size_t n = names.size();
  std::vector<Edge> arcs;
  arcs.reserve(directed ? edges.size() : 2 * edges.size());
  for (const auto& [u, v] : edges) {
    require(u < n && v < n, "edge endpoint out of range");
    if (u == v) continue;
    arcs.emplace_back(u, v);
    if (!directed) arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Graph g;
  g.names_ = std::move(names);
  g.directed_ = directed;
  g.offsets_.assign(n + 1, 0);
  g.targets_.reserve(arcs.size());
  for (const auto& [u, v] : arcs) {
    ++g.offsets_[u + 1];
    g.targets_.push_back(v);
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  return g;
}

std::span<const NodeId> Graph::neighbors(NodeId u) const {
  require(u < node_count(), "node index " + std::to_string(u) + " out of range");
  return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (directed_ || u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::size_t LabelMap::labeled_count() const {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](int l) { return l != kUnlabeled; }));
}

Graph parse_edge_list(std::string_view text, bool directed) {
  NodeNames names;
  std::vector<Edge> edges;
  std::vector<std::string_view> tokens;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!tokenize(line, tokens)) return;
    if (tokens.size() != 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 2 tokens, got " +
                       std::to_string(tokens.size()));
    }
    const NodeId u = names.intern(tokens[0]);
    const NodeId v = names.intern(tokens[1]);
    edges.emplace_back(u, v);
  });
  if (names.size() == 0) throw ParseError("empty graph");
  return Graph::from_edges(std::move(names), edges, directed);
}

Graph load_edge_list(const std::filesystem::path& path, bool directed) {
  return parse_edge_list(read_file(path), directed);
}

std::string format_edge_list(const Graph& g) {
  std::string out = "# node registration (self-loops are dropped on load)\n";
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto& name = g.names().name(u);
    out += name + ' ' + name + '\n';
  }
  out += "# edges\n";
  for (const auto& [u, v] : g.edges()) {
    out += g.names().name(u) + ' ' + g.names().name(v) + '\n';
  }
  return out;
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_edge_list(g);
}

LabelMap parse_labels(std::string_view text, const NodeNames& names) {
  LabelMap map;
  map.labels.assign(names.size(), LabelMap::kUnlabeled);
  std::unordered_map<std::string, int> community_ids;
  std::vector<std::string_view> tokens;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!tokenize(line, tokens)) return;
    if (tokens.size() != 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 2 tokens, got " +
                       std::to_string(tokens.size()));
    }
    const auto node = names.find(tokens[0]);
    if (!node) {
      throw ParseError("line " + std::to_string(line_no) + ": unknown node id '" +
                       std::string(tokens[0]) + "'");
    }
    auto [it, inserted] =
        community_ids.emplace(std::string(tokens[1]), static_cast<int>(community_ids.size()));
    if (inserted) map.community_names.emplace_back(tokens[1]);
    int& slot = map.labels[*node];
    if (slot != LabelMap::kUnlabeled && slot != it->second) {
      throw ParseError("line " + std::to_string(line_no) + ": node '" + std::string(tokens[0]) +
                       "' labeled twice with different labels");
    }
    slot = it->second;
  });
  if (map.community_names.empty()) throw ParseError("label file contains no labels");
  return map;
}

LabelMap load_labels(const std::filesystem::path& path, const NodeNames& names) {
  return parse_labels(read_file(path), names);
}

}  // namespace globalwalk
