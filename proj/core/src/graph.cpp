#include "riddleforge/graph.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "riddleforge/error.hpp"

namespace riddleforge {

std::optional<NodeIndex> KnowledgeGraph::find_node(std::string_view uri) const {
  const auto it = node_lookup_.find(uri);
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationIndex> KnowledgeGraph::find_relation(std::string_view name) const {
  const auto it = relation_lookup_.find(name);
  if (it == relation_lookup_.end()) return std::nullopt;
  return it->second;
}

std::span<const EdgeId> KnowledgeGraph::out_edges(NodeIndex node) const {
  const auto n = to_underlying(node);
  if (n + 1 >= out_offsets_.size()) return {};
  return std::span<const EdgeId>(out_ids_).subspan(out_offsets_[n],
                                                   out_offsets_[n + 1] - out_offsets_[n]);
}

std::span<const EdgeId> KnowledgeGraph::in_edges(NodeIndex node) const {
  const auto n = to_underlying(node);
  if (n + 1 >= in_offsets_.size()) return {};
  return std::span<const EdgeId>(in_ids_).subspan(in_offsets_[n],
                                                  in_offsets_[n + 1] - in_offsets_[n]);
}

std::vector<EdgeId> KnowledgeGraph::edges_touching(NodeIndex node, Direction direction) const {
  const auto out = out_edges(node);
  const auto in = in_edges(node);
  switch (direction) {
    case Direction::outgoing:
      return {out.begin(), out.end()};
    case Direction::incoming:
      return {in.begin(), in.end()};
    case Direction::both:
      break;
  }
  std::vector<EdgeId> merged;
  merged.reserve(out.size() + in.size());
  // Both lists are sorted; a self-loop sits in both and is kept once.
  std::set_union(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(merged));
  return merged;
}

std::vector<EdgeId> KnowledgeGraph::edges_touching(std::string_view uri,
                                                   Direction direction) const {
  const auto node = find_node(uri);
  if (!node) return {};
  return edges_touching(*node, direction);
}

bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  if (a.name_space_ != b.name_space_ || a.edges_.size() != b.edges_.size() ||
      a.node_uris_ != b.node_uris_ || a.relation_names_ != b.relation_names_) {
    return false;
  }
  return a.edges_ == b.edges_;
}

void KnowledgeGraph::build_indexes() {
  const std::size_t n = node_uris_.size();
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++out_offsets_[to_underlying(e.head) + 1];
    ++in_offsets_[to_underlying(e.tail) + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    out_offsets_[i + 1] += out_offsets_[i];
    in_offsets_[i + 1] += in_offsets_[i];
  }
  out_ids_.assign(edges_.size(), 0);
  in_ids_.assign(edges_.size(), 0);
  std::vector<std::uint64_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::uint64_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  // Edges are visited in id order, so every bucket comes out sorted.
  for (const Edge& e : edges_) {
    out_ids_[out_fill[to_underlying(e.head)]++] = e.id;
    in_ids_[in_fill[to_underlying(e.tail)]++] = e.id;
  }
}

GraphBuilder::GraphBuilder(std::string name_space) {
  graph_.name_space_ = std::move(name_space);
}

NodeIndex GraphBuilder::intern_node(std::string_view uri) {
  if (uri.empty()) throw InvalidArgument("node URI must not be empty");
  const auto it = graph_.node_lookup_.find(uri);
  if (it != graph_.node_lookup_.end()) return it->second;
  const auto index = static_cast<NodeIndex>(graph_.node_uris_.size());
  graph_.node_uris_.emplace_back(uri);
  graph_.node_lookup_.emplace(std::string(uri), index);
  return index;
}

RelationIndex GraphBuilder::intern_relation(std::string_view name) {
  const auto it = graph_.relation_lookup_.find(name);
  if (it != graph_.relation_lookup_.end()) return it->second;
  const auto index = static_cast<RelationIndex>(graph_.relation_names_.size());
  graph_.relation_names_.emplace_back(name);
  graph_.relation_lookup_.emplace(std::string(name), index);
  return index;
}

EdgeId GraphBuilder::add_edge(NodeIndex head, RelationIndex relation, double weight,
                              NodeIndex tail) {
  if (!std::isfinite(weight) || weight < 0.0) {
    throw InvalidArgument("edge weight must be finite and non-negative");
  }
  const auto id = static_cast<EdgeId>(graph_.edges_.size());
  graph_.edges_.push_back(Edge{weight, id, head, relation, tail});
  return id;
}

EdgeId GraphBuilder::add_edge(std::string_view head_uri, std::string_view relation,
                              double weight, std::string_view tail_uri) {
  const NodeIndex head = intern_node(head_uri);
  const RelationIndex rel = intern_relation(relation);
  const NodeIndex tail = intern_node(tail_uri);
  return add_edge(head, rel, weight, tail);
}

std::size_t GraphBuilder::deduplicate_keep_max_weight() {
  using Key = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = std::get<0>(k);
      h = h * 0x9E3779B97F4A7C15ULL ^ std::get<1>(k);
      h = h * 0x9E3779B97F4A7C15ULL ^ std::get<2>(k);
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };
  std::unordered_map<Key, std::size_t, KeyHash> first_seen;
  std::vector<Edge> kept;
  kept.reserve(graph_.edges_.size());
  for (const Edge& e : graph_.edges_) {
    const Key key{to_underlying(e.head), to_underlying(e.relation), to_underlying(e.tail)};
    const auto [it, inserted] = first_seen.try_emplace(key, kept.size());
    if (inserted) {
      kept.push_back(e);
      kept.back().id = static_cast<EdgeId>(kept.size() - 1);
    } else {
      kept[it->second].weight = std::max(kept[it->second].weight, e.weight);
    }
  }
  const std::size_t removed = graph_.edges_.size() - kept.size();
  graph_.edges_ = std::move(kept);
  return removed;
}

KnowledgeGraph GraphBuilder::build() && {
  graph_.build_indexes();
  return std::move(graph_);
}

}  // namespace riddleforge
