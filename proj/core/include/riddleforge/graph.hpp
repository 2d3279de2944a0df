#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "riddleforge/text.hpp"

namespace riddleforge {

// Dense handles into a KnowledgeGraph. They are only meaningful together
// with the graph that issued them.
enum class NodeIndex : std::uint32_t {};
enum class RelationIndex : std::uint32_t {};

// Stable 0-based ordinal of an edge in ingest order.
using EdgeId = std::uint32_t;

constexpr std::uint32_t to_underlying(NodeIndex n) { return static_cast<std::uint32_t>(n); }
constexpr std::uint32_t to_underlying(RelationIndex r) {
  return static_cast<std::uint32_t>(r);
}

enum class Direction { outgoing, incoming, both };

// One weighted assertion (head, relation, weight, tail).
struct Edge {
  double weight = 0.0;
  EdgeId id = 0;
  NodeIndex head{};
  RelationIndex relation{};
  NodeIndex tail{};

  friend bool operator==(const Edge&, const Edge&) = default;
};

namespace detail {
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};
}  // namespace detail

/// Immutable directed weighted multigraph with outgoing and incoming
/// adjacency in CSR layout. Index lists are sorted by edge id. Built with
/// GraphBuilder; safe for concurrent readers.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  const std::string& name_space() const { return name_space_; }

  std::size_t node_count() const { return node_uris_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t relation_count() const { return relation_names_.size(); }

  std::optional<NodeIndex> find_node(std::string_view uri) const;
  std::optional<RelationIndex> find_relation(std::string_view name) const;

  const std::string& node_uri(NodeIndex node) const { return node_uris_[to_underlying(node)]; }
  // Relation names are the bare ConceptNet names, e.g. "UsedFor".
  const std::string& relation_name(RelationIndex relation) const {
    return relation_names_[to_underlying(relation)];
  }

  const Edge& edge(EdgeId id) const { return edges_[id]; }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const EdgeId> out_edges(NodeIndex node) const;
  std::span<const EdgeId> in_edges(NodeIndex node) const;

  // Number of incident edges; a self-loop counts twice.
  std::size_t degree(NodeIndex node) const {
    return out_edges(node).size() + in_edges(node).size();
  }

  /// Edges where `node` is head, tail, or either, ordered by edge id. A
  /// self-loop appears once under Direction::both.
  std::vector<EdgeId> edges_touching(NodeIndex node, Direction direction) const;
  // Absent nodes yield an empty sequence.
  std::vector<EdgeId> edges_touching(std::string_view uri, Direction direction) const;

  // Edge-for-edge equality, including ids, URIs and relation names.
  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b);

 private:
  friend class GraphBuilder;

  void build_indexes();

  std::string name_space_{kDefaultNamespace};
  std::vector<std::string> node_uris_;
  std::unordered_map<std::string, NodeIndex, detail::StringHash, std::equal_to<>> node_lookup_;
  std::vector<std::string> relation_names_;
  std::unordered_map<std::string, RelationIndex, detail::StringHash, std::equal_to<>>
      relation_lookup_;
  std::vector<Edge> edges_;

  std::vector<std::uint64_t> out_offsets_;
  std::vector<EdgeId> out_ids_;
  std::vector<std::uint64_t> in_offsets_;
  std::vector<EdgeId> in_ids_;
};

// Accumulates nodes and edges, then freezes them into a KnowledgeGraph.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::string name_space = std::string(kDefaultNamespace));

  // `uri` must already be canonical; no normalization happens here.
  NodeIndex intern_node(std::string_view uri);
  RelationIndex intern_relation(std::string_view name);

  EdgeId add_edge(NodeIndex head, RelationIndex relation, double weight, NodeIndex tail);
  EdgeId add_edge(std::string_view head_uri, std::string_view relation, double weight,
                  std::string_view tail_uri);

  std::size_t edge_count() const { return graph_.edges_.size(); }

  /// Collapses parallel edges with identical (head, relation, tail) into one
  /// edge carrying the maximum weight. Surviving edges keep first-occurrence
  /// order and are renumbered densely. Returns the number of edges removed.
  std::size_t deduplicate_keep_max_weight();

  KnowledgeGraph build() &&;

 private:
  KnowledgeGraph graph_;
};

}  // namespace riddleforge
