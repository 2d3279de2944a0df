#include "riddleforge/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>

#include "riddleforge/error.hpp"
#include "riddleforge/io.hpp"

namespace riddleforge {
namespace {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void raw(std::string_view s) { out_.append(s); }
  std::string& bytes() { return out_; }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view str() {
    const std::uint32_t len = u32();
    return take(len);
  }
  std::string_view take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw FormatError("snapshot truncated");
    const auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::uint64_t get(int width) {
    const auto chunk = take(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(chunk[i])) << (8 * i);
    }
    return v;
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_snapshot(const KnowledgeGraph& graph) {
  Writer w;
  w.raw(kSnapshotMagic);
  w.u32(0);
  w.str(graph.name_space());
  w.u64(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    w.str(graph.node_uri(static_cast<NodeIndex>(i)));
  }
  w.u32(static_cast<std::uint32_t>(graph.relation_count()));
  for (std::size_t i = 0; i < graph.relation_count(); ++i) {
    w.str(graph.relation_name(static_cast<RelationIndex>(i)));
  }
  w.u64(graph.edge_count());
  for (const Edge& e : graph.edges()) {
    w.u32(to_underlying(e.head));
    w.u32(to_underlying(e.relation));
    w.u32(to_underlying(e.tail));
    w.f64(e.weight);
  }
  w.u64(fnv1a(w.bytes()));
  return std::move(w.bytes());
}

KnowledgeGraph deserialize_snapshot(std::string_view bytes) {
  if (!bytes.starts_with(kSnapshotMagic)) {
    throw FormatError("not a graph snapshot (bad magic)");
  }
  if (bytes.size() < kSnapshotMagic.size() + 8) throw FormatError("snapshot truncated");
  const auto body = bytes.substr(0, bytes.size() - 8);
  Reader trailer(bytes.substr(bytes.size() - 8));
  if (trailer.u64() != fnv1a(body)) throw FormatError("snapshot checksum mismatch");

  Reader r(body);
  r.take(kSnapshotMagic.size());
  if (r.u32() != 0) throw FormatError("unsupported snapshot flags");
  GraphBuilder builder{std::string(r.str())};

  const std::uint64_t nodes = r.u64();
  for (std::uint64_t i = 0; i < nodes; ++i) {
    if (to_underlying(builder.intern_node(r.str())) != i) {
      throw FormatError("duplicate node URI in snapshot");
    }
  }
  const std::uint32_t relations = r.u32();
  for (std::uint32_t i = 0; i < relations; ++i) {
    if (to_underlying(builder.intern_relation(r.str())) != i) {
      throw FormatError("duplicate relation in snapshot");
    }
  }
  const std::uint64_t edges = r.u64();
  if (edges > r.remaining() / 20) throw FormatError("snapshot truncated");
  for (std::uint64_t i = 0; i < edges; ++i) {
    const std::uint32_t head = r.u32();
    const std::uint32_t relation = r.u32();
    const std::uint32_t tail = r.u32();
    const double weight = r.f64();
    if (head >= nodes || tail >= nodes || relation >= relations) {
      throw FormatError("edge references unknown node or relation");
    }
    try {
      builder.add_edge(static_cast<NodeIndex>(head), static_cast<RelationIndex>(relation),
                       weight, static_cast<NodeIndex>(tail));
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("invalid edge in snapshot: ") + e.what());
    }
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes in snapshot");
  return std::move(builder).build();
}

void save_snapshot(const KnowledgeGraph& graph, const std::filesystem::path& path) {
  write_file(path, serialize_snapshot(graph));
}

KnowledgeGraph load_snapshot(const std::filesystem::path& path) {
  return deserialize_snapshot(read_file(path));
}

std::string graph_digest(const KnowledgeGraph& graph) {
  return sha256_hex(serialize_snapshot(graph));
}

}  // namespace riddleforge
