#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "riddleforge/graph.hpp"

namespace riddleforge {

// Binary graph snapshot, little-endian:
//
//   "RFKG1"                       magic + format version
//   u32   flags                   reserved, 0
//   str   namespace               (u32 length + bytes)
//   u64   node count, then str per node, in NodeIndex order
//   u32   relation count, then str per relation
//   u64   edge count, then per edge: u32 head, u32 relation, u32 tail,
//         f64 weight (IEEE-754 bits)
//   u64   FNV-1a of every preceding byte
//
// Indexes are rebuilt on load. Round trips are exact, including weights.
inline constexpr std::string_view kSnapshotMagic = "RFKG1";

std::string serialize_snapshot(const KnowledgeGraph& graph);
// Throws FormatError on bad magic, truncation, or checksum mismatch.
KnowledgeGraph deserialize_snapshot(std::string_view bytes);

void save_snapshot(const KnowledgeGraph& graph, const std::filesystem::path& path);
KnowledgeGraph load_snapshot(const std::filesystem::path& path);

// SHA-256 of the canonical snapshot bytes; identifies graph content
// independently of how the file was compressed.
std::string graph_digest(const KnowledgeGraph& graph);

}  // namespace riddleforge
