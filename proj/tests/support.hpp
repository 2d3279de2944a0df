#pragma once

#include <stdlib.h>

#include <filesystem>
#include <string>
#include <vector>

#include "riddleforge/entity_extract.hpp"
#include "riddleforge/graph.hpp"
#include "riddleforge/ingest.hpp"
#include "riddleforge/io.hpp"

namespace rftest {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(RIDDLEFORGE_FIXTURES) / name;
}

inline riddleforge::KnowledgeGraph load_fixture_graph(const std::string& name) {
  auto lines = riddleforge::open_lines(fixture(name));
  return riddleforge::ingest_assertions(*lines).graph;
}

inline riddleforge::NodeIndex node(const riddleforge::KnowledgeGraph& g, const std::string& term) {
  return *g.find_node("/c/en/" + term);
}

inline riddleforge::EntitySet entities(const riddleforge::KnowledgeGraph& g,
                                       const std::vector<std::string>& terms,
                                       std::string image_id = "img") {
  riddleforge::EntitySet set;
  set.image_id = std::move(image_id);
  for (const auto& t : terms) {
    set.raw_entities.push_back(t);
    set.matched_entities.push_back(node(g, t));
  }
  return set;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "rftest-XXXXXX").string();
  path_ = ::mkdtemp(tmpl.data());
}

}  // namespace rftest
