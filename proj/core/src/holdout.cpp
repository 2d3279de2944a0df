#include "riddleforge/holdout.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "riddleforge/error.hpp"
#include "riddleforge/rng.hpp"

namespace riddleforge {
namespace {

constexpr int kHoldoutVersion = 1;

std::size_t rounded_share(double fraction, std::size_t count) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(count)));
}

}  // namespace

void HoldoutFractions::validate() const {
  const auto ok = [](double f) { return std::isfinite(f) && f > 0.0 && f < 1.0; };
  if (!ok(edge_fraction)) throw InvalidArgument("edge holdout fraction must lie in (0, 1)");
  if (!ok(image_fraction)) throw InvalidArgument("image holdout fraction must lie in (0, 1)");
}

bool HoldoutSpec::is_held_out(EdgeId edge) const {
  return std::binary_search(held_out_edges.begin(), held_out_edges.end(), edge);
}

bool HoldoutSpec::is_test_image(std::string_view image_id) const {
  return std::binary_search(test_images.begin(), test_images.end(), image_id,
                            [](std::string_view a, std::string_view b) { return a < b; });
}

std::shared_ptr<const std::vector<bool>> HoldoutSpec::edge_mask(std::size_t edge_count) const {
  auto mask = std::make_shared<std::vector<bool>>(edge_count, false);
  for (const EdgeId id : held_out_edges) {
    if (id < edge_count) (*mask)[id] = true;
  }
  return mask;
}

HoldoutSpec partition_holdout(const KnowledgeGraph& graph, std::span<const std::string> image_ids,
                              const HoldoutFractions& fractions, std::uint64_t seed) {
  fractions.validate();
  HoldoutSpec spec;
  spec.seed = seed;
  spec.fractions = fractions;

  using Triple = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;
  std::map<Triple, std::vector<EdgeId>> groups;
  std::vector<Triple> triples;
  for (const Edge& e : graph.edges()) {
    const Triple key{to_underlying(e.head), to_underlying(e.relation), to_underlying(e.tail)};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) triples.push_back(key);
    it->second.push_back(e.id);
  }
  const std::size_t edge_take = rounded_share(fractions.edge_fraction, triples.size());
  if (edge_take == 0) throw InsufficientData("edge holdout fraction selects no edges");

  std::vector<std::string> images(image_ids.begin(), image_ids.end());
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  const std::size_t image_take = rounded_share(fractions.image_fraction, images.size());
  if (image_take == 0) throw InsufficientData("image holdout fraction selects no images");
  if (image_take >= images.size()) throw InsufficientData("no images left for training");

  Rng edge_rng(derive_seed(seed, "holdout:edges"));
  for (const Triple& t : edge_rng.sample(std::span<const Triple>(triples), edge_take)) {
    const auto& ids = groups.at(t);
    spec.held_out_edges.insert(spec.held_out_edges.end(), ids.begin(), ids.end());
  }
  std::sort(spec.held_out_edges.begin(), spec.held_out_edges.end());
  spec.held_out_triples = edge_take;

  Rng image_rng(derive_seed(seed, "holdout:images"));
  spec.test_images = image_rng.sample(std::span<const std::string>(images), image_take);
  std::sort(spec.test_images.begin(), spec.test_images.end());
  return spec;
}

std::string holdout_to_json(const HoldoutSpec& spec) {
  nlohmann::ordered_json j;
  j["version"] = kHoldoutVersion;
  j["seed"] = spec.seed;
  j["edge_fraction"] = spec.fractions.edge_fraction;
  j["image_fraction"] = spec.fractions.image_fraction;
  j["graph_digest"] = spec.graph_digest;
  j["held_out_triples"] = spec.held_out_triples;
  j["held_out_edges"] = spec.held_out_edges;
  j["test_images"] = spec.test_images;
  return j.dump() + "\n";
}

HoldoutSpec holdout_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("holdout file is not a JSON object");
  try {
    if (j.at("version").get<int>() != kHoldoutVersion) {
      throw FormatError("unsupported holdout file version");
    }
    HoldoutSpec spec;
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.fractions.edge_fraction = j.at("edge_fraction").get<double>();
    spec.fractions.image_fraction = j.at("image_fraction").get<double>();
    spec.graph_digest = j.at("graph_digest").get<std::string>();
    spec.held_out_triples = j.at("held_out_triples").get<std::size_t>();
    spec.held_out_edges = j.at("held_out_edges").get<std::vector<EdgeId>>();
    spec.test_images = j.at("test_images").get<std::vector<std::string>>();
    if (!std::is_sorted(spec.held_out_edges.begin(), spec.held_out_edges.end()) ||
        !std::is_sorted(spec.test_images.begin(), spec.test_images.end())) {
      throw FormatError("holdout lists must be sorted");
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("holdout file: ") + e.what());
  }
}

}  // namespace riddleforge
