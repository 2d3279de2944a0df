#include "riddleforge/benchmark.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_set>

#include "parallel.hpp"
#include "riddleforge/error.hpp"
#include "riddleforge/text.hpp"

namespace riddleforge {
namespace {

constexpr std::array<std::pair<QueryDirection, KnowledgeSplit>, 4> kSplitOrder{{
    {QueryDirection::text_to_image, KnowledgeSplit::seen},
    {QueryDirection::text_to_image, KnowledgeSplit::unseen},
    {QueryDirection::image_to_text, KnowledgeSplit::seen},
    {QueryDirection::image_to_text, KnowledgeSplit::unseen},
}};

std::size_t split_slot(KnowledgeSplit split) { return static_cast<std::size_t>(split); }

void sort_unique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool sorted_contains(std::span<const std::uint32_t> v, std::uint32_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

// Up to `need` distinct members of [0, universe) accepted by `valid`,
// uniformly at random. Tries rejection sampling first and falls back to a
// full scan when valid members are sparse.
std::vector<std::uint32_t> sample_valid(std::uint32_t universe, std::size_t need,
                                        const std::function<bool(std::uint32_t)>& valid,
                                        Rng& rng) {
  std::vector<std::uint32_t> picked;
  if (need == 0 || universe == 0) return picked;
  std::unordered_set<std::uint32_t> tried;
  const std::size_t attempts = 8 * need + 32;
  for (std::size_t a = 0; a < attempts && picked.size() < need && tried.size() < universe; ++a) {
    const auto x = static_cast<std::uint32_t>(rng.uniform_below(universe));
    if (!tried.insert(x).second) continue;
    if (valid(x)) picked.push_back(x);
  }
  if (picked.size() < need) {
    std::vector<std::uint32_t> rest;
    for (std::uint32_t x = 0; x < universe; ++x) {
      if (!tried.contains(x) && valid(x)) rest.push_back(x);
    }
    const auto more =
        rng.sample(std::span<const std::uint32_t>(rest), need - picked.size());
    picked.insert(picked.end(), more.begin(), more.end());
  }
  return picked;
}

// Draws `need` members from tier pools in order, then from tier 3.
struct TierDraw {
  std::vector<std::uint32_t> picks;
  std::vector<int> tiers;
};

void take_from_pool(const std::vector<std::uint32_t>& pool, int tier, std::size_t need,
                    TierDraw& draw, Rng& rng) {
  const std::size_t missing = need - draw.picks.size();
  if (missing == 0) return;
  for (const auto x : rng.sample(std::span<const std::uint32_t>(pool), missing)) {
    draw.picks.push_back(x);
    draw.tiers.push_back(tier);
  }
}

CandidateSet finish_set(std::string query_id, std::string query, QueryDirection direction,
                        KnowledgeSplit split, std::vector<Candidate> candidates, Rng& rng) {
  rng.shuffle(candidates);
  CandidateSet set;
  set.query_id = std::move(query_id);
  set.query = std::move(query);
  set.direction = direction;
  set.split = split;
  set.candidates = std::move(candidates);
  return set;
}

}  // namespace

std::string_view direction_name(QueryDirection direction) {
  return direction == QueryDirection::text_to_image ? "text_to_image" : "image_to_text";
}

std::string_view knowledge_name(KnowledgeSplit split) {
  return split == KnowledgeSplit::seen ? "seen" : "unseen";
}

std::string split_name(QueryDirection direction, KnowledgeSplit split) {
  std::string name = direction == QueryDirection::text_to_image ? "text_image_" : "image_text_";
  name += knowledge_name(split);
  return name;
}

void BenchmarkConfig::validate() const {
  if (min_positives == 0 || min_positives > max_positives) {
    throw InvalidArgument("positive count range must satisfy 1 <= min <= max");
  }
  if (candidates <= max_positives) {
    throw InvalidArgument("candidate count must exceed the maximum positive count");
  }
  if (max_queries_per_split == 0) throw InvalidArgument("max queries per split must be positive");
}

std::string riddle_id(EdgeId edge, HiddenSide side) {
  return "e" + std::to_string(edge) + (side == HiddenSide::head ? "-h" : "-t");
}

std::vector<std::string> CandidateSet::positive_ids() const {
  std::vector<std::string> out;
  for (const Candidate& c : candidates) {
    if (c.tier == 0) out.push_back(c.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t CandidateSet::positive_count() const {
  return static_cast<std::size_t>(std::count_if(
      candidates.begin(), candidates.end(), [](const Candidate& c) { return c.tier == 0; }));
}

const BenchmarkSplit* Benchmark::find_split(std::string_view name) const {
  for (const BenchmarkSplit& s : splits) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<TestImage> collect_test_images(LineSource& manifest, const KnowledgeGraph& graph,
                                           const HoldoutSpec& spec,
                                           const ExtractionConfig& extraction) {
  std::map<std::string, std::vector<NodeIndex>, std::less<>> entities;
  std::string line;
  while (manifest.next_line(line)) {
    if (trim(line).empty()) continue;
    Caption caption;
    try {
      caption = parse_caption_line(line);
    } catch (const FormatError&) {
      continue;
    }
    if (!spec.is_test_image(caption.image_id)) continue;
    auto& bag = entities[caption.image_id];
    const EntitySet set = extract_entities(caption, graph, extraction);
    bag.insert(bag.end(), set.matched_entities.begin(), set.matched_entities.end());
  }
  std::vector<TestImage> out;
  out.reserve(entities.size());
  for (auto& [id, nodes] : entities) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    out.push_back({id, std::move(nodes)});
  }
  return out;
}

BenchmarkContext::BenchmarkContext(const KnowledgeGraph& graph, std::vector<TestImage> images,
                                   const HoldoutSpec& spec, const LinearizeConfig& linearize,
                                   const BenchmarkConfig& config)
    : graph_(&graph), config_(config), images_(std::move(images)) {
  config_.validate();
  std::sort(images_.begin(), images_.end(),
            [](const TestImage& a, const TestImage& b) { return a.image_id < b.image_id; });
  for (std::uint32_t i = 0; i < images_.size(); ++i) {
    auto& nodes = images_[i].entities;
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (const NodeIndex n : nodes) postings_[to_underlying(n)].push_back(i);
  }

  hard_relation_.assign(graph.relation_count(), false);
  for (const std::string& name : config_.hard_relations) {
    if (const auto r = graph.find_relation(name)) hard_relation_[to_underlying(*r)] = true;
  }

  LinearizeConfig generation = linearize;
  generation.excluded_edges.reset();
  std::vector<std::vector<Riddle>> per_image(images_.size());
  detail::run_parallel(images_.size(), config_.workers, [&](std::size_t i) {
    EntitySet set;
    set.image_id = images_[i].image_id;
    set.matched_entities = images_[i].entities;
    per_image[i] = generate_riddles(set, graph, generation);
  });
  std::map<RiddleRef, CatalogEntry> unique;
  for (const auto& riddles : per_image) {
    for (const Riddle& r : riddles) {
      const RiddleRef ref{r.edge_id, r.hidden_side};
      if (unique.contains(ref)) continue;
      const Edge& e = graph.edge(r.edge_id);
      unique.emplace(ref, CatalogEntry{ref, r.hidden_side == HiddenSide::head ? e.head : e.tail,
                                       r.text, r.substitution});
    }
  }
  for (auto& [ref, entry] : unique) {
    const std::size_t slot =
        split_slot(spec.is_held_out(ref.edge) ? KnowledgeSplit::unseen : KnowledgeSplit::seen);
    by_subject_[slot][to_underlying(entry.subject)].push_back(
        static_cast<std::uint32_t>(catalogs_[slot].size()));
    catalogs_[slot].push_back(std::move(entry));
  }
}

std::span<const std::uint32_t> BenchmarkContext::images_with(NodeIndex node) const {
  const auto it = postings_.find(to_underlying(node));
  if (it == postings_.end()) return {};
  return it->second;
}

std::span<const std::uint32_t> BenchmarkContext::catalog_by_subject(KnowledgeSplit split,
                                                                    NodeIndex node) const {
  const auto& index = by_subject_[split_slot(split)];
  const auto it = index.find(to_underlying(node));
  if (it == index.end()) return {};
  return it->second;
}

NodeIndex BenchmarkContext::subject_of(const RiddleRef& ref) const {
  const Edge& e = graph_->edge(ref.edge);
  return ref.hidden == HiddenSide::head ? e.head : e.tail;
}

bool BenchmarkContext::is_hard_relation(RelationIndex relation) const {
  const auto r = to_underlying(relation);
  return r < hard_relation_.size() && hard_relation_[r];
}

std::vector<NodeIndex> BenchmarkContext::hard_neighbors(NodeIndex node) const {
  std::vector<NodeIndex> out;
  for (const EdgeId id : graph_->out_edges(node)) {
    const Edge& e = graph_->edge(id);
    if (is_hard_relation(e.relation) && e.tail != node) out.push_back(e.tail);
  }
  for (const EdgeId id : graph_->in_edges(node)) {
    const Edge& e = graph_->edge(id);
    if (is_hard_relation(e.relation) && e.head != node) out.push_back(e.head);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeIndex> BenchmarkContext::hard_neighbors(std::span<const NodeIndex> nodes) const {
  std::vector<NodeIndex> sorted_nodes(nodes.begin(), nodes.end());
  std::sort(sorted_nodes.begin(), sorted_nodes.end());
  std::vector<NodeIndex> out;
  for (const NodeIndex n : sorted_nodes) {
    const auto hop = hard_neighbors(n);
    out.insert(out.end(), hop.begin(), hop.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::vector<NodeIndex> filtered;
  std::set_difference(out.begin(), out.end(), sorted_nodes.begin(), sorted_nodes.end(),
                      std::back_inserter(filtered));
  return filtered;
}

bool BenchmarkContext::satisfies(NodeIndex node, const RiddleRef& ref) const {
  const Edge& source = graph_->edge(ref.edge);
  if (ref.hidden == HiddenSide::head) {
    const auto out = graph_->out_edges(node);
    const auto in = graph_->in_edges(source.tail);
    if (out.size() <= in.size()) {
      return std::any_of(out.begin(), out.end(), [&](EdgeId id) {
        const Edge& e = graph_->edge(id);
        return e.relation == source.relation && e.tail == source.tail;
      });
    }
    return std::any_of(in.begin(), in.end(), [&](EdgeId id) {
      const Edge& e = graph_->edge(id);
      return e.relation == source.relation && e.head == node;
    });
  }
  const auto in = graph_->in_edges(node);
  const auto out = graph_->out_edges(source.head);
  if (in.size() <= out.size()) {
    return std::any_of(in.begin(), in.end(), [&](EdgeId id) {
      const Edge& e = graph_->edge(id);
      return e.relation == source.relation && e.head == source.head;
    });
  }
  return std::any_of(out.begin(), out.end(), [&](EdgeId id) {
    const Edge& e = graph_->edge(id);
    return e.relation == source.relation && e.tail == node;
  });
}

std::vector<Candidate> mine_hard_negatives(const BenchmarkContext& ctx, const RiddleRef& riddle,
                                           std::span<const std::uint32_t> exclude,
                                           std::size_t count, Rng& rng) {
  const NodeIndex subject = ctx.subject_of(riddle);
  const auto& images = ctx.images();
  const auto eligible = [&](std::uint32_t img) {
    if (sorted_contains(exclude, img)) return false;
    for (const NodeIndex e : images[img].entities) {
      if (e == subject || ctx.satisfies(e, riddle)) return false;
    }
    return true;
  };
  const auto pool_for = [&](const std::vector<NodeIndex>& nodes,
                            std::span<const std::uint32_t> skip) {
    std::vector<std::uint32_t> pool;
    for (const NodeIndex n : nodes) {
      const auto hits = ctx.images_with(n);
      pool.insert(pool.end(), hits.begin(), hits.end());
    }
    sort_unique(pool);
    std::erase_if(pool, [&](std::uint32_t img) {
      return sorted_contains(skip, img) || !eligible(img);
    });
    return pool;
  };

  const auto hop1 = ctx.hard_neighbors(subject);
  const auto tier1 = pool_for(hop1, {});
  TierDraw draw;
  take_from_pool(tier1, 1, count, draw, rng);

  std::vector<std::uint32_t> tier2;
  if (draw.picks.size() < count) {
    std::vector<NodeIndex> hop2 = ctx.hard_neighbors(std::span<const NodeIndex>(hop1));
    std::erase(hop2, subject);
    tier2 = pool_for(hop2, tier1);
    take_from_pool(tier2, 2, count, draw, rng);
  }
  if (draw.picks.size() < count) {
    const auto extra = sample_valid(
        static_cast<std::uint32_t>(images.size()), count - draw.picks.size(),
        [&](std::uint32_t img) {
          return !sorted_contains(tier1, img) && !sorted_contains(tier2, img) && eligible(img);
        },
        rng);
    for (const auto img : extra) {
      draw.picks.push_back(img);
      draw.tiers.push_back(3);
    }
  }
  if (draw.picks.size() < count) {
    throw PoolExhausted("only " + std::to_string(draw.picks.size()) + " of " +
                        std::to_string(count) + " negative images available");
  }
  std::vector<Candidate> out;
  out.reserve(count);
  for (std::size_t i = 0; i < draw.picks.size(); ++i) {
    out.push_back({images[draw.picks[i]].image_id, draw.tiers[i]});
  }
  return out;
}

std::vector<Candidate> mine_hard_negative_riddles(const BenchmarkContext& ctx,
                                                  std::uint32_t image, KnowledgeSplit split,
                                                  std::size_t count, Rng& rng) {
  const auto& entities = ctx.images()[image].entities;
  const auto& catalog = ctx.catalog(split);
  const auto eligible = [&](std::uint32_t idx) {
    const auto& entry = catalog[idx];
    if (std::binary_search(entities.begin(), entities.end(), entry.subject)) return false;
    return std::none_of(entities.begin(), entities.end(),
                        [&](NodeIndex e) { return ctx.satisfies(e, entry.ref); });
  };
  const auto pool_for = [&](const std::vector<NodeIndex>& nodes,
                            std::span<const std::uint32_t> skip) {
    std::vector<std::uint32_t> pool;
    for (const NodeIndex n : nodes) {
      const auto hits = ctx.catalog_by_subject(split, n);
      pool.insert(pool.end(), hits.begin(), hits.end());
    }
    sort_unique(pool);
    std::erase_if(pool, [&](std::uint32_t idx) {
      return sorted_contains(skip, idx) || !eligible(idx);
    });
    return pool;
  };

  const auto hop1 = ctx.hard_neighbors(std::span<const NodeIndex>(entities));
  const auto tier1 = pool_for(hop1, {});
  TierDraw draw;
  take_from_pool(tier1, 1, count, draw, rng);

  std::vector<std::uint32_t> tier2;
  if (draw.picks.size() < count) {
    std::vector<NodeIndex> hop2 = ctx.hard_neighbors(std::span<const NodeIndex>(hop1));
    std::erase_if(hop2, [&](NodeIndex n) {
      return std::binary_search(entities.begin(), entities.end(), n);
    });
    tier2 = pool_for(hop2, tier1);
    take_from_pool(tier2, 2, count, draw, rng);
  }
  if (draw.picks.size() < count) {
    const auto extra = sample_valid(
        static_cast<std::uint32_t>(catalog.size()), count - draw.picks.size(),
        [&](std::uint32_t idx) {
          return !sorted_contains(tier1, idx) && !sorted_contains(tier2, idx) && eligible(idx);
        },
        rng);
    for (const auto idx : extra) {
      draw.picks.push_back(idx);
      draw.tiers.push_back(3);
    }
  }
  if (draw.picks.size() < count) {
    throw PoolExhausted("only " + std::to_string(draw.picks.size()) + " of " +
                        std::to_string(count) + " negative riddles available");
  }
  std::vector<Candidate> out;
  out.reserve(count);
  for (std::size_t i = 0; i < draw.picks.size(); ++i) {
    const auto& ref = catalog[draw.picks[i]].ref;
    out.push_back({riddle_id(ref.edge, ref.hidden), draw.tiers[i]});
  }
  return out;
}

CandidateSet build_text_to_image_set(const BenchmarkContext& ctx, KnowledgeSplit split,
                                     std::uint32_t catalog_index, std::uint64_t seed) {
  const auto& cfg = ctx.config();
  const auto& entry = ctx.catalog(split).at(catalog_index);
  std::string query = riddle_id(entry.ref.edge, entry.ref.hidden);
  std::string query_id = split_name(QueryDirection::text_to_image, split) + ":" + query;
  Rng rng(derive_seed(seed, query_id));

  const auto pool = ctx.images_with(entry.subject);
  if (pool.empty()) throw NoPositive("no test image contains the subject of " + query);
  const std::size_t target = rng.uniform_between(cfg.min_positives, cfg.max_positives);
  const std::size_t n = std::min(target, pool.size());
  auto positives = rng.sample(pool, n);
  std::sort(positives.begin(), positives.end());

  std::vector<Candidate> candidates;
  candidates.reserve(cfg.candidates);
  for (const auto img : positives) candidates.push_back({ctx.images()[img].image_id, 0});
  auto negatives = mine_hard_negatives(ctx, entry.ref, pool, cfg.candidates - n, rng);
  candidates.insert(candidates.end(), std::make_move_iterator(negatives.begin()),
                    std::make_move_iterator(negatives.end()));
  return finish_set(std::move(query_id), std::move(query), QueryDirection::text_to_image, split,
                    std::move(candidates), rng);
}

CandidateSet build_image_to_text_set(const BenchmarkContext& ctx, KnowledgeSplit split,
                                     std::uint32_t image, std::uint64_t seed) {
  const auto& cfg = ctx.config();
  const TestImage& img = ctx.images().at(image);
  std::string query_id = split_name(QueryDirection::image_to_text, split) + ":" + img.image_id;
  Rng rng(derive_seed(seed, query_id));

  std::vector<std::uint32_t> pool;
  for (const NodeIndex e : img.entities) {
    const auto hits = ctx.catalog_by_subject(split, e);
    pool.insert(pool.end(), hits.begin(), hits.end());
  }
  sort_unique(pool);
  if (pool.empty()) throw NoPositive("no riddle about any entity of image " + img.image_id);
  const std::size_t target = rng.uniform_between(cfg.min_positives, cfg.max_positives);
  const std::size_t n = std::min(target, pool.size());
  auto positives = rng.sample(std::span<const std::uint32_t>(pool), n);
  std::sort(positives.begin(), positives.end());

  const auto& catalog = ctx.catalog(split);
  std::vector<Candidate> candidates;
  candidates.reserve(cfg.candidates);
  for (const auto idx : positives) {
    candidates.push_back({riddle_id(catalog[idx].ref.edge, catalog[idx].ref.hidden), 0});
  }
  auto negatives = mine_hard_negative_riddles(ctx, image, split, cfg.candidates - n, rng);
  candidates.insert(candidates.end(), std::make_move_iterator(negatives.begin()),
                    std::make_move_iterator(negatives.end()));
  return finish_set(std::move(query_id), img.image_id, QueryDirection::image_to_text, split,
                    std::move(candidates), rng);
}

Benchmark assemble_benchmark(const BenchmarkContext& ctx, const HoldoutSpec& spec, double tau,
                             std::uint64_t seed) {
  const auto& cfg = ctx.config();
  Benchmark bench;
  auto& prov = bench.provenance;
  prov.seed = seed;
  prov.tau = tau;
  prov.edge_fraction = spec.fractions.edge_fraction;
  prov.image_fraction = spec.fractions.image_fraction;
  prov.held_out_triples = spec.held_out_triples;
  prov.test_images = ctx.images().size();
  prov.graph_digest = spec.graph_digest;
  prov.candidates = cfg.candidates;
  prov.min_positives = cfg.min_positives;
  prov.max_positives = cfg.max_positives;
  prov.hard_relations = cfg.hard_relations;

  for (const auto& [direction, knowledge] : kSplitOrder) {
    BenchmarkSplit split;
    split.name = split_name(direction, knowledge);
    split.direction = direction;
    split.split = knowledge;

    std::vector<std::uint32_t> universe;
    if (direction == QueryDirection::text_to_image) {
      universe.resize(ctx.catalog(knowledge).size());
      for (std::uint32_t i = 0; i < universe.size(); ++i) universe[i] = i;
    } else {
      for (std::uint32_t i = 0; i < ctx.images().size(); ++i) {
        const auto& ents = ctx.images()[i].entities;
        if (std::any_of(ents.begin(), ents.end(), [&](NodeIndex e) {
              return !ctx.catalog_by_subject(knowledge, e).empty();
            })) {
          universe.push_back(i);
        }
      }
    }
    Rng order_rng(derive_seed(seed, "queries:" + split.name));
    order_rng.shuffle(universe);

    enum class Outcome { emitted, no_positive, exhausted };
    std::size_t cursor = 0;
    while (split.sets.size() < cfg.max_queries_per_split && cursor < universe.size()) {
      const std::size_t batch =
          std::min(cfg.max_queries_per_split - split.sets.size(), universe.size() - cursor);
      std::vector<std::optional<CandidateSet>> built(batch);
      std::vector<Outcome> outcome(batch, Outcome::emitted);
      detail::run_parallel(batch, cfg.workers, [&](std::size_t i) {
        try {
          built[i] = direction == QueryDirection::text_to_image
                         ? build_text_to_image_set(ctx, knowledge, universe[cursor + i], seed)
                         : build_image_to_text_set(ctx, knowledge, universe[cursor + i], seed);
        } catch (const NoPositive&) {
          outcome[i] = Outcome::no_positive;
        } catch (const PoolExhausted&) {
          outcome[i] = Outcome::exhausted;
        }
      });
      for (std::size_t i = 0; i < batch; ++i) {
        ++split.counts.queries_considered;
        if (outcome[i] == Outcome::no_positive) {
          ++split.counts.no_positive;
        } else if (outcome[i] == Outcome::exhausted) {
          ++split.counts.pool_exhausted;
        } else {
          for (const Candidate& c : built[i]->candidates) {
            ++split.counts.candidates_by_tier[static_cast<std::size_t>(c.tier)];
          }
          split.sets.push_back(std::move(*built[i]));
        }
      }
      cursor += batch;
    }
    split.counts.emitted = split.sets.size();
    std::sort(split.sets.begin(), split.sets.end(),
              [](const CandidateSet& a, const CandidateSet& b) { return a.query_id < b.query_id; });
    bench.splits.push_back(std::move(split));
  }

  std::set<std::string> riddle_ids;
  std::set<std::string> image_ids;
  for (const BenchmarkSplit& split : bench.splits) {
    const bool text_query = split.direction == QueryDirection::text_to_image;
    for (const CandidateSet& set : split.sets) {
      (text_query ? riddle_ids : image_ids).insert(set.query);
      for (const Candidate& c : set.candidates) (text_query ? image_ids : riddle_ids).insert(c.id);
    }
  }
  std::map<std::string, BenchmarkRiddle> riddles;
  for (const KnowledgeSplit knowledge : {KnowledgeSplit::seen, KnowledgeSplit::unseen}) {
    for (const auto& entry : ctx.catalog(knowledge)) {
      std::string id = riddle_id(entry.ref.edge, entry.ref.hidden);
      if (!riddle_ids.contains(id)) continue;
      const Edge& e = ctx.graph().edge(entry.ref.edge);
      BenchmarkRiddle r;
      r.id = id;
      r.text = entry.text;
      r.edge_id = entry.ref.edge;
      r.hidden_side = entry.ref.hidden;
      r.subject = ctx.graph().node_uri(entry.subject);
      r.relation = ctx.graph().relation_name(e.relation);
      r.substitution = entry.substitution;
      r.weight = e.weight;
      r.split = knowledge;
      riddles.emplace(std::move(id), std::move(r));
    }
  }
  for (auto& [id, r] : riddles) bench.riddles.push_back(std::move(r));
  for (const TestImage& img : ctx.images()) {
    if (!image_ids.contains(img.image_id)) continue;
    std::vector<std::string> uris;
    for (const NodeIndex n : img.entities) uris.push_back(ctx.graph().node_uri(n));
    bench.images.emplace_back(img.image_id, std::move(uris));
  }
  return bench;
}

std::string benchmark_to_json(const Benchmark& bench) {
  using ojson = nlohmann::ordered_json;
  ojson j;
  j["format"] = "riddleforge-benchmark";
  j["version"] = bench.version;
  const auto& p = bench.provenance;
  j["provenance"] = {
      {"seed", p.seed},
      {"tau", p.tau},
      {"edge_fraction", p.edge_fraction},
      {"image_fraction", p.image_fraction},
      {"held_out_triples", p.held_out_triples},
      {"test_images", p.test_images},
      {"graph_digest", p.graph_digest},
      {"candidates", p.candidates},
      {"min_positives", p.min_positives},
      {"max_positives", p.max_positives},
      {"hard_relations", p.hard_relations},
      {"image_to_text", p.image_to_text_note},
  };
  ojson splits = ojson::array();
  for (const BenchmarkSplit& s : bench.splits) {
    ojson js;
    js["name"] = s.name;
    js["direction"] = direction_name(s.direction);
    js["knowledge"] = knowledge_name(s.split);
    js["counts"] = {
        {"queries_considered", s.counts.queries_considered},
        {"emitted", s.counts.emitted},
        {"no_positive", s.counts.no_positive},
        {"pool_exhausted", s.counts.pool_exhausted},
        {"candidates_by_tier", s.counts.candidates_by_tier},
    };
    ojson sets = ojson::array();
    for (const CandidateSet& set : s.sets) {
      ojson ids = ojson::array();
      ojson tiers = ojson::array();
      for (const Candidate& c : set.candidates) {
        ids.push_back(c.id);
        tiers.push_back(c.tier);
      }
      sets.push_back({{"query_id", set.query_id},
                      {"query", set.query},
                      {"candidates", std::move(ids)},
                      {"tiers", std::move(tiers)},
                      {"positives", set.positive_ids()}});
    }
    js["sets"] = std::move(sets);
    splits.push_back(std::move(js));
  }
  j["splits"] = std::move(splits);
  ojson riddles = ojson::object();
  for (const BenchmarkRiddle& r : bench.riddles) {
    riddles[r.id] = {{"text", r.text},
                     {"edge_id", r.edge_id},
                     {"hidden_side", hidden_side_name(r.hidden_side)},
                     {"subject", r.subject},
                     {"relation", r.relation},
                     {"substitution", substitution_token(r.substitution)},
                     {"weight", r.weight},
                     {"knowledge", knowledge_name(r.split)}};
  }
  j["riddles"] = std::move(riddles);
  ojson images = ojson::object();
  for (const auto& [id, uris] : bench.images) images[id] = uris;
  j["images"] = std::move(images);
  return j.dump(1) + "\n";
}

Benchmark benchmark_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("benchmark file is not JSON");
  try {
    if (j.at("format").get<std::string>() != "riddleforge-benchmark") {
      throw FormatError("not a benchmark file");
    }
    Benchmark bench;
    bench.version = j.at("version").get<int>();
    if (bench.version != 1) throw FormatError("unsupported benchmark version");
    const auto& p = j.at("provenance");
    auto& prov = bench.provenance;
    prov.seed = p.at("seed").get<std::uint64_t>();
    prov.tau = p.at("tau").get<double>();
    prov.edge_fraction = p.at("edge_fraction").get<double>();
    prov.image_fraction = p.at("image_fraction").get<double>();
    prov.held_out_triples = p.at("held_out_triples").get<std::size_t>();
    prov.test_images = p.at("test_images").get<std::size_t>();
    prov.graph_digest = p.at("graph_digest").get<std::string>();
    prov.candidates = p.at("candidates").get<std::size_t>();
    prov.min_positives = p.at("min_positives").get<std::size_t>();
    prov.max_positives = p.at("max_positives").get<std::size_t>();
    prov.hard_relations = p.at("hard_relations").get<std::vector<std::string>>();
    prov.image_to_text_note = p.at("image_to_text").get<std::string>();

    for (const auto& js : j.at("splits")) {
      BenchmarkSplit s;
      s.name = js.at("name").get<std::string>();
      s.direction = js.at("direction").get<std::string>() == "image_to_text"
                        ? QueryDirection::image_to_text
                        : QueryDirection::text_to_image;
      s.split = js.at("knowledge").get<std::string>() == "unseen" ? KnowledgeSplit::unseen
                                                                  : KnowledgeSplit::seen;
      const auto& c = js.at("counts");
      s.counts.queries_considered = c.at("queries_considered").get<std::size_t>();
      s.counts.emitted = c.at("emitted").get<std::size_t>();
      s.counts.no_positive = c.at("no_positive").get<std::size_t>();
      s.counts.pool_exhausted = c.at("pool_exhausted").get<std::size_t>();
      s.counts.candidates_by_tier = c.at("candidates_by_tier").get<std::array<std::size_t, 4>>();
      for (const auto& jset : js.at("sets")) {
        CandidateSet set;
        set.query_id = jset.at("query_id").get<std::string>();
        set.query = jset.at("query").get<std::string>();
        set.direction = s.direction;
        set.split = s.split;
        const auto ids = jset.at("candidates").get<std::vector<std::string>>();
        const auto tiers = jset.at("tiers").get<std::vector<int>>();
        if (ids.size() != tiers.size()) throw FormatError("candidates/tiers length mismatch");
        for (std::size_t i = 0; i < ids.size(); ++i) {
          if (tiers[i] < 0 || tiers[i] > 3) throw FormatError("candidate tier out of range");
          set.candidates.push_back({ids[i], tiers[i]});
        }
        if (jset.at("positives").get<std::vector<std::string>>() != set.positive_ids()) {
          throw FormatError("positives disagree with tiers in " + set.query_id);
        }
        s.sets.push_back(std::move(set));
      }
      bench.splits.push_back(std::move(s));
    }
    for (const auto& [id, jr] : j.at("riddles").items()) {
      BenchmarkRiddle r;
      r.id = id;
      r.text = jr.at("text").get<std::string>();
      r.edge_id = jr.at("edge_id").get<EdgeId>();
      const auto side = parse_hidden_side(jr.at("hidden_side").get<std::string>());
      const auto sub = parse_substitution(jr.at("substitution").get<std::string>());
      if (!side || !sub) throw FormatError("bad riddle entry " + id);
      r.hidden_side = *side;
      r.substitution = *sub;
      r.subject = jr.at("subject").get<std::string>();
      r.relation = jr.at("relation").get<std::string>();
      r.weight = jr.at("weight").get<double>();
      r.split = jr.at("knowledge").get<std::string>() == "unseen" ? KnowledgeSplit::unseen
                                                                 : KnowledgeSplit::seen;
      bench.riddles.push_back(std::move(r));
    }
    std::sort(bench.riddles.begin(), bench.riddles.end(),
              [](const BenchmarkRiddle& a, const BenchmarkRiddle& b) { return a.id < b.id; });
    for (const auto& [id, uris] : j.at("images").items()) {
      bench.images.emplace_back(id, uris.get<std::vector<std::string>>());
    }
    std::sort(bench.images.begin(), bench.images.end());
    return bench;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("benchmark file: ") + e.what());
  }
}

}  // namespace riddleforge
