#include "riddleforge/linearize.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include "builtin_data.hpp"
#include "riddleforge/error.hpp"
#include "riddleforge/io.hpp"
#include "riddleforge/text.hpp"

namespace riddleforge {
namespace {

constexpr std::array<std::string_view, 3> kTokens{"this item", "this person", "this place"};
constexpr std::string_view kAtLocation = "AtLocation";

std::string_view bare_relation(std::string_view uri) {
  if (uri.starts_with("/r/")) uri.remove_prefix(3);
  while (uri.ends_with('/')) uri.remove_suffix(1);
  return uri;
}

bool is_subject(std::span<const NodeIndex> sorted_subjects, NodeIndex node) {
  return std::binary_search(sorted_subjects.begin(), sorted_subjects.end(), node);
}

}  // namespace

std::string_view substitution_token(SubstitutionClass cls) {
  return kTokens[static_cast<std::size_t>(cls)];
}

std::optional<SubstitutionClass> parse_substitution(std::string_view token) {
  for (std::size_t i = 0; i < kTokens.size(); ++i) {
    if (kTokens[i] == token) return static_cast<SubstitutionClass>(i);
  }
  return std::nullopt;
}

std::string_view hidden_side_name(HiddenSide side) {
  return side == HiddenSide::head ? "head" : "tail";
}

std::optional<HiddenSide> parse_hidden_side(std::string_view name) {
  if (name == "head") return HiddenSide::head;
  if (name == "tail") return HiddenSide::tail;
  return std::nullopt;
}

const RelationTemplateTable& RelationTemplateTable::builtin() {
  static const RelationTemplateTable table =
      parse_tsv(detail::builtin_data("relation_templates.tsv"));
  return table;
}

RelationTemplateTable RelationTemplateTable::parse_tsv(std::string_view text) {
  RelationTemplateTable table;
  for (const std::string& line : parse_word_list(text)) {
    const auto fields = split(line, '\t');
    if (fields.size() != 2) throw FormatError("template line needs 2 columns: " + line);
    const std::string_view relation = bare_relation(trim(fields[0]));
    const std::string phrase = to_lower(trim(fields[1]));
    if (relation.empty() || phrase.empty()) throw FormatError("empty template entry: " + line);
    table.set(std::string(relation), phrase);
  }
  return table;
}

RelationTemplateTable RelationTemplateTable::load(const std::filesystem::path& path) {
  return parse_tsv(read_file(path));
}

void RelationTemplateTable::set(std::string relation, std::string phrase) {
  phrases_.insert_or_assign(std::move(relation), std::move(phrase));
}

const std::string* RelationTemplateTable::find(std::string_view relation) const {
  const auto it = phrases_.find(relation);
  return it == phrases_.end() ? nullptr : &it->second;
}

std::vector<std::string> RelationTemplateTable::unmapped(const KnowledgeGraph& graph) const {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < graph.relation_count(); ++r) {
    const std::string& name = graph.relation_name(static_cast<RelationIndex>(r));
    if (!find(name)) out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LinearizeConfig LinearizeConfig::defaults() {
  LinearizeConfig config;
  config.person_words = builtin_person_words();
  config.place_categories = builtin_place_categories();
  config.templates = RelationTemplateTable::builtin();
  return config;
}

void LinearizeConfig::validate() const {
  if (!std::isfinite(tau) || tau < 0.0) {
    throw InvalidArgument("tau must be finite and non-negative");
  }
}

RiddleCounters& RiddleCounters::operator+=(const RiddleCounters& other) {
  below_threshold += other.below_threshold;
  unmapped_relation += other.unmapped_relation;
  leaked_subject += other.leaked_subject;
  duplicate += other.duplicate;
  excluded_edge += other.excluded_edge;
  co_entity += other.co_entity;
  return *this;
}

SubGraph query_bidirectional_subgraph(const KnowledgeGraph& graph,
                                      std::span<const NodeIndex> subjects) {
  SubGraph sub;
  sub.subject_nodes.assign(subjects.begin(), subjects.end());
  std::sort(sub.subject_nodes.begin(), sub.subject_nodes.end());
  sub.subject_nodes.erase(std::unique(sub.subject_nodes.begin(), sub.subject_nodes.end()),
                          sub.subject_nodes.end());
  for (const NodeIndex node : sub.subject_nodes) {
    const auto out = graph.out_edges(node);
    const auto in = graph.in_edges(node);
    sub.edges.insert(sub.edges.end(), out.begin(), out.end());
    sub.edges.insert(sub.edges.end(), in.begin(), in.end());
  }
  std::sort(sub.edges.begin(), sub.edges.end());
  sub.edges.erase(std::unique(sub.edges.begin(), sub.edges.end()), sub.edges.end());
  return sub;
}

SubstitutionClass classify_substitution(NodeIndex node, const KnowledgeGraph& graph,
                                        const LinearizeConfig& config) {
  const std::string surface = surface_form(graph.node_uri(node), graph.name_space());
  if (config.person_words.contains(surface)) return SubstitutionClass::person;
  if (const auto at_location = graph.find_relation(kAtLocation)) {
    for (const EdgeId id : graph.in_edges(node)) {
      if (graph.edge(id).relation == *at_location) return SubstitutionClass::place;
    }
  }
  if (config.place_categories.contains(surface)) return SubstitutionClass::place;
  return SubstitutionClass::item;
}

SubstitutedGraph substitute_and_filter(const SubGraph& sub, const KnowledgeGraph& graph,
                                       const LinearizeConfig& config) {
  SubstitutedGraph out;
  out.subject_nodes = sub.subject_nodes;
  out.threshold = config.tau;
  std::vector<std::pair<NodeIndex, SubstitutionClass>> classes;
  const auto class_of = [&](NodeIndex node) {
    for (const auto& [n, cls] : classes) {
      if (n == node) return cls;
    }
    const SubstitutionClass cls = classify_substitution(node, graph, config);
    classes.emplace_back(node, cls);
    return cls;
  };

  for (const EdgeId id : sub.edges) {
    const Edge& e = graph.edge(id);
    if (!(e.weight > config.tau)) continue;
    if (is_subject(sub.subject_nodes, e.head)) {
      out.edges.push_back({id, HiddenSide::head, class_of(e.head)});
    }
    if (is_subject(sub.subject_nodes, e.tail)) {
      out.edges.push_back({id, HiddenSide::tail, class_of(e.tail)});
    }
  }
  return out;
}

std::string linearize_edge(const SubstitutedEdge& edge, const KnowledgeGraph& graph,
                           const RelationTemplateTable& templates) {
  const Edge& e = graph.edge(edge.edge);
  const std::string& relation = graph.relation_name(e.relation);
  const std::string* phrase = templates.find(relation);
  if (!phrase) throw UnmappedRelation(relation);

  const std::string token(substitution_token(edge.substitution));
  const std::string head = edge.hidden == HiddenSide::head
                               ? token
                               : surface_form(graph.node_uri(e.head), graph.name_space());
  const std::string tail = edge.hidden == HiddenSide::tail
                               ? token
                               : surface_form(graph.node_uri(e.tail), graph.name_space());
  std::string text;
  text.reserve(head.size() + phrase->size() + tail.size() + 2);
  text += head;
  text += ' ';
  text += *phrase;
  text += ' ';
  text += tail;
  return text;
}

bool contains_word_run(std::string_view text, std::string_view phrase) {
  const auto haystack = split_whitespace(text);
  const auto needle = split_whitespace(phrase);
  if (needle.empty()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

std::size_t count_substitution_tokens(std::string_view text) {
  const auto words = split_whitespace(text);
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    if (words[i] != "this") continue;
    const std::string_view next = words[i + 1];
    if (next == "item" || next == "person" || next == "place") ++count;
  }
  return count;
}

std::vector<Riddle> generate_riddles(const EntitySet& entities, const KnowledgeGraph& graph,
                                     const LinearizeConfig& config, RiddleCounters* counters) {
  RiddleCounters local;
  std::vector<Riddle> riddles;
  const SubGraph sub = query_bidirectional_subgraph(graph, entities.matched_entities);
  for (const EdgeId id : sub.edges) {
    if (!(graph.edge(id).weight > config.tau)) {
      const Edge& e = graph.edge(id);
      local.below_threshold += static_cast<std::size_t>(is_subject(sub.subject_nodes, e.head)) +
                               static_cast<std::size_t>(is_subject(sub.subject_nodes, e.tail));
    }
  }
  const SubstitutedGraph substituted = substitute_and_filter(sub, graph, config);

  WordSet seen_texts;
  for (const SubstitutedEdge& se : substituted.edges) {
    const Edge& e = graph.edge(se.edge);
    if (config.excluded_edges && se.edge < config.excluded_edges->size() &&
        (*config.excluded_edges)[se.edge]) {
      ++local.excluded_edge;
      continue;
    }
    const NodeIndex subject = se.hidden == HiddenSide::head ? e.head : e.tail;
    const NodeIndex visible = se.hidden == HiddenSide::head ? e.tail : e.head;
    if (config.suppress_co_entity && is_subject(sub.subject_nodes, visible)) {
      ++local.co_entity;
      continue;
    }
    std::string text;
    try {
      text = linearize_edge(se, graph, config.templates);
    } catch (const UnmappedRelation&) {
      ++local.unmapped_relation;
      continue;
    }
    const std::string& subject_uri = graph.node_uri(subject);
    if (contains_word_run(text, surface_form(subject_uri, graph.name_space())) ||
        count_substitution_tokens(text) != 1) {
      ++local.leaked_subject;
      continue;
    }
    if (!seen_texts.insert(text).second) {
      ++local.duplicate;
      continue;
    }
    Riddle riddle;
    riddle.image_id = entities.image_id;
    riddle.text = std::move(text);
    riddle.edge_id = se.edge;
    riddle.hidden_side = se.hidden;
    riddle.subject = subject_uri;
    riddle.substitution = se.substitution;
    riddle.weight = e.weight;
    riddle.relation = graph.relation_name(e.relation);
    riddles.push_back(std::move(riddle));
  }
  if (counters) *counters += local;
  return riddles;
}

std::string riddle_to_json(const Riddle& riddle) {
  nlohmann::ordered_json j;
  j["image_id"] = riddle.image_id;
  j["text"] = riddle.text;
  j["edge_id"] = riddle.edge_id;
  j["hidden_side"] = hidden_side_name(riddle.hidden_side);
  j["subject"] = riddle.subject;
  j["substitution"] = substitution_token(riddle.substitution);
  j["weight"] = riddle.weight;
  j["relation"] = riddle.relation;
  return j.dump();
}

Riddle riddle_from_json(std::string_view line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("riddle line is not a JSON object");
  try {
    Riddle riddle;
    riddle.image_id = j.at("image_id").get<std::string>();
    riddle.text = j.at("text").get<std::string>();
    riddle.edge_id = j.at("edge_id").get<EdgeId>();
    const auto side = parse_hidden_side(j.at("hidden_side").get<std::string>());
    const auto sub = parse_substitution(j.at("substitution").get<std::string>());
    if (!side || !sub) throw FormatError("bad hidden_side or substitution in riddle");
    riddle.hidden_side = *side;
    riddle.substitution = *sub;
    riddle.subject = j.at("subject").get<std::string>();
    riddle.weight = j.at("weight").get<double>();
    riddle.relation = j.value("relation", std::string{});
    return riddle;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("riddle line: ") + e.what());
  }
}

}  // namespace riddleforge
