#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include "riddleforge/augment.hpp"
#include "riddleforge/benchmark.hpp"
#include "riddleforge/corpus_stats.hpp"
#include "riddleforge/error.hpp"
#include "riddleforge/eval.hpp"
#include "riddleforge/holdout.hpp"
#include "riddleforge/ingest.hpp"
#include "riddleforge/io.hpp"
#include "riddleforge/mix.hpp"
#include "riddleforge/snapshot.hpp"

#ifndef RIDDLEFORGE_VERSION
#define RIDDLEFORGE_VERSION "0.0.0"
#endif

namespace riddleforge::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RIDDLEFORGE_SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 0;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool is_stdio(const std::string& path) { return path.empty() || path == "-"; }

void ensure_writable(const std::string& path, bool force) {
  if (is_stdio(path)) return;
  if (!force && fs::exists(path)) {
    throw InvalidArgument("refusing to overwrite " + path + " (pass --force)");
  }
}

// Collects what a run read and wrote, then writes <primary>.manifest.json.
class RunRecord {
 public:
  RunRecord(std::string subcommand, const CLI::App* app, std::uint64_t seed)
      : subcommand_(std::move(subcommand)), seed_(seed), started_(utc_now()) {
    for (const CLI::Option* opt : app->get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help") continue;
      if (opt->get_expected_min() == 0) {
        flags_[name] = opt->count() > 0;
      } else if (opt->count() > 0) {
        const auto& r = opt->results();
        flags_[name] = r.size() == 1 ? ojson(r.front()) : ojson(r);
      } else {
        flags_[name] = opt->get_default_str();
      }
    }
  }

  void input(const std::string& path) {
    if (!is_stdio(path)) inputs_[path] = sha256_file(path);
  }
  void output(const std::string& path) {
    if (!is_stdio(path)) outputs_[path] = sha256_file(path);
  }
  ojson& extra() { return extra_; }

  void write(const std::string& primary, bool force) const {
    if (is_stdio(primary)) return;
    const std::string path = primary + ".manifest.json";
    ensure_writable(path, force);
    ojson j;
    j["subcommand"] = subcommand_;
    j["version"] = RIDDLEFORGE_VERSION;
    j["seed"] = seed_;
    j["flags"] = flags_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    if (!extra_.is_null()) j["details"] = extra_;
    j["started_at"] = started_;
    j["finished_at"] = utc_now();
    write_file(path, j.dump(2) + "\n");
  }

 private:
  std::string subcommand_;
  std::uint64_t seed_;
  std::string started_;
  ojson flags_ = ojson::object();
  ojson inputs_ = ojson::object();
  ojson outputs_ = ojson::object();
  ojson extra_;
};

struct CommonFlags {
  bool force = false;
  unsigned workers = 1;
  std::uint64_t seed = 0;
};

// Optional overrides of the bundled lexicons and tables.
struct DataFlags {
  std::string templates;
  std::string person_words;
  std::string place_categories;
  std::string stoplist;
  std::string lemmas;
  std::string lexicon;
  std::size_t degree_cutoff = 50000;
  double tau = 0.5;
  bool suppress_co_entity = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--tau", tau, "Edge weight threshold (keep w > tau)")->capture_default_str();
    cmd->add_option("--templates", templates, "Relation template TSV");
    cmd->add_option("--person-words", person_words, "Person word list");
    cmd->add_option("--place-categories", place_categories, "Scene category list");
    cmd->add_option("--stoplist", stoplist, "General-entity stoplist");
    cmd->add_option("--lemmas", lemmas, "Lemma table TSV");
    cmd->add_option("--pos-lexicon", lexicon, "POS lexicon TSV");
    cmd->add_option("--degree-cutoff", degree_cutoff, "Max node degree for entity matching")
        ->capture_default_str();
    cmd->add_flag("--suppress-co-entity", suppress_co_entity,
                  "Drop riddles whose visible side is another entity of the image");
  }

  ExtractionConfig extraction(RunRecord& record) const {
    ExtractionConfig c = ExtractionConfig::defaults();
    c.max_node_degree = degree_cutoff;
    if (!stoplist.empty()) {
      c.general_entities = load_word_set(stoplist);
      record.input(stoplist);
    }
    if (!lemmas.empty()) {
      c.lemmas = load_word_map(lemmas);
      record.input(lemmas);
    }
    if (!lexicon.empty()) {
      c.lexicon = PosLexicon::load(lexicon);
      record.input(lexicon);
    }
    c.validate();
    return c;
  }

  LinearizeConfig linearize(RunRecord& record) const {
    LinearizeConfig c = LinearizeConfig::defaults();
    c.tau = tau;
    c.suppress_co_entity = suppress_co_entity;
    if (!templates.empty()) {
      c.templates = RelationTemplateTable::load(templates);
      record.input(templates);
    }
    if (!person_words.empty()) {
      WordSet words;
      for (const auto& w : load_word_set(person_words)) words.insert(surface_form(w, ""));
      c.person_words = std::move(words);
      record.input(person_words);
    }
    if (!place_categories.empty()) {
      c.place_categories = place_terms_from_categories(read_file(place_categories));
      record.input(place_categories);
    }
    c.validate();
    return c;
  }
};

KnowledgeGraph load_graph(const std::string& path, RunRecord& record) {
  record.input(path);
  return load_snapshot(path);
}

std::vector<std::string> manifest_image_ids(const std::string& path) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  auto lines = open_lines(path);
  std::string line;
  while (lines->next_line(line)) {
    if (trim(line).empty()) continue;
    try {
      const Caption c = parse_caption_line(line);
      if (seen.insert(c.image_id).second) ids.push_back(c.image_id);
    } catch (const FormatError&) {
    }
  }
  return ids;
}

// ---- subcommands -----------------------------------------------------------

struct IngestArgs {
  std::string assertions;
  std::string out;
  std::string name_space{kDefaultNamespace};
  bool dedup = false;
  double max_error_fraction = 0.05;
};

int cmd_ingest(const IngestArgs& a, const CommonFlags& common, const CLI::App* app,
               std::ostream& err) {
  ensure_writable(a.out, common.force);
  RunRecord record("ingest", app, common.seed);
  record.input(a.assertions);
  IngestOptions options;
  options.name_space = a.name_space;
  options.deduplicate = a.dedup;
  options.max_error_fraction = a.max_error_fraction;
  auto lines = open_lines(a.assertions);
  const IngestResult result = ingest_assertions(*lines, options);
  save_snapshot(result.graph, a.out);
  record.output(a.out);

  const auto& r = result.report;
  const auto unmapped = RelationTemplateTable::builtin().unmapped(result.graph);
  err << "ingest: " << r.lines_read << " lines, " << r.records_kept << " kept, "
      << r.records_filtered << " filtered, " << r.malformed << " malformed, "
      << r.duplicates_merged << " duplicates merged\n"
      << "graph: " << result.graph.node_count() << " nodes, " << result.graph.edge_count()
      << " edges, " << result.graph.relation_count() << " relations ("
      << unmapped.size() << " without a built-in template)\n";
  for (const auto& m : r.malformed_samples) {
    err << "  malformed line " << m.line_no << ": " << m.reason << "\n";
  }
  record.extra() = {{"lines_read", r.lines_read},
                    {"records_kept", r.records_kept},
                    {"records_filtered", r.records_filtered},
                    {"malformed", r.malformed},
                    {"duplicates_merged", r.duplicates_merged},
                    {"nodes", result.graph.node_count()},
                    {"edges", result.graph.edge_count()},
                    {"graph_digest", graph_digest(result.graph)}};
  record.write(a.out, common.force);
  return kExitOk;
}

struct AugmentArgs {
  std::string graph;
  std::string manifest;
  std::string out;
  std::string holdout;
  bool union_captions = false;
  DataFlags data;
};

int cmd_augment(const AugmentArgs& a, const CommonFlags& common, const CLI::App* app,
                std::ostream& err) {
  ensure_writable(a.out, common.force);
  RunRecord record("augment", app, common.seed);
  const KnowledgeGraph graph = load_graph(a.graph, record);
  AugmentOptions options;
  options.extraction = a.data.extraction(record);
  options.linearize = a.data.linearize(record);
  options.union_per_image = a.union_captions;
  options.workers = common.workers;
  if (!a.holdout.empty()) {
    record.input(a.holdout);
    auto spec = std::make_shared<HoldoutSpec>(holdout_from_json(read_file(a.holdout)));
    if (!spec->graph_digest.empty() && spec->graph_digest != graph_digest(graph)) {
      throw InvalidArgument("holdout spec " + a.holdout + " was built for a different graph");
    }
    options.holdout = std::move(spec);
  }

  record.input(a.manifest);
  auto lines = open_lines(a.manifest);
  auto sink = open_output(a.out);
  const AugmentSummary summary = augment_dataset(
      *lines, graph, options, [&](const Riddle& r) { sink->write_line(riddle_to_json(r)); });
  sink->close();
  record.output(a.out);

  err << "augment: " << summary.images_in << " images (" << summary.images_skipped
      << " held-out test images skipped), " << summary.captions_in << " captions, "
      << summary.malformed_lines << " malformed lines, " << summary.riddles_out << " riddles\n"
      << "dropped: " << summary.dropped.below_threshold << " below tau, "
      << summary.dropped.unmapped_relation << " unmapped relation, "
      << summary.dropped.leaked_subject << " leaked subject, " << summary.dropped.duplicate
      << " duplicate, " << summary.dropped.excluded_edge << " held-out edge, "
      << summary.dropped.co_entity << " co-entity\n";
  record.extra() = ojson::parse(summary_to_json(summary));
  record.write(a.out, common.force);
  return kExitOk;
}

struct BenchmarkArgs {
  std::string graph;
  std::string manifest;
  std::string out;
  std::string holdout_in;
  std::string holdout_out;
  double edge_fraction = 0.1;
  double image_fraction = 0.1;
  std::size_t max_queries = 500;
  std::size_t candidates = 50;
  DataFlags data;
};

int cmd_benchmark(const BenchmarkArgs& a, const CommonFlags& common, const CLI::App* app,
                  std::ostream& err) {
  if (a.holdout_in.empty() == a.holdout_out.empty()) {
    throw InvalidArgument("pass exactly one of --holdout (reuse) or --holdout-out (create)");
  }
  ensure_writable(a.out, common.force);
  if (!a.holdout_out.empty()) ensure_writable(a.holdout_out, common.force);
  RunRecord record("benchmark", app, common.seed);
  const KnowledgeGraph graph = load_graph(a.graph, record);
  const std::string digest = graph_digest(graph);
  const ExtractionConfig extraction = a.data.extraction(record);
  const LinearizeConfig linearize = a.data.linearize(record);
  record.input(a.manifest);

  HoldoutSpec spec;
  if (!a.holdout_in.empty()) {
    record.input(a.holdout_in);
    spec = holdout_from_json(read_file(a.holdout_in));
    if (!spec.graph_digest.empty() && spec.graph_digest != digest) {
      throw InvalidArgument("holdout spec " + a.holdout_in + " was built for a different graph");
    }
  } else {
    const auto ids = manifest_image_ids(a.manifest);
    spec = partition_holdout(graph, ids, {a.edge_fraction, a.image_fraction}, common.seed);
    spec.graph_digest = digest;
    write_file(a.holdout_out, holdout_to_json(spec));
    record.output(a.holdout_out);
  }

  BenchmarkConfig config;
  config.max_queries_per_split = a.max_queries;
  config.candidates = a.candidates;
  config.workers = common.workers;
  auto lines = open_lines(a.manifest);
  BenchmarkContext ctx(graph, collect_test_images(*lines, graph, spec, extraction), spec,
                       linearize, config);
  const Benchmark bench = assemble_benchmark(ctx, spec, linearize.tau, common.seed);
  write_file(a.out, benchmark_to_json(bench));
  record.output(a.out);

  err << "benchmark: " << spec.held_out_edges.size() << " held-out edges ("
      << spec.held_out_triples << " triples), " << spec.test_images.size()
      << " test images, catalog " << ctx.catalog(KnowledgeSplit::seen).size() << " seen / "
      << ctx.catalog(KnowledgeSplit::unseen).size() << " unseen riddles\n";
  ojson counts = ojson::object();
  for (const BenchmarkSplit& s : bench.splits) {
    const auto& c = s.counts;
    err << "  " << s.name << ": " << c.emitted << " sets (" << c.no_positive
        << " without positives, " << c.pool_exhausted << " short of negatives); tiers "
        << c.candidates_by_tier[0] << "/" << c.candidates_by_tier[1] << "/"
        << c.candidates_by_tier[2] << "/" << c.candidates_by_tier[3] << "\n";
    counts[s.name] = {{"emitted", c.emitted},
                      {"no_positive", c.no_positive},
                      {"pool_exhausted", c.pool_exhausted},
                      {"candidates_by_tier", c.candidates_by_tier}};
  }
  record.extra() = {{"graph_digest", digest}, {"splits", counts}};
  record.write(a.out, common.force);
  return kExitOk;
}

struct EvalArgs {
  std::string benchmark;
  std::string scores;
  std::string out;
  std::string model = "model";
  std::string tie_break = "id";
};

int cmd_eval(const EvalArgs& a, const CommonFlags& common, const CLI::App* app,
             std::ostream& out, std::ostream& err) {
  if (!a.out.empty()) ensure_writable(a.out, common.force);
  RunRecord record("eval", app, common.seed);
  record.input(a.benchmark);
  record.input(a.scores);
  const Benchmark bench = benchmark_from_json(read_file(a.benchmark));
  auto lines = open_lines(a.scores);
  const ScoreMatrix scores = read_score_csv(*lines, a.model);
  const TieBreak tie = a.tie_break == "positives-last" ? TieBreak::positives_last
                                                       : TieBreak::candidate_id;
  const EvalReport report = evaluate_report(bench, scores, tie);
  out << report_to_table(report);
  if (report.tie_count > 0) {
    err << "eval: " << report.tie_count << " queries decided by the tie-break rule\n";
  }
  if (!a.out.empty()) {
    write_file(a.out, report_to_json(report));
    record.output(a.out);
    record.write(a.out, common.force);
  }
  return kExitOk;
}

struct StatsArgs {
  std::string corpus;
  std::string mode = "pos";
  std::string out = "-";
  std::string lexicon;
  std::size_t top_k = 0;
};

int cmd_stats(const StatsArgs& a, const CommonFlags& common, const CLI::App* app,
              std::ostream& out) {
  const auto mode = parse_stats_mode(a.mode);
  if (!mode) throw InvalidArgument("unknown stats mode " + a.mode);
  ensure_writable(a.out, common.force);
  RunRecord record("stats", app, common.seed);
  record.input(a.corpus);
  PosLexicon lexicon = PosLexicon::builtin();
  if (!a.lexicon.empty()) {
    lexicon = PosLexicon::load(a.lexicon);
    record.input(a.lexicon);
  }
  auto lines = open_lines(a.corpus);
  const CorpusStats stats = compute_corpus_stats(*lines, lexicon, *mode);
  const std::string json = stats_to_json(stats, a.top_k);
  if (is_stdio(a.out)) {
    out << json;
    return kExitOk;
  }
  write_file(a.out, json);
  record.output(a.out);
  record.write(a.out, common.force);
  return kExitOk;
}

struct MixArgs {
  std::string captions;
  std::string riddles;
  std::string out;
  std::size_t batch_size = 32;
  std::int64_t steps = 1000;
  double p_start = 0.5;
  double p_end = 0.1;
};

std::vector<ImageTextRecord> read_records(const std::string& path, RecordOrigin origin) {
  std::vector<ImageTextRecord> records;
  auto lines = open_lines(path);
  std::string line;
  while (lines->next_line(line)) {
    if (trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw FormatError(path + ":" + std::to_string(lines->line_number()) + ": not JSON");
    }
    const char* field = origin == RecordOrigin::caption ? "caption" : "text";
    const auto id = j.find("image_id");
    const auto text = j.find(field);
    if (id == j.end() || text == j.end() || !text->is_string()) {
      throw FormatError(path + ":" + std::to_string(lines->line_number()) + ": needs image_id and " +
                        field);
    }
    records.push_back({id->is_string() ? id->get<std::string>() : id->dump(),
                       text->get<std::string>(), origin});
  }
  return records;
}

int cmd_mix(const MixArgs& a, const CommonFlags& common, const CLI::App* app, std::ostream& err) {
  if (a.steps <= 0) throw InvalidArgument("--steps must be positive");
  ensure_writable(a.out, common.force);
  RunRecord record("mix", app, common.seed);
  record.input(a.captions);
  record.input(a.riddles);
  MixSchedule schedule{a.p_start, a.p_end, std::max<std::int64_t>(1, a.steps - 1)};
  schedule.validate();
  RecordCycler captions(read_records(a.captions, RecordOrigin::caption),
                        derive_seed(common.seed, "mix:captions"));
  RecordCycler riddles(read_records(a.riddles, RecordOrigin::riddle),
                       derive_seed(common.seed, "mix:riddles"));
  Rng rng(derive_seed(common.seed, "mix:batches"));
  MixCarry carry;
  std::size_t riddle_count = 0;
  std::size_t total = 0;
  auto sink = open_output(a.out);
  for (std::int64_t step = 0; step < a.steps; ++step) {
    const double p = schedule_p(schedule, step);
    for (const ImageTextRecord& r :
         compose_batch(captions, riddles, a.batch_size, p, carry, rng)) {
      ojson j;
      j["step"] = step;
      j["image_id"] = r.image_id;
      j["text"] = r.text;
      j["origin"] = origin_name(r.origin);
      sink->write_line(j.dump());
      if (r.origin == RecordOrigin::riddle) ++riddle_count;
      ++total;
    }
  }
  sink->close();
  record.output(a.out);
  const double realized = total ? static_cast<double>(riddle_count) / total : 0.0;
  err << "mix: " << a.steps << " batches, " << total << " records, riddle share " << realized
      << "\n";
  record.extra() = {{"records", total}, {"riddles", riddle_count}, {"realized_share", realized}};
  record.write(a.out, common.force);
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonFlags& common, bool with_workers) {
  cmd->add_flag("--force", common.force, "Overwrite existing outputs");
  cmd->add_option("--seed", common.seed, "Master seed (default: $RIDDLEFORGE_SEED or 0)")
      ->capture_default_str();
  if (with_workers) {
    cmd->add_option("--workers", common.workers, "Worker threads")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"riddleforge: commonsense riddle augmentation and benchmark toolkit"};
  app.set_version_flag("--version", RIDDLEFORGE_VERSION);
  app.require_subcommand(1);

  CommonFlags common;
  common.seed = default_seed();

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Build a graph snapshot from an assertion dump");
  c_ingest->add_option("--assertions", ingest.assertions, "Assertion TSV (gzip ok, - = stdin)")
      ->required();
  c_ingest->add_option("--out", ingest.out, "Snapshot output path")->required();
  c_ingest->add_option("--namespace", ingest.name_space, "Node namespace to keep")
      ->capture_default_str();
  c_ingest->add_flag("--dedup", ingest.dedup, "Merge parallel edges keeping the max weight");
  c_ingest->add_option("--max-error-fraction", ingest.max_error_fraction,
                       "Fail when malformed lines exceed this fraction")
      ->capture_default_str();
  add_common(c_ingest, common, false);

  AugmentArgs augment;
  auto* c_augment = app.add_subcommand("augment", "Generate riddles for a caption manifest");
  c_augment->add_option("--graph", augment.graph, "Graph snapshot")->required();
  c_augment->add_option("--manifest", augment.manifest, "Caption JSON-lines")->required();
  c_augment->add_option("--out", augment.out, "Riddle JSON-lines output")->required();
  c_augment->add_option("--holdout", augment.holdout,
                        "Holdout spec; skips test images and held-out edges");
  c_augment->add_flag("--union-captions", augment.union_captions,
                      "Union entities of all captions of an image");
  augment.data.add_to(c_augment);
  add_common(c_augment, common, true);

  BenchmarkArgs bench;
  auto* c_bench = app.add_subcommand("benchmark", "Build the retrieval benchmark");
  c_bench->add_option("--graph", bench.graph, "Graph snapshot")->required();
  c_bench->add_option("--manifest", bench.manifest, "Caption JSON-lines")->required();
  c_bench->add_option("--out", bench.out, "Benchmark JSON output")->required();
  c_bench->add_option("--holdout-out", bench.holdout_out, "Write a new holdout spec here");
  c_bench->add_option("--holdout", bench.holdout_in, "Reuse an existing holdout spec");
  c_bench->add_option("--edge-fraction", bench.edge_fraction, "Share of triples held out")
      ->capture_default_str();
  c_bench->add_option("--image-fraction", bench.image_fraction, "Share of images held out")
      ->capture_default_str();
  c_bench->add_option("--max-queries", bench.max_queries, "Queries per split")
      ->capture_default_str();
  c_bench->add_option("--candidates", bench.candidates, "Candidates per set")
      ->capture_default_str();
  bench.data.add_to(c_bench);
  add_common(c_bench, common, true);

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Score a model against a benchmark");
  c_eval->add_option("--benchmark", eval.benchmark, "Benchmark JSON")->required();
  c_eval->add_option("--scores", eval.scores, "Score CSV")->required();
  c_eval->add_option("--out", eval.out, "Report JSON output");
  c_eval->add_option("--model", eval.model, "Model name for the report")->capture_default_str();
  c_eval->add_option("--tie-break", eval.tie_break, "Tie rule")
      ->check(CLI::IsMember({"id", "positives-last"}))
      ->capture_default_str();
  add_common(c_eval, common, false);

  StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "Corpus statistics");
  c_stats->add_option("--corpus", stats.corpus, "Text, caption or riddle lines")->required();
  c_stats->add_option("--mode", stats.mode, "Statistic")
      ->check(CLI::IsMember({"pos", "tokens", "lengths", "relations"}))
      ->capture_default_str();
  c_stats->add_option("--out", stats.out, "JSON output (- = stdout)")->capture_default_str();
  c_stats->add_option("--pos-lexicon", stats.lexicon, "POS lexicon TSV");
  c_stats->add_option("--top-k", stats.top_k, "Keep only the k most frequent keys");
  add_common(c_stats, common, false);

  MixArgs mix;
  auto* c_mix = app.add_subcommand("mix", "Emit a curriculum-mixed training stream");
  c_mix->add_option("--captions", mix.captions, "Caption JSON-lines")->required();
  c_mix->add_option("--riddles", mix.riddles, "Riddle JSON-lines")->required();
  c_mix->add_option("--out", mix.out, "Mixed JSON-lines output")->required();
  c_mix->add_option("--batch-size", mix.batch_size, "Records per batch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_mix->add_option("--steps", mix.steps, "Number of batches")->capture_default_str();
  c_mix->add_option("--p-start", mix.p_start, "Riddle share at the first batch")
      ->capture_default_str();
  c_mix->add_option("--p-end", mix.p_end, "Riddle share at the last batch")
      ->capture_default_str();
  add_common(c_mix, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << RIDDLEFORGE_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const CLI::App* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return kExitUsage;
  }

  try {
    if (c_ingest->parsed()) return cmd_ingest(ingest, common, c_ingest, err);
    if (c_augment->parsed()) return cmd_augment(augment, common, c_augment, err);
    if (c_bench->parsed()) return cmd_benchmark(bench, common, c_bench, err);
    if (c_eval->parsed()) return cmd_eval(eval, common, c_eval, out, err);
    if (c_stats->parsed()) return cmd_stats(stats, common, c_stats, out);
    if (c_mix->parsed()) return cmd_mix(mix, common, c_mix, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace riddleforge::cli
