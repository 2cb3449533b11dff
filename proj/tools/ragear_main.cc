// Copyright 2026 The ragear Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ragear: command-line front end for ingestion, embedding, querying,
// evaluation and the HTTP service.
//
// Exit status: 0 success, 2 usage or configuration error, 1 runtime failure.

#include <signal.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "ragear/agreement.h"
#include "ragear/embed.h"
#include "ragear/errors.h"
#include "ragear/ingest.h"
#include "ragear/judge.h"
#include "ragear/kg_store.h"
#include "ragear/metrics.h"
#include "ragear/pipeline.h"
#include "ragear/report.h"
#include "ragear/retrieval.h"
#include "ragear/run_file.h"
#include "ragear/scoring.h"
#include "ragear/service.h"
#include "ragear/service_config.h"
#include "ragear/text.h"

namespace fs = std::filesystem;
using namespace ragear;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Bad flags or configuration detected after CLI11 parsing.
class UsageError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// ---------------------------------------------------------------- helpers

std::unique_ptr<Embedder> embedder_from_spec(const std::string& spec,
                                             std::optional<std::size_t> dim_hint) {
  if (spec == "test" || spec.rfind("test:", 0) == 0) {
    std::size_t dim = dim_hint.value_or(EmbedderConfig{}.dim);
    if (spec.size() > 5) {
      try {
        dim = std::stoul(spec.substr(5));
      } catch (const std::exception&) {
        throw UsageError("bad embedder spec '" + spec + "'");
      }
    }
    EmbedderConfig cfg;
    cfg.kind = EmbedderKind::kTest;
    cfg.dim = dim;
    return make_embedder(cfg);
  }
  if (!fs::exists(spec)) throw UsageError("embedder config not found: " + spec);
  return make_embedder(EmbedderConfig::load(spec));
}

// Drops a trailing partial line left behind by an interrupted run.
void repair_tail(const fs::path& path) {
  std::string bytes = read_file(path);
  if (bytes.empty() || bytes.back() == '\n') return;
  auto cut = bytes.rfind('\n');
  fs::resize_file(path, cut == std::string::npos ? 0 : cut + 1);
}

struct EmbedOutcome {
  std::size_t written = 0;
  std::size_t skipped = 0;
};

// Appends vectors for the ids `out` does not hold yet, flushing after each
// batch so an interrupted run can resume.
EmbedOutcome append_embeddings(const fs::path& out, const Embedder& embedder,
                               const std::vector<std::string>& ids,
                               const std::vector<std::string>& inputs,
                               std::size_t batch) {
  std::set<std::string> done;
  bool fresh = !fs::exists(out) || fs::file_size(out) == 0;
  if (!fresh) {
    repair_tail(out);
    fresh = fs::file_size(out) == 0;
  }
  if (!fresh) {
    EmbeddingFile existing = read_embeddings(out);
    if (existing.dim != embedder.dim()) {
      throw DimensionError(out.string() + " holds dim " +
                           std::to_string(existing.dim) + " vectors, embedder has dim " +
                           std::to_string(embedder.dim()));
    }
    for (const auto& [id, _] : existing.rows) done.insert(id);
  }
  std::ofstream file(out, std::ios::app | std::ios::binary);
  if (!file) throw NotFoundError("cannot write " + out.string());
  if (fresh) {
    file << embeddings_header_line(embedder.dim(), to_string(embedder.kind())) << '\n';
  }
  EmbedOutcome outcome;
  std::vector<std::string> pending_ids, pending_inputs;
  auto flush = [&] {
    if (pending_ids.empty()) return;
    auto vectors = embedder.embed_passages(pending_inputs);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      file << embedding_line(pending_ids[i], vectors[i]) << '\n';
    }
    file.flush();
    outcome.written += pending_ids.size();
    pending_ids.clear();
    pending_inputs.clear();
  };
  std::set<std::string> queued;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (done.count(ids[i]) || !queued.insert(ids[i]).second) {
      ++outcome.skipped;
      continue;
    }
    pending_ids.push_back(ids[i]);
    pending_inputs.push_back(inputs[i]);
    if (pending_ids.size() >= batch) flush();
  }
  flush();
  if (!file) throw Error("write to " + out.string() + " failed");
  return outcome;
}

ConstraintSet parse_filters(const std::vector<std::string>& filters,
                            const KgStore& store) {
  ConstraintSet c;
  auto to_int = [](const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      int n = std::stoi(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
      return n;
    } catch (const std::exception&) {
      throw UsageError("filter " + key + " needs an integer, got '" + v + "'");
    }
  };
  for (const auto& f : filters) {
    auto eq = f.find('=');
    if (eq == std::string::npos) throw UsageError("filter '" + f + "' is not key=value");
    std::string key = f.substr(0, eq);
    std::string value = f.substr(eq + 1);
    if (key == "plan") {
      c.plan_id = value;
    } else if (key == "max_credits") {
      c.max_credits = to_int(key, value);
    } else if (key == "min_credits") {
      c.min_credits = to_int(key, value);
    } else if (key == "discipline") {
      c.discipline = value;
    } else if (key == "completed") {
      std::stringstream ss(value);
      for (std::string id; std::getline(ss, id, ',');) {
        if (!id.empty()) c.completed_course_ids.insert(id);
      }
    } else if (key == "prerequisites") {
      if (value != "true" && value != "false") {
        throw UsageError("filter prerequisites takes true or false");
      }
      c.require_prerequisites_met = value == "true";
    } else if (key == "student") {
      if (!store.students().empty()) {
        try {
          ConstraintSet s = store.constraints_for_student(value);
          c.plan_id = s.plan_id;
          c.completed_course_ids.insert(s.completed_course_ids.begin(),
                                        s.completed_course_ids.end());
          c.require_prerequisites_met = s.require_prerequisites_met;
          continue;
        } catch (const NotFoundError&) {
        }
      }
      throw ConstraintError("unknown student '" + value + "'");
    } else {
      throw UsageError("unknown filter key '" + key +
                       "' (plan, max_credits, min_credits, discipline, "
                       "completed, prerequisites, student)");
    }
  }
  return c;
}

struct SnapshotFlags {
  std::string catalogue;
  std::string chunks;
  std::string embeddings;
  std::string index;
  std::string metadata;
  std::string embedder = "test";
  int k = 200;
  std::optional<int> t_q;
  std::string stopwords;
};

void add_snapshot_flags(CLI::App* cmd, SnapshotFlags& f) {
  cmd->add_option("--catalogue", f.catalogue, "Catalogue JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--chunks", f.chunks, "Chunks JSONL")->check(CLI::ExistingFile);
  cmd->add_option("--embeddings", f.embeddings, "Chunk embeddings JSONL")->check(CLI::ExistingFile);
  cmd->add_option("--index", f.index, "Binary index built by 'ragear index'")->check(CLI::ExistingFile);
  cmd->add_option("--metadata-embeddings", f.metadata, "Course metadata embeddings JSONL")
      ->check(CLI::ExistingFile);
  cmd->add_option("--embedder", f.embedder,
                  "Embedder config JSON, or 'test' / 'test:DIM' for the hashing embedder");
  cmd->add_option("--k", f.k, "Evidence depth")->check(CLI::PositiveNumber);
  cmd->add_option("--t-q", f.t_q, "Fixed t_q (default: derived per query)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--stopwords", f.stopwords, "Stopword list for t_q")->check(CLI::ExistingFile);
}

Snapshot snapshot_from_flags(const SnapshotFlags& f) {
  if (f.embeddings.empty() == f.index.empty()) {
    throw UsageError("give exactly one of --embeddings or --index");
  }
  Snapshot snap;
  std::optional<fs::path> chunks;
  if (!f.chunks.empty()) chunks = f.chunks;
  auto store = std::make_shared<KgStore>(KgStore::load_catalogue(f.catalogue, chunks));
  snap.store = store;
  if (!f.index.empty()) {
    snap.index = std::make_shared<DenseIndex>(DenseIndex::load(f.index, *store));
  } else {
    EmbeddingFile file = read_embeddings(f.embeddings);
    snap.index = std::make_shared<DenseIndex>(DenseIndex::build(file.rows, *store));
  }
  snap.embedder = embedder_from_spec(f.embedder, snap.index->dim());
  auto meta = std::make_shared<CourseEmbeddings>();
  if (!f.metadata.empty()) *meta = course_embeddings_from(read_embeddings(f.metadata));
  snap.metadata = meta;
  snap.config.k = f.k;
  snap.config.t_q = f.t_q;
  if (!f.stopwords.empty()) snap.config.stopwords = read_word_list(f.stopwords);
  snap.check();
  return snap;
}

std::string clock(double seconds) {
  long s = static_cast<long>(seconds);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02ld:%02ld", s / 60, s % 60);
  return buf;
}

void print_result(const QueryResult& r, const KgStore& store, int top,
                  int evidence) {
  std::printf("query: %s\nmethod=%s t_q=%d k=%d candidates=%zu evidence=%zu\n",
              r.context.text.c_str(), r.ranking.method.c_str(), r.context.t_q,
              r.context.k, r.candidates.size(), r.evidence.items.size());
  if (r.candidates.empty()) {
    std::printf("no course satisfies the given constraints\n");
    return;
  }
  if (r.ranking.items.empty()) {
    std::printf("no course has supporting evidence for this query\n");
    return;
  }
  std::size_t n = std::min<std::size_t>(top, r.ranking.items.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& item = r.ranking.items[i];
    const auto& parts = r.breakdown[i];
    const Course& c = store.course(item.course_id);
    std::printf("%2zu. %-10s %s\n", i + 1, c.course_id.c_str(), c.title.c_str());
    std::printf("    score=%.6f  RS=%.6f  GE=%.6f  RE=%.6f  LC=%.6f\n", item.score,
                parts.rs, parts.global_evidence, parts.ranked_evidence,
                parts.lesson_coverage);
    std::size_t shown = std::min<std::size_t>(evidence, parts.supporting_chunks.size());
    for (std::size_t m = 0; m < shown; ++m) {
      const auto& ev = parts.supporting_chunks[m];
      ChunkContext ctx = store.resolve_chunk(ev.chunk_id);
      std::string text = ctx.chunk.text;
      if (utf8_length(text) > 90) {
        std::size_t cut = 90;
        while (cut < text.size() && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) ++cut;
        text = text.substr(0, cut) + "...";
      }
      std::printf("      #%-3d %.4f  %s [%s-%s]  %s\n", ev.rank, ev.score,
                  ctx.lesson.title.c_str(), clock(ctx.chunk.start_s).c_str(),
                  clock(ctx.chunk.end_s).c_str(), text.c_str());
    }
  }
}

std::vector<int> parse_cutoffs(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("bad cutoff list '" + text + "'");
    }
  }
  return out;
}

std::set<std::string> query_ids_of(const fs::path& queries) {
  std::set<std::string> ids;
  for (const auto& q : read_queries(queries)) ids.insert(q.query_id);
  return ids;
}

// ---------------------------------------------------------------- commands

struct IngestFlags {
  std::string transcripts;
  std::string out;
  ChunkingConfig chunking;
  std::string abbreviations;
};

int run_ingest(const IngestFlags& f) {
  SplitterOptions opts;
  if (!f.abbreviations.empty()) opts.abbreviations = read_word_list(f.abbreviations);
  f.chunking.validate();
  IngestResult result = ingest_corpus(f.transcripts, f.chunking, opts);
  std::ofstream out(f.out, std::ios::binary | std::ios::trunc);
  if (!out) throw NotFoundError("cannot write " + f.out);
  write_chunks_jsonl(out, result.chunks);
  out.close();
  if (!out) throw Error("write to " + f.out + " failed");
  std::cout << result.stats.to_json().dump() << '\n';
  return 0;
}

struct EmbedFlags {
  std::string chunks;
  std::string catalogue;
  std::string embedder;
  std::string out;
  std::size_t batch = 64;
};

int run_embed(const EmbedFlags& f) {
  auto embedder = embedder_from_spec(f.embedder, std::nullopt);
  std::vector<std::string> ids, inputs;
  for (const Chunk& c : read_chunks_jsonl(f.chunks)) {
    ids.push_back(c.chunk_id);
    inputs.push_back(embedder->kind() == EmbedderKind::kFile ? c.chunk_id : c.text);
  }
  auto outcome = append_embeddings(f.out, *embedder, ids, inputs, f.batch);
  std::cout << Json{{"written", outcome.written}, {"skipped", outcome.skipped}}.dump()
            << '\n';
  return 0;
}

int run_embed_metadata(const EmbedFlags& f) {
  auto embedder = embedder_from_spec(f.embedder, std::nullopt);
  KgStore store = KgStore::load_catalogue(f.catalogue);
  std::vector<std::string> ids, inputs;
  for (const Course& c : store.courses()) {
    ids.push_back(c.course_id);
    inputs.push_back(embedder->kind() == EmbedderKind::kFile ? c.course_id
                                                             : metadata_text(c));
  }
  auto outcome = append_embeddings(f.out, *embedder, ids, inputs, f.batch);
  std::cout << Json{{"written", outcome.written}, {"skipped", outcome.skipped}}.dump()
            << '\n';
  return 0;
}

struct QueryFlags {
  SnapshotFlags snap;
  std::string text;
  std::string queries;
  std::string method = "ragear";
  std::vector<std::string> filters;
  int top = 3;
  int evidence = 3;
  std::string out;
  std::string out_dir;
  bool json = false;
};

int run_query_cmd(const QueryFlags& f) {
  Snapshot snap = snapshot_from_flags(f.snap);
  ConstraintSet filters = parse_filters(f.filters, *snap.store);

  if (!f.text.empty()) {
    if (f.method == "all") throw UsageError("--method all needs --queries");
    QueryRequest req;
    req.text = f.text;
    req.method = parse_method(f.method);
    req.constraints = filters;
    QueryResult r = run_query(snap, req);
    if (f.json) {
      std::cout << recommendation_json(r, *snap.store, f.top, f.evidence).dump(2) << '\n';
    } else {
      print_result(r, *snap.store, f.top, f.evidence);
    }
    return 0;
  }

  std::vector<Method> methods;
  if (f.method == "all") {
    methods = {Method::kMetadata, Method::kSumP, Method::kRagear};
    if (snap.metadata->empty()) methods.erase(methods.begin());
    if (f.out_dir.empty()) throw UsageError("--method all needs --out-dir");
  } else {
    methods = {parse_method(f.method)};
  }
  auto queries = read_queries(f.queries);
  for (Method m : methods) {
    std::ostringstream run;
    for (QueryRequest q : queries) {
      q.method = m;
      if (!f.filters.empty()) q.constraints = filters;
      write_run(run, run_query(snap, q).ranking);
    }
    std::string target = f.out;
    if (!f.out_dir.empty()) {
      fs::create_directories(f.out_dir);
      target = (fs::path(f.out_dir) / ("run." + std::string(to_string(m)) + ".tsv")).string();
    }
    if (target.empty()) {
      std::cout << run.str();
    } else {
      std::ofstream out(target, std::ios::binary | std::ios::trunc);
      out << run.str();
      if (!out) throw Error("write to " + target + " failed");
    }
  }
  return 0;
}

struct EvalFlags {
  std::vector<std::string> runs;
  std::string qrels;
  std::string baseline;
  int threshold = 3;
  std::string cutoffs = "1,3,5";
  std::string queries;
  bool exp_gain = false;
  bool json = false;
};

int run_eval(const EvalFlags& f) {
  EvalConfig cfg;
  cfg.relevance_threshold = f.threshold;
  cfg.cutoffs = parse_cutoffs(f.cutoffs);
  cfg.exponential_gain = f.exp_gain;
  cfg.validate();
  RunSet runs;
  for (const auto& path : f.runs) merge_runs(runs, read_run_file(path));
  Qrels qrels = Qrels::load(f.qrels);
  std::optional<std::set<std::string>> universe;
  if (!f.queries.empty()) universe = query_ids_of(f.queries);
  MetricReport report = compare_methods(runs, qrels, cfg, f.baseline, universe);
  if (f.json) {
    std::cout << report.to_json().dump(2) << '\n';
  } else {
    std::cout << report.to_table();
  }
  return 0;
}

struct AgreeFlags {
  std::string left;
  std::string right;
  double rbo_p = 0.9;
  int threshold = 3;
  bool json = false;
};

int run_agree(const AgreeFlags& f) {
  EvalConfig cfg;
  cfg.rbo_p = f.rbo_p;
  cfg.relevance_threshold = f.threshold;
  cfg.validate();
  AgreementReport report = agree(Qrels::load(f.left), Qrels::load(f.right), cfg);
  if (f.json) {
    std::cout << report.to_json().dump(2) << '\n';
  } else {
    std::cout << report.to_table();
  }
  return 0;
}

struct JudgeFlags {
  std::vector<std::string> runs;
  std::string queries;
  std::string catalogue;
  std::string judge;
  std::string summaries;
  std::string out;
  int depth = 5;
};

std::unique_ptr<JudgeClient> judge_from_config(const fs::path& path) {
  Json j = load_json_file(path);
  std::string kind;
  try {
    kind = required<std::string>(j, "kind", "judge config");
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  if (kind == "mock") {
    MockJudge::Table table;
    for (const Json& row : j.value("table", Json::array())) {
      table[{required<std::string>(row, "query_id", "judge table"),
             required<std::string>(row, "course_id", "judge table")}] =
          required<int>(row, "score", "judge table");
    }
    return std::make_unique<MockJudge>(std::move(table));
  }
  if (kind == "file") {
    fs::path qrels = required<std::string>(j, "qrels", "judge config");
    if (qrels.is_relative()) qrels = path.parent_path() / qrels;
    return std::make_unique<FileJudge>(Qrels::load(qrels));
  }
  if (kind == "http") return std::make_unique<HttpJudge>(HttpJudgeConfig::from_json(j));
  throw UsageError("judge kind must be mock, file or http");
}

int run_judge(const JudgeFlags& f) {
  auto judge = judge_from_config(f.judge);
  KgStore store = KgStore::load_catalogue(f.catalogue);
  std::map<std::string, std::string> summaries;
  if (!f.summaries.empty()) {
    summaries = load_json_file(f.summaries).get<std::map<std::string, std::string>>();
  }
  RunSet runs;
  for (const auto& path : f.runs) merge_runs(runs, read_run_file(path));

  Qrels existing;
  if (fs::exists(f.out)) {
    repair_tail(f.out);
    existing = Qrels::load(f.out);
  }
  std::ofstream out(f.out, std::ios::app | std::ios::binary);
  if (!out) throw NotFoundError("cannot write " + f.out);
  std::size_t written = 0;
  for (const QueryRequest& q : read_queries(f.queries)) {
    // Pool the top `depth` courses of every method, first-seen order.
    std::vector<JudgeCandidate> pool;
    std::set<std::string> pooled;
    for (const auto& [method, run] : runs) {
      auto it = run.find(q.query_id);
      if (it == run.end()) continue;
      const auto& items = it->second.items;
      for (std::size_t i = 0; i < items.size() && i < static_cast<std::size_t>(f.depth); ++i) {
        const std::string& id = items[i].course_id;
        if (existing.for_query(q.query_id).count(id) || !pooled.insert(id).second) continue;
        const Course& c = store.course(id);
        auto s = summaries.find(id);
        pool.push_back({id, c.title, s != summaries.end() ? s->second : c.description});
      }
    }
    for (const Judgment& j : judge_rank_list(q.query_id, q.text, pool, *judge)) {
      out << j.query_id << ' ' << j.course_id << ' ' << j.score << '\n';
      out.flush();
      ++written;
    }
  }
  if (!out) throw Error("write to " + f.out + " failed");
  std::cout << Json{{"written", written}, {"already_judged", existing.size()}}.dump() << '\n';
  return 0;
}

struct IndexFlags {
  std::string catalogue;
  std::string chunks;
  std::string embeddings;
  std::string out;
};

int run_index(const IndexFlags& f) {
  std::optional<fs::path> chunks;
  if (!f.chunks.empty()) chunks = f.chunks;
  KgStore store = KgStore::load_catalogue(f.catalogue, chunks);
  EmbeddingFile file = read_embeddings(f.embeddings);
  DenseIndex index = DenseIndex::build(file.rows, store);
  index.save(f.out);
  std::cout << Json{{"chunks", index.size()}, {"dim", index.dim()}}.dump() << '\n';
  return 0;
}

struct ServeFlags {
  std::string config;
  std::optional<int> port;
  std::string host;
};

int run_serve(const ServeFlags& f) {
  ServiceConfig cfg;
  try {
    cfg = ServiceConfig::load(f.config);
  } catch (const Error& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
  if (f.port) cfg.port = *f.port;
  if (!f.host.empty()) cfg.host = f.host;

  // Signals are consumed by a dedicated sigwait thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGHUP);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ServiceOptions opts;
  opts.evidence_cap = cfg.evidence_cap;
  opts.cors_origin = cfg.cors_origin;
  if (cfg.static_dir) opts.static_dir = cfg.static_dir->string();
  opts.log = &std::cerr;
  RecommenderService service(opts);
  httplib::Server server;
  service.mount(server);

  if (!server.bind_to_port(cfg.host, cfg.port)) {
    std::cerr << "ragear: cannot listen on " << cfg.host << ":" << cfg.port
              << " (port in use?)\n";
    return kExitUsage;
  }
  std::thread listener([&] { server.listen_after_bind(); });

  std::atomic<bool> stopping{false};
  std::thread signal_thread([&] {
    while (true) {
      int sig = 0;
      sigwait(&signals, &sig);
      if (sig == SIGHUP) {
        try {
          service.set_snapshot(std::make_shared<Snapshot>(load_snapshot(ServiceConfig::load(f.config))));
          std::cerr << Json{{"event", "reloaded"}}.dump() << '\n';
        } catch (const std::exception& e) {
          std::cerr << Json{{"event", "reload_failed"}, {"error", e.what()}}.dump() << '\n';
        }
        continue;
      }
      stopping = true;
      std::cerr << Json{{"event", "shutdown"}, {"signal", sig}}.dump() << '\n';
      server.stop();
      return;
    }
  });

  server.wait_until_ready();
  int status = 0;
  try {
    service.set_snapshot(std::make_shared<Snapshot>(load_snapshot(cfg)));
    std::cerr << Json{{"event", "ready"},
                      {"host", cfg.host},
                      {"port", cfg.port},
                      {"chunks", service.snapshot()->index->size()}}
                     .dump()
              << '\n';
  } catch (const std::exception& e) {
    std::cerr << "ragear: loading snapshot failed: " << e.what() << '\n';
    status = dynamic_cast<const InvalidArgument*>(&e) ||
                     dynamic_cast<const NotFoundError*>(&e) ||
                     dynamic_cast<const ParseError*>(&e) ||
                     dynamic_cast<const IntegrityError*>(&e) ||
                     dynamic_cast<const DimensionError*>(&e)
                 ? kExitUsage
                 : kExitRuntime;
    stopping = true;
    server.stop();
    pthread_kill(signal_thread.native_handle(), SIGTERM);
  }
  listener.join();
  signal_thread.join();
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ragear: transcript-grounded course recommendation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ragear 0.1.0");
  int status = 0;

  IngestFlags ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Chunk transcript JSON files into chunks.jsonl");
  c_ingest->add_option("--transcripts", ingest.transcripts, "Directory of transcript JSON")
      ->required()->check(CLI::ExistingDirectory);
  c_ingest->add_option("--out", ingest.out, "Output chunks JSONL")->required();
  c_ingest->add_option("--min", ingest.chunking.min_chars, "Minimum chunk length (chars)");
  c_ingest->add_option("--target", ingest.chunking.target_chars, "Target chunk length (chars)");
  c_ingest->add_option("--max", ingest.chunking.max_chars, "Maximum chunk length (chars)");
  c_ingest->add_option("--abbreviations", ingest.abbreviations, "Abbreviation list")
      ->check(CLI::ExistingFile);
  c_ingest->callback([&] { status = run_ingest(ingest); });

  EmbedFlags embed;
  auto* c_embed = app.add_subcommand("embed", "Embed chunks (resumable)");
  c_embed->add_option("--chunks", embed.chunks, "Chunks JSONL")->required()->check(CLI::ExistingFile);
  c_embed->add_option("--embedder", embed.embedder, "Embedder config JSON, 'test' or 'test:DIM'")
      ->required();
  c_embed->add_option("--out", embed.out, "Embeddings JSONL (appended)")->required();
  c_embed->add_option("--batch", embed.batch, "Texts per request")->check(CLI::PositiveNumber);
  c_embed->callback([&] { status = run_embed(embed); });

  EmbedFlags embed_meta;
  auto* c_meta = app.add_subcommand("embed-metadata", "Embed course metadata text (resumable)");
  c_meta->add_option("--catalogue", embed_meta.catalogue, "Catalogue JSON")
      ->required()->check(CLI::ExistingFile);
  c_meta->add_option("--embedder", embed_meta.embedder, "Embedder config JSON, 'test' or 'test:DIM'")
      ->required();
  c_meta->add_option("--out", embed_meta.out, "Embeddings JSONL (appended)")->required();
  c_meta->add_option("--batch", embed_meta.batch, "Texts per request")->check(CLI::PositiveNumber);
  c_meta->callback([&] { status = run_embed_metadata(embed_meta); });

  QueryFlags query;
  auto* c_query = app.add_subcommand("query", "Rank courses for one query or a queries file");
  add_snapshot_flags(c_query, query.snap);
  auto* text_opt = c_query->add_option("--text", query.text, "Query text");
  auto* queries_opt = c_query->add_option("--queries", query.queries, "Queries JSONL (writes a run file)")
                          ->check(CLI::ExistingFile);
  text_opt->excludes(queries_opt);
  c_query->add_option("--method", query.method, "ragear, sump, metadata, or all (batch only)");
  c_query->add_option("--filter", query.filters,
                      "key=value constraint; keys: plan, max_credits, min_credits, "
                      "discipline, completed, prerequisites, student");
  c_query->add_option("--top", query.top, "Courses to print")->check(CLI::PositiveNumber);
  c_query->add_option("--evidence", query.evidence, "Evidence chunks per course")
      ->check(CLI::NonNegativeNumber);
  c_query->add_option("--out", query.out, "Run file (batch mode; default stdout)");
  c_query->add_option("--out-dir", query.out_dir, "Directory for run.<method>.tsv files");
  c_query->add_flag("--json", query.json, "JSON output for --text");
  c_query->callback([&] {
    if (query.text.empty() && query.queries.empty()) {
      throw UsageError("one of --text or --queries is required");
    }
    status = run_query_cmd(query);
  });

  EvalFlags eval;
  auto* c_eval = app.add_subcommand("eval", "Score run files against qrels");
  c_eval->add_option("--runs", eval.runs, "Run TSV files")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--qrels", eval.qrels, "Judgments file")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--baseline", eval.baseline, "Method the deltas are relative to")->required();
  c_eval->add_option("--threshold", eval.threshold, "Relevance threshold");
  c_eval->add_option("--cutoffs", eval.cutoffs, "Comma-separated cutoffs");
  c_eval->add_option("--queries", eval.queries, "Queries JSONL; runs may omit queries from it")
      ->check(CLI::ExistingFile);
  c_eval->add_flag("--exp-gain", eval.exp_gain, "nDCG gain 2^s - 1");
  c_eval->add_flag("--json", eval.json, "JSON report");
  c_eval->callback([&] { status = run_eval(eval); });

  AgreeFlags agree_flags;
  auto* c_agree = app.add_subcommand("agree", "Agreement between two judges");
  c_agree->add_option("--left", agree_flags.left, "First qrels")->required()->check(CLI::ExistingFile);
  c_agree->add_option("--right", agree_flags.right, "Second qrels")->required()->check(CLI::ExistingFile);
  c_agree->add_option("--rbo-p", agree_flags.rbo_p, "RBO persistence");
  c_agree->add_option("--threshold", agree_flags.threshold, "Relevance threshold");
  c_agree->add_flag("--json", agree_flags.json, "JSON report");
  c_agree->callback([&] { status = run_agree(agree_flags); });

  JudgeFlags judge;
  auto* c_judge = app.add_subcommand("judge", "Collect judgments for pooled run results");
  c_judge->add_option("--runs", judge.runs, "Run TSV files")->required()->check(CLI::ExistingFile);
  c_judge->add_option("--queries", judge.queries, "Queries JSONL")->required()->check(CLI::ExistingFile);
  c_judge->add_option("--catalogue", judge.catalogue, "Catalogue JSON")
      ->required()->check(CLI::ExistingFile);
  c_judge->add_option("--judge", judge.judge, "Judge config JSON")->required()->check(CLI::ExistingFile);
  c_judge->add_option("--summaries", judge.summaries, "JSON map course_id -> summary")
      ->check(CLI::ExistingFile);
  c_judge->add_option("--depth", judge.depth, "Courses per ranking to judge")
      ->check(CLI::PositiveNumber);
  c_judge->add_option("--out", judge.out, "Qrels file (appended)")->required();
  c_judge->callback([&] { status = run_judge(judge); });

  IndexFlags index;
  auto* c_index = app.add_subcommand("index", "Build the binary retrieval index");
  c_index->add_option("--catalogue", index.catalogue, "Catalogue JSON")
      ->required()->check(CLI::ExistingFile);
  c_index->add_option("--chunks", index.chunks, "Chunks JSONL")->check(CLI::ExistingFile);
  c_index->add_option("--embeddings", index.embeddings, "Chunk embeddings JSONL")
      ->required()->check(CLI::ExistingFile);
  c_index->add_option("--out", index.out, "Index file")->required();
  c_index->callback([&] { status = run_index(index); });

  ServeFlags serve;
  auto* c_serve = app.add_subcommand("serve", "Run the HTTP service");
  c_serve->add_option("--config", serve.config, "Service config JSON")->required();
  c_serve->add_option("--port", serve.port, "Override the configured port");
  c_serve->add_option("--host", serve.host, "Override the configured host");
  c_serve->callback([&] {
    if (!fs::exists(serve.config)) throw UsageError("config not found: " + serve.config);
    status = run_serve(serve);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "ragear: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConstraintError& e) {
    std::cerr << "ragear: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IngestError& e) {
    std::cerr << "ragear: " << e.what() << '\n';
    for (const auto& failure : e.failures()) std::cerr << "  " << failure << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "ragear: " << e.what() << '\n';
    return kExitRuntime;
  }
  return status;
}
