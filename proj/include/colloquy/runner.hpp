#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "colloquy/dedup.hpp"
#include "colloquy/domain.hpp"
#include "colloquy/engine.hpp"
#include "colloquy/errors.hpp"
#include "colloquy/expander.hpp"
#include "colloquy/gateway.hpp"
#include "colloquy/mock_provider.hpp"
#include "colloquy/paper_bank.hpp"
#include "colloquy/report.hpp"
#include "colloquy/tournament.hpp"
#include "colloquy/util.hpp"

namespace colloquy {

struct RunnerOptions {
  std::filesystem::path run_dir;
  bool resume = true;
  int concurrency = 8;                    // worker threads for generate
  std::vector<std::string> topic_filter;  // empty = all manifest topics
  std::vector<std::string> config_filter;
  std::vector<int> seed_filter;  // empty = all seeds_per_cell
  RemoteFetcher remote_fetcher;  // used when bank.source == "remote"
  std::ostream* log = nullptr;
};

struct StageStats {
  int executed = 0;
  int skipped = 0;
  int failed = 0;
};

// Drives a full run: builds paper banks, generates dialogue transcripts cell
// by cell (a cell is one topic x config, all seeds), deduplicates idea pools,
// expands survivors into proposals, ranks candidate pools against the
// baseline, and renders the report. Every artifact lives under the run
// directory; re-running any stage skips work whose outputs already exist, so
// an interrupted run can be resumed by invoking it again.
class Runner {
 public:
  Runner(RunManifest manifest, RunnerOptions options, std::shared_ptr<Provider> provider)
      : options_(std::move(options)), provider_(std::move(provider)) {
    namespace fs = std::filesystem;
    fs::create_directories(options_.run_dir);

    // Sweep temp files left by a killed process so a resumed run converges
    // on the same bytes as an uninterrupted one.
    std::vector<fs::path> stale;
    for (auto it = fs::recursive_directory_iterator(options_.run_dir);
         it != fs::recursive_directory_iterator(); ++it)
      if (it->is_regular_file() && it->path().extension() == ".tmp") stale.push_back(it->path());
    for (const auto& p : stale) fs::remove(p);

    // The manifest stored in the run dir is authoritative for resumed runs;
    // a fresh dir records the one we were given.
    auto manifest_path = options_.run_dir / "manifest.json";
    if (fs::exists(manifest_path)) {
      manifest_ = Json::parse(read_file(manifest_path)).get<RunManifest>();
      log("using manifest already present in " + options_.run_dir.string());
    } else {
      manifest_ = std::move(manifest);
      auto violations = validate_manifest(manifest_);
      if (!violations.empty()) {
        std::string msg = "invalid manifest:";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw std::invalid_argument(msg);
      }
      Json j = manifest_;
      atomic_write_file(manifest_path, j.dump(2) + "\n");
    }

    // A fresh invocation starts with an empty failure ledger.
    fs::remove(options_.run_dir / "failures.jsonl");

    GatewayOptions gopt;
    gopt.max_concurrent = manifest_.provider.max_concurrent;
    gopt.embed_batch = manifest_.provider.embed_batch;
    gopt.jitter_seed = manifest_.provider.mock_seed;
    gateway_ = std::make_unique<Gateway>(provider_, gopt);

    load_state();

    if (const char* abort_env = std::getenv("COLLOQUY_ABORT_AFTER_CELLS"))
      abort_after_cells_ = std::atoi(abort_env);
  }

  const RunManifest& manifest() const { return manifest_; }
  const std::filesystem::path& run_dir() const { return options_.run_dir; }
  Gateway& gateway() { return *gateway_; }
  int failures() const { return failure_count_.load(); }

  static std::string cell_key(const std::string& topic_id, const std::string& config_id) {
    return topic_id + "/" + config_id;
  }

  // -------------------------------------------------------------------------
  // stages

  StageStats stage_bank() {
    StageStats stats;
    for (const auto& topic : topics()) {
      bool cached = std::filesystem::exists(bank_cache_path(options_.run_dir, topic.id));
      PaperBank bank = build_bank(topic, manifest_.bank, options_.run_dir, options_.remote_fetcher);
      banks_[topic.id] = std::move(bank);
      cached ? ++stats.skipped : ++stats.executed;
    }
    log("bank: built " + std::to_string(stats.executed) + ", cached " +
        std::to_string(stats.skipped));
    return stats;
  }

  StageStats stage_generate() {
    stage_bank();
    StageStats stats;
    const std::vector<Topic> cell_topics = topics();
    const std::vector<DialogueConfig> cell_configs = configs();
    std::vector<std::pair<const Topic*, const DialogueConfig*>> cells;
    for (const auto& topic : cell_topics)
      for (const auto& cfg : cell_configs) cells.emplace_back(&topic, &cfg);

    std::atomic<std::size_t> next{0};
    std::mutex stats_mu;
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        CellOutcome outcome = run_cell(*cells[i].first, *cells[i].second);
        std::lock_guard<std::mutex> lock(stats_mu);
        switch (outcome) {
          case CellOutcome::Executed: ++stats.executed; break;
          case CellOutcome::Skipped: ++stats.skipped; break;
          case CellOutcome::Failed: ++stats.failed; break;
        }
      }
    };
    int n_workers = std::max(1, std::min<int>(options_.concurrency, (int)cells.size()));
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    log("generate: executed " + std::to_string(stats.executed) + " cells, skipped " +
        std::to_string(stats.skipped) + ", failed " + std::to_string(stats.failed));
    return stats;
  }

  StageStats stage_dedup() {
    return for_each_pool("dedup", [&](const Topic& topic, const DialogueConfig& cfg,
                                      const std::filesystem::path& out) {
      std::vector<IdeaRecord> ideas = load_pool_ideas(topic, cfg);
      embed_ideas(ideas, *gateway_, manifest_.provider.embed_model);
      DedupReport report = dedup(ideas, manifest_.dedup_threshold);
      Json j = report;
      atomic_write_file(out, j.dump(2) + "\n");
    });
  }

  StageStats stage_expand() {
    return for_each_pool(
        "expand",
        [&](const Topic& topic, const DialogueConfig& cfg, const std::filesystem::path& out) {
          auto report_path = options_.run_dir / "dedup" / (pool_stem(topic.id, cfg.id) + ".json");
          if (!std::filesystem::exists(report_path))
            throw MissingStage("dedup report for " + pool_stem(topic.id, cfg.id));
          DedupReport report = Json::parse(read_file(report_path)).get<DedupReport>();

          std::vector<IdeaRecord> ideas = load_pool_ideas(topic, cfg);
          std::map<std::string, const IdeaRecord*> by_id;
          for (auto& idea : ideas) by_id[idea.origin.id()] = &idea;
          std::vector<IdeaRecord> survivors;
          for (const auto& id : report.survivor_ids) {
            auto it = by_id.find(id);
            if (it == by_id.end()) throw MissingStage("idea " + id + " named by dedup report");
            IdeaRecord s = *it->second;
            s.survived_dedup = true;
            survivors.push_back(std::move(s));
          }
          ExpandContext ctx;
          ctx.decoding = manifest_.decoding;
          ctx.chat_model = manifest_.provider.chat_model;
          expand_pool(survivors, topic, *gateway_, ctx, out);
        },
        /*subdir=*/"proposals", /*extension=*/".jsonl",
        /*skip_when_exists=*/false);  // expand_pool is itself incremental
  }

  StageStats stage_rank() {
    StageStats stats;
    for (const auto& topic : topics()) {
      std::vector<Proposal> baseline;  // loaded lazily, shared across configs
      bool baseline_loaded = false;
      for (const auto& cfg : configs()) {
        if (cfg.id == manifest_.baseline_config_id) continue;
        auto out = options_.run_dir / "tournament" / (pool_stem(topic.id, cfg.id) + ".json");
        if (options_.resume && std::filesystem::exists(out)) {
          ++stats.skipped;
          continue;
        }
        try {
          if (!baseline_loaded) {
            baseline = load_proposals(topic.id, manifest_.baseline_config_id);
            baseline_loaded = true;
          }
          std::vector<Proposal> candidate = load_proposals(topic.id, cfg.id);
          std::vector<Proposal> proposals = baseline;
          proposals.insert(proposals.end(), candidate.begin(), candidate.end());

          TournamentSpec spec;
          spec.topic_id = topic.id;
          spec.topic_description = topic.description;
          for (const auto& p : baseline) spec.baseline_pool.push_back(p.proposal_id);
          for (const auto& p : candidate) spec.candidate_pool.push_back(p.proposal_id);
          spec.rounds = manifest_.tournament_rounds;
          spec.judge_model = manifest_.provider.judge_model;
          spec.order_swap = manifest_.order_swap;
          spec.judge_decoding = manifest_.judge_decoding;
          spec.seed = mix64(fnv1a64(topic.id) ^ mix64(fnv1a64(cfg.id)) ^
                            manifest_.provider.mock_seed);
          TournamentResult result = run_tournament(spec, proposals, *gateway_);

          std::filesystem::create_directories(out.parent_path());
          Json j = result;
          atomic_write_file(out, j.dump(2) + "\n");
          ++stats.executed;
        } catch (const MissingStage& e) {
          ++stats.failed;
          record_failure("rank", pool_stem(topic.id, cfg.id), e.what());
        }
      }
    }
    if (stats.executed + stats.skipped == 0 && stats.failed > 0)
      throw MissingStage("proposals for every requested tournament");
    log("rank: executed " + std::to_string(stats.executed) + ", skipped " +
        std::to_string(stats.skipped) + ", failed " + std::to_string(stats.failed));
    return stats;
  }

  Report stage_report() {
    Report report = build_report(manifest_, options_.run_dir);
    auto dir = options_.run_dir / "report";
    std::filesystem::create_directories(dir);
    atomic_write_file(dir / "report.txt", render_report_text(report));
    atomic_write_file(dir / "report.csv", render_report_csv(report));
    atomic_write_file(dir / "report.json", report_json(report).dump(2) + "\n");
    log("report: wrote report.txt, report.csv, report.json");
    return report;
  }

  void stage_all() {
    stage_generate();
    stage_dedup();
    stage_expand();
    stage_rank();
    stage_report();
  }

  // ---------------------------------------------------------------------
  // shared loading helpers (also used by tests)

  std::vector<IdeaRecord> load_pool_ideas(const Topic& topic, const DialogueConfig& cfg) const {
    std::vector<IdeaRecord> ideas;
    for (int seed = 0; seed < manifest_.seeds_per_cell; ++seed) {
      auto p = transcript_path(topic.id, cfg.id, seed);
      if (!std::filesystem::exists(p))
        throw MissingStage("transcript " + p.string() + " for pool " +
                           pool_stem(topic.id, cfg.id));
      Transcript t = Json::parse(read_file(p)).get<Transcript>();
      for (auto& idea : t.final_ideas) ideas.push_back(std::move(idea));
    }
    return ideas;
  }

  std::vector<Proposal> load_proposals(const std::string& topic_id,
                                       const std::string& config_id) const {
    auto p = options_.run_dir / "proposals" / (pool_stem(topic_id, config_id) + ".jsonl");
    if (!std::filesystem::exists(p))
      throw MissingStage("proposals for " + pool_stem(topic_id, config_id));
    std::vector<Proposal> out;
    for (const auto& line : split_lines(read_file(p))) {
      if (trim(line).empty()) continue;
      out.push_back(Json::parse(line).get<Proposal>());
    }
    if (out.empty()) throw MissingStage("proposals for " + pool_stem(topic_id, config_id));
    return out;
  }

  std::filesystem::path transcript_path(const std::string& topic_id, const std::string& config_id,
                                        int seed) const {
    char name[32];
    std::snprintf(name, sizeof name, "seed%02d.json", seed);
    return options_.run_dir / "transcripts" / topic_id / config_id / name;
  }

 private:
  enum class CellOutcome { Executed, Skipped, Failed };

  std::vector<Topic> topics() const {
    if (options_.topic_filter.empty()) return manifest_.topics;
    std::vector<Topic> out;
    for (const auto& t : manifest_.topics)
      if (std::find(options_.topic_filter.begin(), options_.topic_filter.end(), t.id) !=
          options_.topic_filter.end())
        out.push_back(t);
    if (out.empty()) throw std::invalid_argument("topic filter matches no manifest topic");
    return out;
  }

  std::vector<DialogueConfig> configs() const {
    if (options_.config_filter.empty()) return manifest_.configs;
    std::vector<DialogueConfig> out;
    for (const auto& c : manifest_.configs)
      if (std::find(options_.config_filter.begin(), options_.config_filter.end(), c.id) !=
          options_.config_filter.end())
        out.push_back(c);
    if (out.empty()) throw std::invalid_argument("config filter matches no manifest config");
    return out;
  }

  std::vector<int> seeds() const {
    if (!options_.seed_filter.empty()) return options_.seed_filter;
    std::vector<int> out;
    for (int s = 0; s < manifest_.seeds_per_cell; ++s) out.push_back(s);
    return out;
  }

  void log(const std::string& line) const {
    if (options_.log) (*options_.log) << line << "\n";
  }

  // ---------------------------------------------------------------------
  // generate internals

  CellOutcome run_cell(const Topic& topic, const DialogueConfig& cfg) {
    namespace fs = std::filesystem;
    const std::string key = cell_key(topic.id, cfg.id);
    const std::vector<int> cell_seeds = seeds();

    bool all_present = true;
    for (int seed : cell_seeds)
      if (!fs::exists(transcript_path(topic.id, cfg.id, seed))) {
        all_present = false;
        break;
      }
    if (options_.resume && all_present && state_done(key)) return CellOutcome::Skipped;

    const PaperBank& bank = banks_.at(topic.id);
    std::vector<std::string> prior_names;
    int attempts_left = 3;

    for (int seed : cell_seeds) {
      auto path = transcript_path(topic.id, cfg.id, seed);
      if (options_.resume && fs::exists(path)) {
        Transcript t = Json::parse(read_file(path)).get<Transcript>();
        for (const auto& idea : t.final_ideas) prior_names.push_back(idea.idea_name);
        continue;
      }

      TrialContext ctx;
      ctx.decoding = manifest_.decoding;
      ctx.chat_model = manifest_.provider.chat_model;
      ctx.examples_text = manifest_.examples_text;
      ctx.method_word = manifest_.method_word;
      if (manifest_.cumulative_context) ctx.existing_ideas = joined_names(prior_names);

      bool done = false;
      while (!done) {
        try {
          Transcript t = run_trial(cfg, topic, seed, *gateway_, bank, ctx);
          fs::create_directories(path.parent_path());
          Json j = t;
          atomic_write_file(path, j.dump(2) + "\n");
          for (const auto& idea : t.final_ideas) prior_names.push_back(idea.idea_name);
          done = true;
        } catch (const Error& e) {
          if (--attempts_left <= 0) {
            record_failure("generate", key + "/seed" + std::to_string(seed), e.what());
            return CellOutcome::Failed;
          }
        }
      }
    }

    if (static_cast<int>(cell_seeds.size()) == manifest_.seeds_per_cell)
      mark_cell_done(key, cell_checksum(topic.id, cfg.id, cell_seeds));
    return CellOutcome::Executed;
  }

  std::string joined_names(const std::vector<std::string>& names) const {
    constexpr std::size_t kMaxNames = 100;  // most recent names only
    std::size_t start = names.size() > kMaxNames ? names.size() - kMaxNames : 0;
    std::string out;
    for (std::size_t i = start; i < names.size(); ++i) {
      if (!out.empty()) out += "\n";
      out += names[i];
    }
    return out;
  }

  std::string cell_checksum(const std::string& topic_id, const std::string& config_id,
                            const std::vector<int>& cell_seeds) const {
    std::uint64_t h = fnv1a64("cell");
    for (int seed : cell_seeds) {
      auto p = transcript_path(topic_id, config_id, seed);
      h = mix64(h ^ fnv1a64(read_file(p)));
    }
    return to_hex(h);
  }

  // ---------------------------------------------------------------------
  // pool-stage driver shared by dedup and expand

  template <typename Fn>
  StageStats for_each_pool(const std::string& stage, Fn&& fn, const std::string& subdir = "dedup",
                           const std::string& extension = ".json", bool skip_when_exists = true) {
    StageStats stats;
    for (const auto& topic : topics()) {
      for (const auto& cfg : configs()) {
        auto out = options_.run_dir / subdir / (pool_stem(topic.id, cfg.id) + extension);
        if (skip_when_exists && options_.resume && std::filesystem::exists(out)) {
          ++stats.skipped;
          continue;
        }
        try {
          std::filesystem::create_directories(out.parent_path());
          fn(topic, cfg, out);
          ++stats.executed;
        } catch (const MissingStage& e) {
          ++stats.failed;
          record_failure(stage, pool_stem(topic.id, cfg.id), e.what());
        }
      }
    }
    if (stats.executed + stats.skipped == 0 && stats.failed > 0)
      throw MissingStage("inputs for every requested " + stage + " pool");
    log(stage + ": executed " + std::to_string(stats.executed) + ", skipped " +
        std::to_string(stats.skipped) + ", failed " + std::to_string(stats.failed));
    return stats;
  }

  // ---------------------------------------------------------------------
  // state + ledger

  void load_state() {
    auto p = options_.run_dir / "state.json";
    if (!std::filesystem::exists(p)) return;
    Json j = Json::parse(read_file(p));
    const Json cells = j.value("cells", Json::object());
    for (const auto& [key, cell] : cells.items()) state_[key] = cell.value("checksum", "");
  }

  bool state_done(const std::string& key) {
    std::lock_guard<std::mutex> lock(state_mu_);
    return state_.count(key) > 0;
  }

  void mark_cell_done(const std::string& key, const std::string& checksum) {
    std::unique_lock<std::mutex> lock(state_mu_);
    state_[key] = checksum;
    Json cells = Json::object();
    for (const auto& [k, v] : state_)
      cells[k] = Json{{"status", "done"}, {"checksum", v}};
    Json j = Json{{"layout_version", manifest_.layout_version}, {"cells", cells}};
    atomic_write_file(options_.run_dir / "state.json", j.dump(2) + "\n");
    ++completed_cells_;
    int completed = completed_cells_;
    lock.unlock();
    if (abort_after_cells_ >= 0 && completed >= abort_after_cells_)
      std::_Exit(17);  // test hook: simulate a hard kill mid-run
  }

  void record_failure(const std::string& stage, const std::string& unit,
                      const std::string& message) {
    std::lock_guard<std::mutex> lock(ledger_mu_);
    ++failure_count_;
    Json j = Json{{"stage", stage}, {"unit", unit}, {"error", message}};
    std::ofstream out(options_.run_dir / "failures.jsonl", std::ios::app);
    out << j.dump() << "\n";
    log("FAIL [" + stage + "] " + unit + ": " + message);
  }

  RunnerOptions options_;
  std::shared_ptr<Provider> provider_;
  RunManifest manifest_;
  std::unique_ptr<Gateway> gateway_;
  std::map<std::string, PaperBank> banks_;

  std::mutex state_mu_;
  std::map<std::string, std::string> state_;  // cell key -> checksum
  int completed_cells_ = 0;
  int abort_after_cells_ = -1;

  std::mutex ledger_mu_;
  std::atomic<int> failure_count_{0};
};

// Provider factory used by the command-line front end and the test harness.
inline std::shared_ptr<Provider> make_mock_provider(const RunManifest& manifest) {
  MockOptions opt;
  opt.seed = manifest.provider.mock_seed;
  return std::make_shared<MockProvider>(opt);
}

}  // namespace colloquy
