// Acceptance harness: ten go/no-go checks over the whole system, run fully
// offline against the deterministic mock provider. Each criterion prints one
// PASS/FAIL line; the process exits nonzero if any criterion fails.
//
// Tolerances and limits are pinned here, in code:
//   criterion 1: full grid wall-clock limit          kGridTimeLimitS  = 300 s
//   criterion 2: randomized trials per configuration kTrialsPerConfig = 100
//   criterion 3: random pools checked against oracle kOraclePools     = 50
//   criterion 4: cosine agreement tolerance          kCosineTol       = 1e-10
//   criterion 6: win-rate window under order swap    0.5 +/- kWinRateTol (0.05)

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <random>
#include <regex>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "colloquy/colloquy.hpp"

using namespace colloquy;
namespace fs = std::filesystem;

namespace {

constexpr double kGridTimeLimitS = 300.0;
constexpr int kTrialsPerConfig = 100;
constexpr int kOraclePools = 50;
constexpr double kCosineTol = 1e-10;
constexpr double kWinRateTol = 0.05;

int g_failed = 0;

void verdict(int n, bool ok, const std::string& detail) {
  std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

struct TempTree {
  fs::path path;
  explicit TempTree(const std::string& tag) {
    path = fs::temp_directory_path() / ("colloquy-acceptance-" + tag + "-" +
                                        std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempTree() { fs::remove_all(path); }
};

GatewayOptions quiet_options() {
  GatewayOptions gopt;
  gopt.sleep_fn = [](double) {};
  return gopt;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (auto it = fs::recursive_directory_iterator(dir);
       it != fs::recursive_directory_iterator(); ++it)
    if (it->is_regular_file())
      files[fs::relative(it->path(), dir).string()] = read_file(it->path());
  return files;
}

// ---------------------------------------------------------------------------
// criterion 1 + 10 share one full-grid run directory

fs::path g_grid_dir;

void criterion_1_full_grid() {
  RunManifest m = default_manifest();
  RunnerOptions opts;
  opts.run_dir = g_grid_dir;
  opts.concurrency = 8;

  auto t0 = std::chrono::steady_clock::now();
  StageStats stats;
  {
    Runner runner(m, opts, make_mock_provider(m));
    stats = runner.stage_generate();
  }
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  int transcripts = 0;
  std::int64_t ideas = 0;
  for (const auto& topic : m.topics)
    for (const auto& cfg : m.configs)
      for (int seed = 0; seed < m.seeds_per_cell; ++seed) {
        char name[32];
        std::snprintf(name, sizeof name, "seed%02d.json", seed);
        fs::path p = g_grid_dir / "transcripts" / topic.id / cfg.id / name;
        if (!fs::exists(p)) continue;
        ++transcripts;
        ideas += static_cast<std::int64_t>(
            Json::parse(read_file(p)).at("final_ideas").size());
      }

  bool ok = stats.failed == 0 && transcripts == 1400 && ideas == 7000 &&
            elapsed < kGridTimeLimitS;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "full mock grid: %d transcripts, %" PRId64
                " ideas in %.1fs (limits: 1400, 7000, <%.0fs)",
                transcripts, ideas, elapsed, kGridTimeLimitS);
  verdict(1, ok, buf);

  // Finish the pipeline (untimed) so criterion 10 can inspect the report.
  Runner rest(m, opts, make_mock_provider(m));
  rest.stage_all();
}

// ---------------------------------------------------------------------------
// criterion 2: call-count law

int call_count_law(const DialogueConfig& cfg) {
  switch (cfg.variant) {
    case Variant::Single: return 1;
    case Variant::Baseline: return 3;
    case Variant::IterativeSelfCritique: return 1 + 2 * cfg.depth_l;
    case Variant::ParallelSelfCritique: return 2 + cfg.parallel_n;
    case Variant::DiverseCritic: return 3;
    case Variant::DiverseProposerReviser: return 3;
  }
  return -1;
}

void criterion_2_call_counts() {
  Topic topic{"bias", "novel prompting methods to reduce social biases of large language models"};
  PaperBank bank;
  bank.topic_id = topic.id;
  bank.records = synthetic_corpus(topic, 40);
  TrialContext ctx;
  ctx.examples_text = "{}";

  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> seed_dist(0, 99999);

  int trials = 0, mismatches = 0;
  for (const auto& cfg : default_configs()) {
    auto provider = std::make_shared<MockProvider>(std::uint64_t{5});
    Gateway gateway(provider, quiet_options());
    int before = provider->chat_calls();
    for (int t = 0; t < kTrialsPerConfig; ++t) {
      int seed = seed_dist(rng);
      Transcript tr = run_trial(cfg, topic, seed, gateway, bank, ctx);
      int after = provider->chat_calls();
      int expected = call_count_law(cfg);
      if (after - before != expected ||
          tr.steps.size() != static_cast<std::size_t>(expected) ||
          tr.final_ideas.size() != 5)
        ++mismatches;
      before = after;
      ++trials;
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "call-count law (1 / 3 / 1+2L / 2+N / 3 / 3) held in %d/%d randomized trials "
                "across %zu configurations",
                trials - mismatches, trials, default_configs().size());
  verdict(2, mismatches == 0 && trials == kTrialsPerConfig * 10, buf);
}

// ---------------------------------------------------------------------------
// criterion 3: dedup against a brute-force oracle

long double ref_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::string> oracle_survivor_ids(const std::vector<IdeaRecord>& pool,
                                             double threshold) {
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const IdeaOrigin& a = pool[x].origin;
    const IdeaOrigin& b = pool[y].origin;
    return std::tie(a.topic_id, a.config_id, a.seed, a.index) <
           std::tie(b.topic_id, b.config_id, b.seed, b.index);
  });
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    bool dup = false;
    for (std::size_t k : kept)
      if (ref_cosine(*pool[idx].embedding, *pool[k].embedding) >
          static_cast<long double>(threshold)) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(idx);
  }
  std::vector<std::string> ids;
  for (std::size_t k : kept) ids.push_back(pool[k].id());
  std::sort(ids.begin(), ids.end());
  return ids;
}

IdeaRecord idea_with_embedding(const IdeaOrigin& origin, std::vector<double> v) {
  IdeaRecord r;
  r.idea_name = "Idea " + origin.id();
  r.body = {"p", "e", "m", "w", "x"};
  r.origin = origin;
  r.embedding = std::move(v);
  return r;
}

void criterion_3_dedup_oracle() {
  std::mt19937 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> size_dist(10, 500);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  int pools_ok = 0;
  for (int p = 0; p < kOraclePools; ++p) {
    int n = size_dist(rng);
    std::vector<IdeaRecord> pool;
    for (int i = 0; i < n; ++i) {
      std::vector<double> v(16);
      if (i > 0 && coin(rng) < 0.3) {
        v = *pool[static_cast<std::size_t>(
                       std::uniform_int_distribution<int>(0, i - 1)(rng))].embedding;
        if (coin(rng) < 0.5)
          for (auto& x : v) x *= 2.5;  // scaled copy: same direction, same cosine
      } else {
        for (auto& x : v) x = gauss(rng);
      }
      IdeaOrigin origin{"t" + std::to_string(i % 3), "c" + std::to_string(i % 2),
                        std::uniform_int_distribution<int>(0, 49)(rng), i};
      pool.push_back(idea_with_embedding(origin, std::move(v)));
    }
    auto expected = oracle_survivor_ids(pool, 0.8);
    DedupReport got = dedup(pool, 0.8);
    std::vector<std::string> got_ids = got.survivor_ids;
    std::sort(got_ids.begin(), got_ids.end());
    double expected_ratio = static_cast<double>(expected.size()) / n;
    if (got_ids == expected && got.survivors == static_cast<int>(expected.size()) &&
        std::abs(got.non_duplicate_ratio - expected_ratio) < 1e-12)
      ++pools_ok;
  }

  // Planted pool: 77 mutually orthogonal ideas plus 23 exact duplicates.
  std::vector<IdeaRecord> planted;
  for (int i = 0; i < 77; ++i) {
    std::vector<double> axis(77, 0.0);
    axis[static_cast<std::size_t>(i)] = 1.0;
    planted.push_back(idea_with_embedding({"t", "c", i / 5, i % 5}, std::move(axis)));
  }
  for (int i = 0; i < 23; ++i) {
    std::vector<double> copy = *planted[static_cast<std::size_t>(i * 3)].embedding;
    planted.push_back(idea_with_embedding({"t", "c", 20 + i / 5, i % 5}, std::move(copy)));
  }
  DedupReport planted_report = dedup(planted, 0.8);
  bool planted_ok = planted_report.total == 100 && planted_report.survivors == 77 &&
                    std::abs(planted_report.non_duplicate_ratio - 0.77) < 1e-12;

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "greedy dedup matched the brute-force oracle on %d/%d random pools; "
                "planted pool gave %d/%d survivors (ratio %.2f)",
                pools_ok, kOraclePools, planted_report.survivors, planted_report.total,
                planted_report.non_duplicate_ratio);
  verdict(3, pools_ok == kOraclePools && planted_ok, buf);
}

// ---------------------------------------------------------------------------
// criterion 4: cosine similarity against an independent implementation

void criterion_4_cosine() {
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  long double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> a(64), b(64);
    for (auto& x : a) x = gauss(rng);
    for (auto& x : b) x = gauss(rng);
    long double diff = std::fabs(static_cast<long double>(cosine(a, b)) - ref_cosine(a, b));
    worst = std::max(worst, diff);
  }
  std::vector<double> e0{1, 0, 0}, e1{0, 1, 0};
  bool fixed_ok = cosine(e0, e1) == 0.0 && std::abs(cosine(e0, e0) - 1.0) < 1e-15;

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "cosine agreed with the independent implementation on 1000 pairs "
                "(worst |diff| %.2Le, tolerance %.0Le)",
                worst, static_cast<long double>(kCosineTol));
  verdict(4, worst < kCosineTol && fixed_ok, buf);
}

// ---------------------------------------------------------------------------
// criteria 5-6: tournament

Proposal fixture_proposal(const std::string& id, const std::string& text) {
  Proposal p;
  p.proposal_id = id;
  p.source_idea = IdeaOrigin{"topic", "config", 0, 0};
  p.idea_name = "Idea " + id;
  p.expanded_text = text;
  return p;
}

void criterion_5_tournament() {
  // (a) conservation + replay under a hash-driven judge
  std::vector<Proposal> proposals;
  TournamentSpec spec;
  spec.topic_id = "bias";
  spec.topic_description = "novel ways to mitigate social bias";
  spec.rounds = 10;
  spec.seed = 17;
  for (int i = 0; i < 20; ++i) {
    std::string cid = "cand/" + std::to_string(i);
    std::string bid = "base/" + std::to_string(i);
    proposals.push_back(fixture_proposal(cid, "Candidate proposal " + std::to_string(i)));
    proposals.push_back(fixture_proposal(bid, "Baseline proposal " + std::to_string(i)));
    spec.candidate_pool.push_back(cid);
    spec.baseline_pool.push_back(bid);
  }
  auto provider_a = std::make_shared<MockProvider>(MockOptions{17, MockJudgeMode::HashParity});
  Gateway gateway_a(provider_a, quiet_options());
  TournamentResult first = run_tournament(spec, proposals, gateway_a);

  int total_score = 0;
  for (const auto& r : first.ranking) total_score += r.score;

  auto provider_b = std::make_shared<MockProvider>(MockOptions{17, MockJudgeMode::HashParity});
  Gateway gateway_b(provider_b, quiet_options());
  bool replay_equal = run_tournament(spec, proposals, gateway_b) == first;

  // (b) a lexicographic judge must rank all candidates above all baselines
  // when every candidate text sorts first
  std::vector<Proposal> ordered;
  TournamentSpec lex = spec;
  lex.baseline_pool.clear();
  lex.candidate_pool.clear();
  for (int i = 0; i < 20; ++i) {
    char cid[32], bid[32];
    std::snprintf(cid, sizeof cid, "cand/%02d", i);
    std::snprintf(bid, sizeof bid, "base/%02d", i);
    ordered.push_back(fixture_proposal(cid, std::string("a-text ") + cid));
    ordered.push_back(fixture_proposal(bid, std::string("m-text ") + bid));
    lex.candidate_pool.push_back(cid);
    lex.baseline_pool.push_back(bid);
  }
  auto provider_c = std::make_shared<MockProvider>(MockOptions{17, MockJudgeMode::PreferLexMin});
  Gateway gateway_c(provider_c, quiet_options());
  TournamentResult lex_result = run_tournament(lex, ordered, gateway_c);
  bool lex_ok = lex_result.win_rate_candidate == 1.0 &&
                lex_result.precision_at.at(10) == 1.0 &&
                lex_result.precision_at.at(20) == 1.0 &&
                lex_result.precision_at.at(40) == 0.5;
  for (int i = 0; i < 20 && lex_ok; ++i) {
    char cid[32];
    std::snprintf(cid, sizeof cid, "cand/%02d", i);
    lex_ok = lex_result.ranking[static_cast<std::size_t>(i)].proposal_id == cid;
  }

  char buf[300];
  std::snprintf(buf, sizeof buf,
                "20v20 x 10 rounds: %zu matches, total score %d (want 200 each), replay %s; "
                "lexicographic judge put all 20 candidates on top: %s",
                first.matches.size(), total_score, replay_equal ? "identical" : "DIVERGED",
                lex_ok ? "yes" : "NO");
  verdict(5, first.matches.size() == 200 && total_score == 200 && replay_equal && lex_ok, buf);
}

void criterion_6_order_swap() {
  std::vector<Proposal> proposals;
  TournamentSpec spec;
  spec.topic_id = "coding";
  spec.topic_description = "improving code generation";
  spec.rounds = 20;  // 20 pairs x 20 rounds = 400 matches
  spec.seed = 5;
  for (int i = 0; i < 20; ++i) {
    std::string cid = "cand/" + std::to_string(i);
    std::string bid = "base/" + std::to_string(i);
    proposals.push_back(fixture_proposal(cid, "Candidate text " + std::to_string(i)));
    proposals.push_back(fixture_proposal(bid, "Baseline text " + std::to_string(i)));
    spec.candidate_pool.push_back(cid);
    spec.baseline_pool.push_back(bid);
  }
  auto provider = std::make_shared<MockProvider>(MockOptions{5, MockJudgeMode::PreferFirst});
  Gateway gateway(provider, quiet_options());
  TournamentResult result = run_tournament(spec, proposals, gateway);

  double rate = result.win_rate_candidate;
  bool ok = result.matches.size() == 400 && std::abs(rate - 0.5) <= kWinRateTol;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "position-biased judge + order swap: candidate win rate %.3f over %zu "
                "matches (window 0.5 +/- %.2f)",
                rate, result.matches.size(), kWinRateTol);
  verdict(6, ok, buf);
}

// ---------------------------------------------------------------------------
// criterion 7: precision fixtures

std::vector<RankedProposal> ranking_of(const std::string& pattern) {
  std::vector<RankedProposal> r;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    auto src = pattern[i] == 'C' ? ProposalSource::Candidate : ProposalSource::Baseline;
    r.push_back({"p" + std::to_string(i), src, 0, static_cast<int>(i) + 1});
  }
  return r;
}

void criterion_7_precision() {
  auto ten = ranking_of("CCBCBBCBCB");
  bool ok = precision_at_n(ten, 10) == 0.5;

  std::string forty;
  for (int i = 0; i < 4; ++i) forty += "CCBCBBCBCB";
  auto big = ranking_of(forty);
  ok = ok && precision_at_n(big, 10) == 0.5 && precision_at_n(big, 20) == 0.5 &&
       precision_at_n(big, 40) == 0.5;

  auto top_heavy = ranking_of(std::string(20, 'C') + std::string(20, 'B'));
  ok = ok && precision_at_n(top_heavy, 20) == 1.0 && precision_at_n(top_heavy, 40) == 0.5;

  bool threw = false;
  try {
    precision_at_n(ten, 11);
  } catch (const NTooLarge&) {
    threw = true;
  }
  ok = ok && threw;

  verdict(7, ok,
          "precision fixtures: C,C,B,C,B,B,C,B,C,B -> 0.50 at 10; repeated pattern -> 0.50 "
          "at 10/20/40; top-heavy -> 1.00 at 20; N beyond the pool throws");
}

// ---------------------------------------------------------------------------
// criterion 8: prompt fidelity

void criterion_8_prompts() {
  fs::path assets{COLLOQUY_ASSET_DIR};
  PromptSet embedded = default_prompts();
  PromptSet golden = PromptSet::from_dir(assets / "prompts");
  int mismatched = 0;
  if (embedded.ideation != golden.ideation) ++mismatched;
  if (embedded.critique != golden.critique) ++mismatched;
  if (embedded.revise != golden.revise) ++mismatched;
  if (embedded.expand != golden.expand) ++mismatched;
  if (embedded.judge != golden.judge) ++mismatched;

  const std::pair<std::string_view, const char*> personas[] = {
      {texts::kAiResearcherPersona, "ai_researcher.txt"},
      {texts::kPhysicsPersona, "physics_ai.txt"},
      {texts::kChemistryPersona, "chemistry_ai.txt"},
      {texts::kBiologyPersona, "biology_ai.txt"},
      {texts::kFinancePersona, "finance_ai.txt"},
      {texts::kPsychologyPersona, "psychology_ai.txt"},
  };
  for (const auto& [text, file] : personas)
    if (std::string(text) != read_file(assets / "personas" / file)) ++mismatched;

  char buf[192];
  std::snprintf(buf, sizeof buf,
                "embedded prompt texts vs golden files: %d of 11 mismatched "
                "(5 templates + 6 personas, byte-for-byte)",
                mismatched);
  verdict(8, mismatched == 0, buf);
}

// ---------------------------------------------------------------------------
// criterion 9: kill-and-restart convergence

RunManifest small_manifest() {
  RunManifest m;
  m.topics = {{"alpha", "improving factual grounding of generated text"},
              {"beta", "reducing hallucinations in long-form answers"}};
  PersonaName ai = PersonaName::AIResearcher;
  m.configs = {
      DialogueConfig{"baseline", Variant::Baseline, 1, 1, ai, {ai}, 5, 10},
      DialogueConfig{"single", Variant::Single, 0, 0, ai, {}, 5, 10},
      DialogueConfig{"par-n2", Variant::ParallelSelfCritique, 1, 2, ai, {ai, ai}, 5, 10},
  };
  m.seeds_per_cell = 2;
  m.target_total_ideas_r = 60;
  m.tournament_rounds = 3;
  m.examples_text = "{}";
  m.provider.mock_seed = 33;
  m.bank.source = "synthetic";
  m.bank.bank_size = 30;
  return m;
}

int shell(const std::string& cmd) {
  int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

void criterion_9_kill_restart() {
  TempTree tree("restart");
  fs::path manifest_path = tree.path / "manifest.json";
  {
    Json j = small_manifest();
    atomic_write_file(manifest_path, j.dump(2) + "\n");
  }
  std::string cli{COLLOQUY_CLI_PATH};
  fs::path interrupted = tree.path / "interrupted";
  fs::path reference = tree.path / "reference";

  // Keep killing the generator after two cells until it survives a pass.
  int kills = 0, rc = -1;
  for (int attempt = 0; attempt < 10; ++attempt) {
    rc = shell("COLLOQUY_ABORT_AFTER_CELLS=2 " + cli + " generate --manifest " +
               manifest_path.string() + " --run-dir " + interrupted.string() +
               " --mock --concurrency 8");
    if (rc != 17) break;
    ++kills;
  }
  bool interrupted_ok = kills >= 1 && rc == 0;

  // Finish the remaining stages without interruption, then compare against a
  // run that was never killed.
  int rest_rc = shell(cli + " all --manifest " + manifest_path.string() + " --run-dir " +
                      interrupted.string() + " --mock --concurrency 8");
  int ref_rc = shell(cli + " all --manifest " + manifest_path.string() + " --run-dir " +
                     reference.string() + " --mock --concurrency 8");

  bool identical = rest_rc == 0 && ref_rc == 0 && snapshot(interrupted) == snapshot(reference);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "killed the run %d time(s) mid-grid (exit 17), resumed to completion; "
                "run directory %s an uninterrupted run byte-for-byte",
                kills, identical ? "matches" : "DIFFERS FROM");
  verdict(9, interrupted_ok && identical, buf);
}

// ---------------------------------------------------------------------------
// criterion 10: report structure

bool row_labels_match(const std::map<std::string, std::vector<std::string>>& by_table,
                      const std::string& table, const std::vector<std::string>& want) {
  auto it = by_table.find(table);
  return it != by_table.end() && it->second == want;
}

void criterion_10_report() {
  std::string text = read_file(g_grid_dir / "report" / "report.txt");
  std::string csv = read_file(g_grid_dir / "report" / "report.csv");

  bool titles_ok =
      text.find("Table 1. Impact of agent parallelism (number of critics)") !=
          std::string::npos &&
      text.find("Table 2. Impact of interaction depth (number of critique-revision turns)") !=
          std::string::npos &&
      text.find("Table 3. Impact of persona diversity") != std::string::npos;
  bool headers_ok = text.find("Non-Dup. Ratio") != std::string::npos &&
                    text.find("Precision@(10/20/40)") != std::string::npos &&
                    text.find("Win Rate") != std::string::npos &&
                    text.find("Mean Score (cand/base)") != std::string::npos &&
                    text.find("L (turns)") != std::string::npos &&
                    text.find("Configuration") != std::string::npos;

  // CSV: exact row sets per table, and every numeric cell with two decimals.
  auto lines = split_lines(csv);
  bool header_ok =
      !lines.empty() &&
      lines[0] ==
          "table,row,config,non_dup_ratio,precision_at_10,precision_at_20,precision_at_40,"
          "win_rate,mean_score_candidate,mean_score_baseline";
  std::map<std::string, std::vector<std::string>> rows_by_table;
  std::regex two_dec("^-?[0-9]+\\.[0-9]{2}$");
  int bad_cells = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    for (char c : lines[i]) {
      if (c == ',') {
        fields.push_back(field);
        field.clear();
      } else {
        field.push_back(c);
      }
    }
    fields.push_back(field);
    if (fields.size() != 10) {
      ++bad_cells;
      continue;
    }
    rows_by_table[fields[0]].push_back(fields[1]);
    for (std::size_t f = 3; f < fields.size(); ++f)
      if (fields[f] != "-" && !std::regex_match(fields[f], two_dec)) ++bad_cells;
    // Baseline rows carry no tournament columns.
    if (fields[2] == "baseline")
      for (std::size_t f = 4; f < fields.size(); ++f)
        if (fields[f] != "-") ++bad_cells;
  }
  bool rows_ok =
      row_labels_match(rows_by_table, "1",
                       {"Single (N=0)", "Baseline (N=1)", "2", "3", "4"}) &&
      row_labels_match(rows_by_table, "2",
                       {"Single (L=0)", "Baseline (L=1)", "2", "3", "4"}) &&
      row_labels_match(rows_by_table, "3", {"Baseline", "Diverse Critic", "Diverse Prop/Rev"});

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "report tables: titles %s, headers %s, row sets %s, "
                "%d malformed cells (every value 2-decimal or '-')",
                titles_ok ? "ok" : "BAD", headers_ok ? "ok" : "BAD", rows_ok ? "ok" : "BAD",
                bad_cells);
  verdict(10, titles_ok && headers_ok && header_ok && rows_ok && bad_cells == 0, buf);
}

}  // namespace

int main() {
  TempTree grid("grid");
  g_grid_dir = grid.path / "run";

  criterion_1_full_grid();
  criterion_2_call_counts();
  criterion_3_dedup_oracle();
  criterion_4_cosine();
  criterion_5_tournament();
  criterion_6_order_swap();
  criterion_7_precision();
  criterion_8_prompts();
  criterion_9_kill_restart();
  criterion_10_report();

  if (g_failed > 0) {
    std::printf("%d criterion(s) failed\n", g_failed);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
