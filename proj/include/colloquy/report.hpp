#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "colloquy/dedup.hpp"
#include "colloquy/domain.hpp"
#include "colloquy/errors.hpp"
#include "colloquy/tournament.hpp"
#include "colloquy/util.hpp"

namespace colloquy {

inline std::string pool_stem(const std::string& topic_id, const std::string& config_id) {
  return topic_id + "__" + config_id;
}

// Aggregated metrics for one configuration across all topics.
struct ConfigReport {
  std::string config_id;
  int topics = 0;
  int total_ideas = 0;
  int survivors = 0;
  double ratio_macro = 0.0;   // mean of per-topic ratios
  double ratio_pooled = 0.0;  // sum survivors / sum totals
  std::map<std::string, double> ratio_by_topic;
  bool has_tournament = false;
  std::map<int, double> precision_macro;  // mean over topics where N fit the pool
  std::map<int, double> precision_micro;  // pooled counts over the same topics
  double win_rate_macro = 0.0;
  double mean_score_candidate = 0.0;  // macro over topics
  double mean_score_baseline = 0.0;
};

inline void to_json(Json& j, const ConfigReport& r) {
  Json ratio_topics = Json::object();
  for (const auto& [t, v] : r.ratio_by_topic) ratio_topics[t] = v;
  auto pmap = [](const std::map<int, double>& m) {
    Json out = Json::object();
    for (const auto& [n, v] : m) out[std::to_string(n)] = v;
    return out;
  };
  j = Json{{"config", r.config_id},
           {"topics", r.topics},
           {"total_ideas", r.total_ideas},
           {"survivors", r.survivors},
           {"non_duplicate_ratio_macro", r.ratio_macro},
           {"non_duplicate_ratio_pooled", r.ratio_pooled},
           {"non_duplicate_ratio_by_topic", ratio_topics},
           {"has_tournament", r.has_tournament},
           {"precision_at_macro", pmap(r.precision_macro)},
           {"precision_at_micro", pmap(r.precision_micro)},
           {"win_rate_macro", r.win_rate_macro},
           {"mean_score_candidate", r.mean_score_candidate},
           {"mean_score_baseline", r.mean_score_baseline}};
}

struct ReportRow {
  std::string label;
  std::string config_id;
};

struct ReportTable {
  std::string title;
  std::string row_header;  // first column's header
  std::vector<ReportRow> rows;
};

struct Report {
  std::vector<ReportTable> tables;
  std::map<std::string, ConfigReport> configs;
};

// ---------------------------------------------------------------------------
// building

namespace detail {

inline Json load_json_file(const std::filesystem::path& p, const std::string& what) {
  if (!std::filesystem::exists(p)) throw MissingStage(what + " (" + p.string() + ")");
  return Json::parse(read_file(p));
}

}  // namespace detail

inline ConfigReport build_config_report(const RunManifest& manifest,
                                        const std::filesystem::path& run_dir,
                                        const DialogueConfig& cfg) {
  ConfigReport r;
  r.config_id = cfg.id;
  r.topics = static_cast<int>(manifest.topics.size());

  for (const auto& topic : manifest.topics) {
    auto p = run_dir / "dedup" / (pool_stem(topic.id, cfg.id) + ".json");
    DedupReport d = detail::load_json_file(p, "dedup report for " + pool_stem(topic.id, cfg.id))
                        .get<DedupReport>();
    r.total_ideas += d.total;
    r.survivors += d.survivors;
    r.ratio_by_topic[topic.id] = d.non_duplicate_ratio;
    r.ratio_macro += d.non_duplicate_ratio;
  }
  if (r.topics > 0) r.ratio_macro /= r.topics;
  r.ratio_pooled =
      r.total_ideas == 0 ? 0.0 : static_cast<double>(r.survivors) / r.total_ideas;

  if (cfg.id == manifest.baseline_config_id) return r;  // no self-tournament

  std::map<int, double> precision_sum;
  std::map<int, int> precision_topics;
  std::map<int, int> candidate_in_top;
  for (const auto& topic : manifest.topics) {
    auto p = run_dir / "tournament" / (pool_stem(topic.id, cfg.id) + ".json");
    TournamentResult t =
        detail::load_json_file(p, "tournament result for " + pool_stem(topic.id, cfg.id))
            .get<TournamentResult>();
    r.has_tournament = true;
    for (const auto& [n, v] : t.precision_at) {
      precision_sum[n] += v;
      precision_topics[n] += 1;
      candidate_in_top[n] += static_cast<int>(std::lround(v * n));
    }
    r.win_rate_macro += t.win_rate_candidate;
    r.mean_score_candidate += t.mean_score_candidate;
    r.mean_score_baseline += t.mean_score_baseline;
  }
  if (r.topics > 0) {
    r.win_rate_macro /= r.topics;
    r.mean_score_candidate /= r.topics;
    r.mean_score_baseline /= r.topics;
  }
  for (const auto& [n, sum] : precision_sum) {
    r.precision_macro[n] = sum / precision_topics[n];
    r.precision_micro[n] =
        static_cast<double>(candidate_in_top[n]) / (static_cast<double>(n) * precision_topics[n]);
  }
  return r;
}

// The three tables: parallelism (N), interaction depth (L), persona
// diversity. A config appears in the tables its variant belongs to.
inline std::vector<ReportTable> report_tables(const RunManifest& manifest) {
  ReportTable t1{"Impact of agent parallelism (number of critics)", "N", {}};
  ReportTable t2{"Impact of interaction depth (number of critique-revision turns)", "L (turns)",
                 {}};
  ReportTable t3{"Impact of persona diversity", "Configuration", {}};

  const DialogueConfig* single = nullptr;
  const DialogueConfig* baseline = nullptr;
  std::vector<const DialogueConfig*> pars, iters;
  const DialogueConfig* diverse_critic = nullptr;
  const DialogueConfig* diverse_prop = nullptr;
  for (const auto& c : manifest.configs) {
    switch (c.variant) {
      case Variant::Single: single = &c; break;
      case Variant::Baseline: baseline = &c; break;
      case Variant::ParallelSelfCritique: pars.push_back(&c); break;
      case Variant::IterativeSelfCritique: iters.push_back(&c); break;
      case Variant::DiverseCritic: diverse_critic = &c; break;
      case Variant::DiverseProposerReviser: diverse_prop = &c; break;
    }
  }
  std::sort(pars.begin(), pars.end(),
            [](auto* a, auto* b) { return a->parallel_n < b->parallel_n; });
  std::sort(iters.begin(), iters.end(),
            [](auto* a, auto* b) { return a->depth_l < b->depth_l; });

  if (single) t1.rows.push_back({"Single (N=0)", single->id});
  if (baseline) t1.rows.push_back({"Baseline (N=1)", baseline->id});
  for (auto* c : pars) t1.rows.push_back({std::to_string(c->parallel_n), c->id});

  if (single) t2.rows.push_back({"Single (L=0)", single->id});
  if (baseline) t2.rows.push_back({"Baseline (L=1)", baseline->id});
  for (auto* c : iters) t2.rows.push_back({std::to_string(c->depth_l), c->id});

  if (baseline) t3.rows.push_back({"Baseline", baseline->id});
  if (diverse_critic) t3.rows.push_back({"Diverse Critic", diverse_critic->id});
  if (diverse_prop) t3.rows.push_back({"Diverse Prop/Rev", diverse_prop->id});

  return {t1, t2, t3};
}

inline Report build_report(const RunManifest& manifest, const std::filesystem::path& run_dir) {
  Report report;
  report.tables = report_tables(manifest);
  for (const auto& table : report.tables)
    for (const auto& row : table.rows)
      if (!report.configs.count(row.config_id)) {
        auto it = std::find_if(manifest.configs.begin(), manifest.configs.end(),
                               [&](const DialogueConfig& c) { return c.id == row.config_id; });
        report.configs[row.config_id] = build_config_report(manifest, run_dir, *it);
      }
  return report;
}

// ---------------------------------------------------------------------------
// rendering

namespace detail {

inline std::string two_dec(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// "0.42 / 0.47 / 0.48", with "-" for any N the pools could not support,
// or a bare "-" when the config has no tournament at all.
inline std::string precision_cell(const ConfigReport& r) {
  if (!r.has_tournament) return "-";
  std::string out;
  bool any = false;
  for (int n : {10, 20, 40}) {
    if (!out.empty()) out += " / ";
    auto it = r.precision_macro.find(n);
    if (it == r.precision_macro.end()) {
      out += "-";
    } else {
      out += two_dec(it->second);
      any = true;
    }
  }
  return any ? out : "-";
}

inline std::string pad(const std::string& s, std::size_t width) {
  std::string out = s;
  while (out.size() < width) out.push_back(' ');
  return out;
}

}  // namespace detail

inline std::string render_report_text(const Report& report) {
  std::string out;
  int index = 1;
  for (const auto& table : report.tables) {
    if (index > 1) out += "\n";
    out += "Table " + std::to_string(index) + ". " + table.title + "\n\n";

    std::vector<std::vector<std::string>> grid;
    grid.push_back({table.row_header, "Non-Dup. Ratio", "Precision@(10/20/40)", "Win Rate",
                    "Mean Score (cand/base)"});
    for (const auto& row : table.rows) {
      const ConfigReport& r = report.configs.at(row.config_id);
      std::string win = r.has_tournament ? detail::two_dec(r.win_rate_macro) : "-";
      std::string mean = r.has_tournament ? detail::two_dec(r.mean_score_candidate) + " / " +
                                                detail::two_dec(r.mean_score_baseline)
                                          : "-";
      grid.push_back({row.label, detail::two_dec(r.ratio_macro), detail::precision_cell(r), win,
                      mean});
    }

    std::vector<std::size_t> widths(grid[0].size(), 0);
    for (const auto& line : grid)
      for (std::size_t i = 0; i < line.size(); ++i)
        widths[i] = std::max(widths[i], line[i].size());
    for (const auto& line : grid) {
      std::string rendered;
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (i) rendered += "  ";
        rendered += detail::pad(line[i], widths[i]);
      }
      while (!rendered.empty() && rendered.back() == ' ') rendered.pop_back();
      out += rendered + "\n";
    }
    ++index;
  }
  return out;
}

inline std::string render_report_csv(const Report& report) {
  std::string out =
      "table,row,config,non_dup_ratio,precision_at_10,precision_at_20,precision_at_40,"
      "win_rate,mean_score_candidate,mean_score_baseline\n";
  auto cell = [](const ConfigReport& r, int n) -> std::string {
    auto it = r.precision_macro.find(n);
    if (!r.has_tournament || it == r.precision_macro.end()) return "-";
    return detail::two_dec(it->second);
  };
  int index = 1;
  for (const auto& table : report.tables) {
    for (const auto& row : table.rows) {
      const ConfigReport& r = report.configs.at(row.config_id);
      std::string label = row.label;
      if (label.find(',') != std::string::npos) label = "\"" + label + "\"";
      out += std::to_string(index) + "," + label + "," + r.config_id + "," +
             detail::two_dec(r.ratio_macro) + "," + cell(r, 10) + "," + cell(r, 20) + "," +
             cell(r, 40) + ",";
      out += r.has_tournament ? detail::two_dec(r.win_rate_macro) : "-";
      out += ",";
      out += r.has_tournament ? detail::two_dec(r.mean_score_candidate) : "-";
      out += ",";
      out += r.has_tournament ? detail::two_dec(r.mean_score_baseline) : "-";
      out += "\n";
    }
    ++index;
  }
  return out;
}

inline Json report_json(const Report& report) {
  Json tables = Json::array();
  int index = 1;
  for (const auto& table : report.tables) {
    Json rows = Json::array();
    for (const auto& row : table.rows)
      rows.push_back(Json{{"label", row.label}, {"config", row.config_id}});
    tables.push_back(Json{{"index", index}, {"title", table.title}, {"rows", rows}});
    ++index;
  }
  Json configs = Json::object();
  for (const auto& [id, r] : report.configs) configs[id] = r;
  return Json{{"tables", tables}, {"configs", configs}};
}

}  // namespace colloquy
