#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "colloquy/domain.hpp"
#include "colloquy/errors.hpp"
#include "colloquy/gateway.hpp"

namespace colloquy {

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size())
    throw DimensionMismatch("cosine: " + std::to_string(u.size()) +
                            " vs " + std::to_string(v.size()));
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw ZeroVector("cosine: zero-length operand");
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

struct DedupEdge {
  std::string dropped_id;
  std::string kept_id;  // the nearest previously kept idea
  double similarity = 0.0;

  bool operator==(const DedupEdge&) const = default;
};

inline void to_json(Json& j, const DedupEdge& e) {
  j = Json{{"dropped_id", e.dropped_id}, {"kept_id", e.kept_id}, {"similarity", e.similarity}};
}
inline void from_json(const Json& j, DedupEdge& e) {
  j.at("dropped_id").get_to(e.dropped_id);
  j.at("kept_id").get_to(e.kept_id);
  j.at("similarity").get_to(e.similarity);
}

struct DedupReport {
  std::string topic_id;
  std::string config_id;
  int total = 0;
  int survivors = 0;
  double non_duplicate_ratio = 0.0;
  std::vector<std::string> survivor_ids;  // canonical pool order
  std::vector<DedupEdge> edges;           // one per dropped idea

  bool operator==(const DedupReport&) const = default;
};

inline void to_json(Json& j, const DedupReport& r) {
  j = Json{{"topic", r.topic_id},
           {"config", r.config_id},
           {"total", r.total},
           {"survivors", r.survivors},
           {"non_duplicate_ratio", r.non_duplicate_ratio},
           {"survivor_ids", r.survivor_ids},
           {"edges", r.edges}};
}
inline void from_json(const Json& j, DedupReport& r) {
  j.at("topic").get_to(r.topic_id);
  j.at("config").get_to(r.config_id);
  j.at("total").get_to(r.total);
  j.at("survivors").get_to(r.survivors);
  j.at("non_duplicate_ratio").get_to(r.non_duplicate_ratio);
  j.at("survivor_ids").get_to(r.survivor_ids);
  j.at("edges").get_to(r.edges);
}

// What the similarity filter sees: idea name plus the five sections in fixed
// order, so any section-order permutation upstream embeds identically.
inline std::string canonical_embed_text(const IdeaRecord& idea) {
  return idea.idea_name + ". " + five_part_text(idea.body);
}

// Fills .embedding (unit length) for every idea, one batched gateway call set.
inline void embed_ideas(std::vector<IdeaRecord>& ideas, Gateway& gateway,
                        const std::string& model) {
  if (ideas.empty()) return;
  std::vector<std::string> texts;
  texts.reserve(ideas.size());
  for (const auto& idea : ideas) texts.push_back(canonical_embed_text(idea));
  auto vectors = gateway.embed(texts, model);
  for (std::size_t i = 0; i < ideas.size(); ++i) ideas[i].embedding = std::move(vectors[i]);
}

inline IdeaRecord embed_idea(IdeaRecord idea, Gateway& gateway, const std::string& model) {
  std::vector<IdeaRecord> one{std::move(idea)};
  embed_ideas(one, gateway, model);
  return std::move(one[0]);
}

// Greedy prefix scan in canonical pool order (topic, config, seed, index):
// an idea survives iff its max cosine against all previously kept ideas is
// <= threshold (strictly-greater similarity drops it). Marks survived_dedup
// in place; input order is left untouched.
inline DedupReport dedup(std::vector<IdeaRecord>& ideas, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("dedup: threshold must be in (0,1)");
  for (const auto& idea : ideas)
    if (!idea.embedding)
      throw MissingEmbedding("idea " + idea.id() + " has no embedding");

  std::vector<std::size_t> order(ideas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& oa = ideas[a].origin;
    const auto& ob = ideas[b].origin;
    return std::tie(oa.topic_id, oa.config_id, oa.seed, oa.index) <
           std::tie(ob.topic_id, ob.config_id, ob.seed, ob.index);
  });

  DedupReport report;
  if (!ideas.empty()) {
    report.topic_id = ideas[order[0]].origin.topic_id;
    report.config_id = ideas[order[0]].origin.config_id;
  }
  report.total = static_cast<int>(ideas.size());

  std::vector<std::size_t> kept;
  for (std::size_t oi : order) {
    double max_sim = -2.0;
    std::size_t nearest = 0;
    for (std::size_t ki : kept) {
      double s = cosine(*ideas[oi].embedding, *ideas[ki].embedding);
      if (s > max_sim) {
        max_sim = s;
        nearest = ki;
      }
    }
    if (!kept.empty() && max_sim > threshold) {
      ideas[oi].survived_dedup = false;
      report.edges.push_back({ideas[oi].id(), ideas[nearest].id(), max_sim});
    } else {
      ideas[oi].survived_dedup = true;
      kept.push_back(oi);
      report.survivor_ids.push_back(ideas[oi].id());
    }
  }
  report.survivors = static_cast<int>(kept.size());
  report.non_duplicate_ratio =
      report.total == 0 ? 0.0
                        : static_cast<double>(report.survivors) / static_cast<double>(report.total);
  return report;
}

}  // namespace colloquy
