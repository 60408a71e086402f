#pragma once

#include <map>
#include <string>
#include <vector>

#include "colloquy/domain.hpp"
#include "colloquy/errors.hpp"
#include "colloquy/gateway.hpp"
#include "colloquy/mock_provider.hpp"
#include "colloquy/prompts.hpp"
#include "colloquy/util.hpp"

namespace colloquy {

struct TournamentSpec {
  std::string topic_id;
  std::string topic_description;
  std::vector<std::string> baseline_pool;   // proposal ids
  std::vector<std::string> candidate_pool;  // proposal ids, disjoint from baseline
  int rounds = 10;
  std::string judge_model = "mock-judge";
  bool order_swap = true;
  std::uint64_t seed = 0;  // drives round-1 pairing, presentation order, tie coins
  DecodingParams judge_decoding{0.0, 1.0, 256};
};

struct TournamentResult {
  std::vector<MatchRecord> matches;
  std::vector<RankedProposal> ranking;
  std::map<int, double> precision_at;  // only for N <= pool size
  double win_rate_candidate = 0.0;
  double mean_score_baseline = 0.0;
  double mean_score_candidate = 0.0;

  bool operator==(const TournamentResult&) const = default;
};

inline void to_json(Json& j, const TournamentResult& r) {
  Json precision = Json::object();
  for (const auto& [n, v] : r.precision_at) precision[std::to_string(n)] = v;
  j = Json{{"matches", r.matches},
           {"ranking", r.ranking},
           {"precision_at", precision},
           {"win_rate_candidate", r.win_rate_candidate},
           {"mean_score_baseline", r.mean_score_baseline},
           {"mean_score_candidate", r.mean_score_candidate}};
}
inline void from_json(const Json& j, TournamentResult& r) {
  j.at("matches").get_to(r.matches);
  j.at("ranking").get_to(r.ranking);
  r.precision_at.clear();
  for (auto it = j.at("precision_at").begin(); it != j.at("precision_at").end(); ++it)
    r.precision_at[std::stoi(it.key())] = it.value().get<double>();
  j.at("win_rate_candidate").get_to(r.win_rate_candidate);
  j.at("mean_score_baseline").get_to(r.mean_score_baseline);
  j.at("mean_score_candidate").get_to(r.mean_score_candidate);
}

// ---------------------------------------------------------------------------
// pairing

// Cross-source pairs for one round. Each source contributes its top
// min(|baseline|, |candidate|) proposals by current standing (score desc, id
// asc); the surplus lowest-ranked sit out. Round 1 matches the participants
// randomly; later rounds align i-th best with i-th best (Swiss style).
inline std::vector<std::pair<std::string, std::string>> pair_round(
    const std::vector<RankedProposal>& standings, int round, DetRng& rng) {
  std::vector<const RankedProposal*> base, cand;
  for (const auto& s : standings)
    (s.source == ProposalSource::Baseline ? base : cand).push_back(&s);
  if (base.empty() || cand.empty())
    throw std::invalid_argument("pair_round: both pools must be nonempty");

  auto by_standing = [](const RankedProposal* a, const RankedProposal* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->proposal_id < b->proposal_id;
  };
  std::sort(base.begin(), base.end(), by_standing);
  std::sort(cand.begin(), cand.end(), by_standing);

  std::size_t m = std::min(base.size(), cand.size());
  base.resize(m);
  cand.resize(m);
  if (round <= 1) {
    rng.shuffle(base);
    rng.shuffle(cand);
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    pairs.emplace_back(base[i]->proposal_id, cand[i]->proposal_id);
  return pairs;
}

// ---------------------------------------------------------------------------
// judging

inline ChatRequest render_judge_prompt(const Proposal& a, const Proposal& b,
                                       const std::string& topic_description,
                                       const std::string& judge_model,
                                       const DecodingParams& judge_decoding,
                                       const PromptSet& prompts = default_prompts()) {
  if (a.expanded_text.empty() || b.expanded_text.empty())
    throw std::invalid_argument("render_judge_prompt: proposals must be nonempty");
  SlotMap slots{
      {"topic_description", topic_description},
      {"proposal_a", a.expanded_text},
      {"proposal_b", b.expanded_text},
  };
  ChatRequest req;
  req.system_prompt = "You are an impartial expert reviewer.";
  req.user_prompt = render(prompts.judge, slots);
  req.decoding = judge_decoding;
  req.model_name = judge_model;
  return req;
}

// Verdict = the last non-empty line, stripped of punctuation/whitespace,
// case-insensitively "a" or "b".
inline std::optional<Verdict> parse_verdict(const std::string& reply) {
  auto lines = split_lines(reply);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    std::string token;
    for (char c : *it)
      if (std::isalnum(static_cast<unsigned char>(c))) token.push_back(c);
    if (token.empty() && trim(*it).empty()) continue;  // blank line, keep looking
    if (token == "A" || token == "a") return Verdict::A;
    if (token == "B" || token == "b") return Verdict::B;
    return std::nullopt;  // last non-empty line is something else
  }
  return std::nullopt;
}

namespace detail {

inline Verdict judge_once(const Proposal& a, const Proposal& b, const TournamentSpec& spec,
                          Gateway& gateway, const PromptSet& prompts) {
  ChatRequest req = render_judge_prompt(a, b, spec.topic_description, spec.judge_model,
                                        spec.judge_decoding, prompts);
  ChatResponse resp = gateway.complete(req);
  if (auto v = parse_verdict(resp.text)) return *v;
  // one corrective re-ask
  ChatRequest retry = req;
  retry.user_prompt += "\n\n" + std::string(kJudgeCorrective);
  resp = gateway.complete(retry);
  if (auto v = parse_verdict(resp.text)) return *v;
  throw JudgeUnparseable("judge reply matched neither A nor B twice; last reply: " + resp.text);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// the tournament

inline double precision_at_n(const std::vector<RankedProposal>& ranking, int n) {
  if (n < 1) throw std::invalid_argument("precision_at_n: n must be >= 1");
  if (n > static_cast<int>(ranking.size()))
    throw NTooLarge("precision_at_n: n=" + std::to_string(n) + " exceeds pool of " +
                    std::to_string(ranking.size()));
  int candidate = 0;
  for (int i = 0; i < n; ++i)
    if (ranking[static_cast<std::size_t>(i)].source == ProposalSource::Candidate) ++candidate;
  return static_cast<double>(candidate) / static_cast<double>(n);
}

// Swiss-style accumulation: every round pairs cross-source, each pair is
// judged once (twice with order_swap; majority, seeded coin on splits) and
// the winner's score grows by exactly 1.
inline TournamentResult run_tournament(const TournamentSpec& spec,
                                       const std::vector<Proposal>& proposals, Gateway& gateway,
                                       const PromptSet& prompts = default_prompts()) {
  if (spec.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  std::map<std::string, const Proposal*> by_id;
  for (const auto& p : proposals) by_id[p.proposal_id] = &p;
  for (const auto& id : spec.baseline_pool)
    for (const auto& other : spec.candidate_pool)
      if (id == other) throw std::invalid_argument("pools overlap on id " + id);
  auto resolve = [&](const std::string& id) -> const Proposal& {
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw std::invalid_argument("pool id does not resolve to a proposal: " + id);
    return *it->second;
  };
  for (const auto& id : spec.baseline_pool) resolve(id);
  for (const auto& id : spec.candidate_pool) resolve(id);

  std::vector<RankedProposal> standings;
  for (const auto& id : spec.baseline_pool)
    standings.push_back({id, ProposalSource::Baseline, 0, 0});
  for (const auto& id : spec.candidate_pool)
    standings.push_back({id, ProposalSource::Candidate, 0, 0});
  std::map<std::string, RankedProposal*> standing_of;
  for (auto& s : standings) standing_of[s.proposal_id] = &s;

  DetRng rng(mix64(spec.seed ^ fnv1a64(spec.topic_id) ^ 0x70a27a11ULL));

  TournamentResult result;
  int candidate_wins = 0;
  for (int round = 1; round <= spec.rounds; ++round) {
    auto pairs = pair_round(standings, round, rng);
    for (const auto& [base_id, cand_id] : pairs) {
      // presentation order of the recorded match: seeded coin per pair
      bool baseline_first = (rng.next() & 1) != 0;
      const std::string& a_id = baseline_first ? base_id : cand_id;
      const std::string& b_id = baseline_first ? cand_id : base_id;
      const Proposal& a = resolve(a_id);
      const Proposal& b = resolve(b_id);

      Verdict v1 = detail::judge_once(a, b, spec, gateway, prompts);
      Verdict final_verdict = v1;
      if (spec.order_swap) {
        Verdict v2 = detail::judge_once(b, a, spec, gateway, prompts);
        // map the swapped verdict back onto (a, b) labels
        Verdict v2_on_ab = (v2 == Verdict::A) ? Verdict::B : Verdict::A;
        if (v2_on_ab != v1) final_verdict = (rng.next() & 1) ? Verdict::A : Verdict::B;
      }

      const std::string& winner_id = (final_verdict == Verdict::A) ? a_id : b_id;
      RankedProposal* winner = standing_of[winner_id];
      winner->score += 1;
      if (winner->source == ProposalSource::Candidate) ++candidate_wins;

      MatchRecord rec;
      rec.round = round;
      rec.proposal_a_id = a_id;
      rec.proposal_b_id = b_id;
      rec.judge_verdict = final_verdict;
      rec.presentation_order_swapped = spec.order_swap;
      result.matches.push_back(rec);
    }
  }

  result.ranking = standings;
  std::sort(result.ranking.begin(), result.ranking.end(),
            [](const RankedProposal& x, const RankedProposal& y) {
              if (x.score != y.score) return x.score > y.score;
              return x.proposal_id < y.proposal_id;
            });
  for (std::size_t i = 0; i < result.ranking.size(); ++i)
    result.ranking[i].rank = static_cast<int>(i) + 1;

  for (int n : {10, 20, 40})
    if (n <= static_cast<int>(result.ranking.size()))
      result.precision_at[n] = precision_at_n(result.ranking, n);

  double base_sum = 0.0, cand_sum = 0.0;
  for (const auto& s : result.ranking)
    (s.source == ProposalSource::Baseline ? base_sum : cand_sum) += s.score;
  result.mean_score_baseline =
      spec.baseline_pool.empty() ? 0.0 : base_sum / static_cast<double>(spec.baseline_pool.size());
  result.mean_score_candidate = spec.candidate_pool.empty()
                                    ? 0.0
                                    : cand_sum / static_cast<double>(spec.candidate_pool.size());
  result.win_rate_candidate =
      result.matches.empty()
          ? 0.0
          : static_cast<double>(candidate_wins) / static_cast<double>(result.matches.size());
  return result;
}

}  // namespace colloquy
