#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "colloquy/errors.hpp"
#include "colloquy/prompt_texts.hpp"
#include "json.hpp"

namespace colloquy {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// personas

enum class PersonaName {
  AIResearcher,
  PhysicsAI,
  ChemistryAI,
  BiologyAI,
  FinanceAI,
  PsychologyAI,
};

// The five domain personas, in round-robin order for per-seed selection.
inline constexpr PersonaName kDomainPersonas[5] = {
    PersonaName::PhysicsAI,   PersonaName::ChemistryAI, PersonaName::BiologyAI,
    PersonaName::FinanceAI,   PersonaName::PsychologyAI,
};

inline std::string_view persona_text(PersonaName p) {
  switch (p) {
    case PersonaName::AIResearcher: return texts::kAiResearcherPersona;
    case PersonaName::PhysicsAI: return texts::kPhysicsPersona;
    case PersonaName::ChemistryAI: return texts::kChemistryPersona;
    case PersonaName::BiologyAI: return texts::kBiologyPersona;
    case PersonaName::FinanceAI: return texts::kFinancePersona;
    case PersonaName::PsychologyAI: return texts::kPsychologyPersona;
  }
  throw std::invalid_argument("unknown persona");
}

inline std::string_view persona_display_name(PersonaName p) {
  switch (p) {
    case PersonaName::AIResearcher: return "AI Researcher";
    case PersonaName::PhysicsAI: return "Physics-AI";
    case PersonaName::ChemistryAI: return "Chemistry-AI";
    case PersonaName::BiologyAI: return "Biology-AI";
    case PersonaName::FinanceAI: return "Finance-AI";
    case PersonaName::PsychologyAI: return "Psychology-AI";
  }
  throw std::invalid_argument("unknown persona");
}

inline std::string_view persona_id(PersonaName p) {
  switch (p) {
    case PersonaName::AIResearcher: return "AIResearcher";
    case PersonaName::PhysicsAI: return "PhysicsAI";
    case PersonaName::ChemistryAI: return "ChemistryAI";
    case PersonaName::BiologyAI: return "BiologyAI";
    case PersonaName::FinanceAI: return "FinanceAI";
    case PersonaName::PsychologyAI: return "PsychologyAI";
  }
  throw std::invalid_argument("unknown persona");
}

inline PersonaName persona_from_id(std::string_view id) {
  if (id == "AIResearcher") return PersonaName::AIResearcher;
  if (id == "PhysicsAI") return PersonaName::PhysicsAI;
  if (id == "ChemistryAI") return PersonaName::ChemistryAI;
  if (id == "BiologyAI") return PersonaName::BiologyAI;
  if (id == "FinanceAI") return PersonaName::FinanceAI;
  if (id == "PsychologyAI") return PersonaName::PsychologyAI;
  throw std::invalid_argument("unknown persona id: " + std::string(id));
}

inline void to_json(Json& j, const PersonaName& p) { j = persona_id(p); }
inline void from_json(const Json& j, PersonaName& p) { p = persona_from_id(j.get<std::string>()); }

// ---------------------------------------------------------------------------
// topics and papers

struct Topic {
  std::string id;
  std::string description;

  bool operator==(const Topic&) const = default;
};

inline void to_json(Json& j, const Topic& t) {
  j = Json{{"id", t.id}, {"description", t.description}};
}
inline void from_json(const Json& j, Topic& t) {
  j.at("id").get_to(t.id);
  j.at("description").get_to(t.description);
}

struct PaperRecord {
  std::string paper_id;
  std::string title;
  std::string abstract_text;
  std::int64_t fetched_at = 0;  // unix seconds; 0 for local/synthetic sources

  bool operator==(const PaperRecord&) const = default;
};

inline void to_json(Json& j, const PaperRecord& r) {
  j = Json{{"paper_id", r.paper_id},
           {"title", r.title},
           {"abstract", r.abstract_text},
           {"fetched_at", r.fetched_at}};
}
inline void from_json(const Json& j, PaperRecord& r) {
  j.at("paper_id").get_to(r.paper_id);
  j.at("title").get_to(r.title);
  j.at("abstract").get_to(r.abstract_text);
  r.fetched_at = j.value("fetched_at", std::int64_t{0});
}

// ---------------------------------------------------------------------------
// dialogue configuration

enum class Variant {
  Single,
  Baseline,
  IterativeSelfCritique,
  ParallelSelfCritique,
  DiverseCritic,
  DiverseProposerReviser,
};

inline std::string_view variant_id(Variant v) {
  switch (v) {
    case Variant::Single: return "Single";
    case Variant::Baseline: return "Baseline";
    case Variant::IterativeSelfCritique: return "IterativeSelfCritique";
    case Variant::ParallelSelfCritique: return "ParallelSelfCritique";
    case Variant::DiverseCritic: return "DiverseCritic";
    case Variant::DiverseProposerReviser: return "DiverseProposerReviser";
  }
  throw std::invalid_argument("unknown variant");
}

inline Variant variant_from_id(std::string_view id) {
  if (id == "Single") return Variant::Single;
  if (id == "Baseline") return Variant::Baseline;
  if (id == "IterativeSelfCritique") return Variant::IterativeSelfCritique;
  if (id == "ParallelSelfCritique") return Variant::ParallelSelfCritique;
  if (id == "DiverseCritic") return Variant::DiverseCritic;
  if (id == "DiverseProposerReviser") return Variant::DiverseProposerReviser;
  throw std::invalid_argument("unknown variant id: " + std::string(id));
}

inline void to_json(Json& j, const Variant& v) { j = variant_id(v); }
inline void from_json(const Json& j, Variant& v) { v = variant_from_id(j.get<std::string>()); }

// One point in the dialogue design space. depth_l counts critique-revision
// turns, parallel_n counts simultaneous critics; Single uses 0 for both.
struct DialogueConfig {
  std::string id;
  Variant variant = Variant::Baseline;
  int depth_l = 1;
  int parallel_n = 1;
  PersonaName proposer_persona = PersonaName::AIResearcher;
  std::vector<PersonaName> critic_personas = {PersonaName::AIResearcher};
  int ideas_per_trial_k = 5;
  int papers_per_trial_n = 10;

  bool operator==(const DialogueConfig&) const = default;
};

inline void to_json(Json& j, const DialogueConfig& c) {
  j = Json{{"id", c.id},
           {"variant", c.variant},
           {"depth_l", c.depth_l},
           {"parallel_n", c.parallel_n},
           {"proposer_persona", c.proposer_persona},
           {"critic_personas", c.critic_personas},
           {"ideas_per_trial_k", c.ideas_per_trial_k},
           {"papers_per_trial_n", c.papers_per_trial_n}};
}
inline void from_json(const Json& j, DialogueConfig& c) {
  c = DialogueConfig{};
  j.at("id").get_to(c.id);
  j.at("variant").get_to(c.variant);
  bool single = c.variant == Variant::Single;
  c.depth_l = j.value("depth_l", single ? 0 : 1);
  c.parallel_n = j.value("parallel_n", single ? 0 : 1);
  if (j.contains("proposer_persona")) j.at("proposer_persona").get_to(c.proposer_persona);
  if (j.contains("critic_personas"))
    j.at("critic_personas").get_to(c.critic_personas);
  else
    c.critic_personas.assign(static_cast<std::size_t>(std::max(c.parallel_n, 0)),
                             PersonaName::AIResearcher);
  c.ideas_per_trial_k = j.value("ideas_per_trial_k", 5);
  c.papers_per_trial_n = j.value("papers_per_trial_n", 10);
}

// Returns one description per violated invariant; empty means valid.
// Violations are data, not faults: nothing throws here.
inline std::vector<std::string> validate_config(const DialogueConfig& cfg) {
  std::vector<std::string> v;
  auto all_ai = [&] {
    for (auto p : cfg.critic_personas)
      if (p != PersonaName::AIResearcher) return false;
    return cfg.proposer_persona == PersonaName::AIResearcher;
  };
  auto critics_all_ai = [&] {
    for (auto p : cfg.critic_personas)
      if (p != PersonaName::AIResearcher) return false;
    return true;
  };

  if (cfg.id.empty()) v.push_back("config id must be nonempty");
  if (cfg.ideas_per_trial_k < 1) v.push_back("ideas_per_trial_k must be >= 1");
  if (cfg.papers_per_trial_n < 1) v.push_back("papers_per_trial_n must be >= 1");
  if (cfg.depth_l < 0) v.push_back("depth_l must be >= 0");
  if (cfg.parallel_n < 0) v.push_back("parallel_n must be >= 0");
  if (static_cast<int>(cfg.critic_personas.size()) != cfg.parallel_n)
    v.push_back("persona list length != N (critic_personas must have parallel_n entries)");

  switch (cfg.variant) {
    case Variant::Single:
      if (cfg.depth_l != 0) v.push_back("Single requires depth_l = 0");
      if (cfg.parallel_n != 0) v.push_back("Single requires parallel_n = 0");
      break;
    case Variant::Baseline:
      if (cfg.depth_l != 1) v.push_back("Baseline requires depth_l = 1");
      if (cfg.parallel_n != 1) v.push_back("Baseline requires parallel_n = 1");
      if (!all_ai()) v.push_back("Baseline requires all personas = AIResearcher");
      break;
    case Variant::IterativeSelfCritique:
      if (cfg.depth_l < 2 || cfg.depth_l > 4)
        v.push_back("IterativeSelfCritique requires depth_l in {2,3,4}");
      if (cfg.parallel_n != 1) v.push_back("IterativeSelfCritique requires parallel_n = 1");
      break;
    case Variant::ParallelSelfCritique:
      if (cfg.parallel_n < 2 || cfg.parallel_n > 4)
        v.push_back("ParallelSelfCritique requires parallel_n in {2,3,4}");
      if (cfg.depth_l != 1) v.push_back("ParallelSelfCritique requires depth_l = 1");
      break;
    case Variant::DiverseCritic: {
      bool has_domain_critic = false;
      for (auto p : cfg.critic_personas)
        if (p != PersonaName::AIResearcher) has_domain_critic = true;
      if (!has_domain_critic)
        v.push_back("DiverseCritic requires a non-AIResearcher critic persona");
      if (cfg.proposer_persona != PersonaName::AIResearcher)
        v.push_back("DiverseCritic requires proposer_persona = AIResearcher");
      break;
    }
    case Variant::DiverseProposerReviser:
      if (cfg.proposer_persona == PersonaName::AIResearcher)
        v.push_back("DiverseProposerReviser requires proposer_persona != AIResearcher");
      if (!critics_all_ai())
        v.push_back("DiverseProposerReviser requires all critic_personas = AIResearcher");
      break;
  }
  return v;
}

// ---------------------------------------------------------------------------
// ideas

struct IdeaBody {
  std::string problem;
  std::string existing_methods;  // may be empty ("if there are any")
  std::string motivation;
  std::string proposed_method;
  std::string experiment_plan;

  bool operator==(const IdeaBody&) const = default;
};

inline void to_json(Json& j, const IdeaBody& b) {
  j = Json{{"problem", b.problem},
           {"existing_methods", b.existing_methods},
           {"motivation", b.motivation},
           {"proposed_method", b.proposed_method},
           {"experiment_plan", b.experiment_plan}};
}
inline void from_json(const Json& j, IdeaBody& b) {
  j.at("problem").get_to(b.problem);
  j.at("existing_methods").get_to(b.existing_methods);
  j.at("motivation").get_to(b.motivation);
  j.at("proposed_method").get_to(b.proposed_method);
  j.at("experiment_plan").get_to(b.experiment_plan);
}

// Canonical five-part rendering, used both for prompts and for embedding.
inline std::string five_part_text(const IdeaBody& b) {
  return "(1) Problem: " + b.problem + "\n(2) Existing Methods: " + b.existing_methods +
         "\n(3) Motivation: " + b.motivation + "\n(4) Proposed Method: " + b.proposed_method +
         "\n(5) Experiment Plan: " + b.experiment_plan;
}

struct IdeaOrigin {
  std::string topic_id;
  std::string config_id;
  int seed = 0;
  int index = 0;  // position within the trial's idea set

  bool operator==(const IdeaOrigin&) const = default;

  std::string id() const {
    return topic_id + "/" + config_id + "/s" + std::to_string(seed) + "/i" +
           std::to_string(index);
  }
};

inline void to_json(Json& j, const IdeaOrigin& o) {
  j = Json{{"topic", o.topic_id}, {"config", o.config_id}, {"seed", o.seed}, {"index", o.index}};
}
inline void from_json(const Json& j, IdeaOrigin& o) {
  j.at("topic").get_to(o.topic_id);
  j.at("config").get_to(o.config_id);
  j.at("seed").get_to(o.seed);
  j.at("index").get_to(o.index);
}

struct IdeaRecord {
  std::string idea_name;
  IdeaBody body;
  IdeaOrigin origin;
  std::optional<std::vector<double>> embedding;  // unit length when present
  std::optional<bool> survived_dedup;
  bool sectioned = true;  // false when the reply lacked the numbered headers

  bool operator==(const IdeaRecord&) const = default;

  std::string id() const { return origin.id(); }
};

inline void to_json(Json& j, const IdeaRecord& r) {
  j = Json{{"idea_name", r.idea_name},
           {"body", r.body},
           {"origin", r.origin},
           {"embedding", nullptr},
           {"survived_dedup", nullptr},
           {"sectioned", r.sectioned}};
  if (r.embedding) j["embedding"] = *r.embedding;
  if (r.survived_dedup) j["survived_dedup"] = *r.survived_dedup;
}
inline void from_json(const Json& j, IdeaRecord& r) {
  j.at("idea_name").get_to(r.idea_name);
  j.at("body").get_to(r.body);
  j.at("origin").get_to(r.origin);
  r.embedding.reset();
  r.survived_dedup.reset();
  if (j.contains("embedding") && !j["embedding"].is_null())
    r.embedding = j["embedding"].get<std::vector<double>>();
  if (j.contains("survived_dedup") && !j["survived_dedup"].is_null())
    r.survived_dedup = j["survived_dedup"].get<bool>();
  r.sectioned = j.value("sectioned", true);
}

// ---------------------------------------------------------------------------
// transcripts

enum class StepRole { Ideation, Critique, Revision };

inline std::string_view step_role_id(StepRole r) {
  switch (r) {
    case StepRole::Ideation: return "Ideation";
    case StepRole::Critique: return "Critique";
    case StepRole::Revision: return "Revision";
  }
  throw std::invalid_argument("unknown step role");
}

inline StepRole step_role_from_id(std::string_view id) {
  if (id == "Ideation") return StepRole::Ideation;
  if (id == "Critique") return StepRole::Critique;
  if (id == "Revision") return StepRole::Revision;
  throw std::invalid_argument("unknown step role id: " + std::string(id));
}

inline void to_json(Json& j, const StepRole& r) { j = step_role_id(r); }
inline void from_json(const Json& j, StepRole& r) { r = step_role_from_id(j.get<std::string>()); }

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  bool operator==(const TokenUsage&) const = default;
};

inline void to_json(Json& j, const TokenUsage& u) {
  j = Json{{"prompt_tokens", u.prompt_tokens}, {"completion_tokens", u.completion_tokens}};
}
inline void from_json(const Json& j, TokenUsage& u) {
  j.at("prompt_tokens").get_to(u.prompt_tokens);
  j.at("completion_tokens").get_to(u.completion_tokens);
}

struct AgentStep {
  StepRole role = StepRole::Ideation;
  PersonaName persona = PersonaName::AIResearcher;
  std::string system_prompt;
  std::string rendered_prompt;
  std::string raw_response;
  Json parsed_payload;
  TokenUsage usage;
  std::int64_t wall_time_ms = 0;  // provider-reported latency; 0 on the mock
  int attempts = 1;

  bool operator==(const AgentStep&) const = default;
};

inline void to_json(Json& j, const AgentStep& s) {
  j = Json{{"role", s.role},
           {"persona", s.persona},
           {"system_prompt", s.system_prompt},
           {"rendered_prompt", s.rendered_prompt},
           {"raw_response", s.raw_response},
           {"parsed_payload", s.parsed_payload},
           {"usage", s.usage},
           {"wall_time_ms", s.wall_time_ms},
           {"attempts", s.attempts}};
}
inline void from_json(const Json& j, AgentStep& s) {
  j.at("role").get_to(s.role);
  j.at("persona").get_to(s.persona);
  j.at("system_prompt").get_to(s.system_prompt);
  j.at("rendered_prompt").get_to(s.rendered_prompt);
  j.at("raw_response").get_to(s.raw_response);
  s.parsed_payload = j.at("parsed_payload");
  j.at("usage").get_to(s.usage);
  j.at("wall_time_ms").get_to(s.wall_time_ms);
  j.at("attempts").get_to(s.attempts);
}

struct Transcript {
  DialogueConfig config;
  Topic topic;
  int seed = 0;
  std::vector<AgentStep> steps;
  std::vector<IdeaRecord> final_ideas;

  bool operator==(const Transcript&) const = default;
};

inline void to_json(Json& j, const Transcript& t) {
  j = Json{{"config", t.config},
           {"topic", t.topic},
           {"seed", t.seed},
           {"steps", t.steps},
           {"final_ideas", t.final_ideas}};
}
inline void from_json(const Json& j, Transcript& t) {
  j.at("config").get_to(t.config);
  j.at("topic").get_to(t.topic);
  j.at("seed").get_to(t.seed);
  j.at("steps").get_to(t.steps);
  j.at("final_ideas").get_to(t.final_ideas);
}

// ---------------------------------------------------------------------------
// tournament records

enum class Verdict { A, B };

inline void to_json(Json& j, const Verdict& v) { j = (v == Verdict::A) ? "A" : "B"; }
inline void from_json(const Json& j, Verdict& v) {
  v = (j.get<std::string>() == "A") ? Verdict::A : Verdict::B;
}

struct MatchRecord {
  int round = 1;
  std::string proposal_a_id;
  std::string proposal_b_id;
  Verdict judge_verdict = Verdict::A;
  bool presentation_order_swapped = false;

  bool operator==(const MatchRecord&) const = default;
};

inline void to_json(Json& j, const MatchRecord& m) {
  j = Json{{"round", m.round},
           {"proposal_a_id", m.proposal_a_id},
           {"proposal_b_id", m.proposal_b_id},
           {"judge_verdict", m.judge_verdict},
           {"presentation_order_swapped", m.presentation_order_swapped}};
}
inline void from_json(const Json& j, MatchRecord& m) {
  j.at("round").get_to(m.round);
  j.at("proposal_a_id").get_to(m.proposal_a_id);
  j.at("proposal_b_id").get_to(m.proposal_b_id);
  j.at("judge_verdict").get_to(m.judge_verdict);
  j.at("presentation_order_swapped").get_to(m.presentation_order_swapped);
}

enum class ProposalSource { Baseline, Candidate };

inline void to_json(Json& j, const ProposalSource& s) {
  j = (s == ProposalSource::Baseline) ? "Baseline" : "Candidate";
}
inline void from_json(const Json& j, ProposalSource& s) {
  s = (j.get<std::string>() == "Baseline") ? ProposalSource::Baseline : ProposalSource::Candidate;
}

struct RankedProposal {
  std::string proposal_id;
  ProposalSource source = ProposalSource::Baseline;
  int score = 0;  // accumulated wins
  int rank = 1;

  bool operator==(const RankedProposal&) const = default;
};

inline void to_json(Json& j, const RankedProposal& r) {
  j = Json{{"proposal_id", r.proposal_id},
           {"source", r.source},
           {"score", r.score},
           {"rank", r.rank}};
}
inline void from_json(const Json& j, RankedProposal& r) {
  j.at("proposal_id").get_to(r.proposal_id);
  j.at("source").get_to(r.source);
  j.at("score").get_to(r.score);
  j.at("rank").get_to(r.rank);
}

// ---------------------------------------------------------------------------
// proposals

struct DecodingParams {
  double temperature = 1.0;
  double top_p = 1.0;
  int max_tokens = 4096;

  bool operator==(const DecodingParams&) const = default;
};

inline void to_json(Json& j, const DecodingParams& d) {
  j = Json{{"temperature", d.temperature}, {"top_p", d.top_p}, {"max_tokens", d.max_tokens}};
}
inline void from_json(const Json& j, DecodingParams& d) {
  j.at("temperature").get_to(d.temperature);
  j.at("top_p").get_to(d.top_p);
  j.at("max_tokens").get_to(d.max_tokens);
}

struct Proposal {
  std::string proposal_id;  // equals the source idea's id
  IdeaOrigin source_idea;
  std::string idea_name;
  std::string expanded_text;
  DecodingParams decoding;

  bool operator==(const Proposal&) const = default;
};

inline void to_json(Json& j, const Proposal& p) {
  j = Json{{"proposal_id", p.proposal_id},
           {"source_idea", p.source_idea},
           {"idea_name", p.idea_name},
           {"expanded_text", p.expanded_text},
           {"decoding", p.decoding}};
}
inline void from_json(const Json& j, Proposal& p) {
  j.at("proposal_id").get_to(p.proposal_id);
  j.at("source_idea").get_to(p.source_idea);
  j.at("idea_name").get_to(p.idea_name);
  j.at("expanded_text").get_to(p.expanded_text);
  j.at("decoding").get_to(p.decoding);
}

// ---------------------------------------------------------------------------
// run manifest

struct ProviderSettings {
  std::string kind = "mock";  // "mock" | "openai"
  std::string chat_model = "gpt-4o-mini";
  std::string judge_model = "gpt-4";
  std::string embed_model = "all-MiniLM-L6-v2";
  std::string base_url = "http://localhost:8000";
  std::string embed_base_url;  // empty: same as base_url
  std::string api_key_env = "COLLOQUY_API_KEY";
  std::uint64_t mock_seed = 0;
  int max_concurrent = 8;
  int embed_batch = 128;

  bool operator==(const ProviderSettings&) const = default;
};

inline void to_json(Json& j, const ProviderSettings& p) {
  j = Json{{"kind", p.kind},
           {"chat_model", p.chat_model},
           {"judge_model", p.judge_model},
           {"embed_model", p.embed_model},
           {"base_url", p.base_url},
           {"embed_base_url", p.embed_base_url},
           {"api_key_env", p.api_key_env},
           {"mock_seed", p.mock_seed},
           {"max_concurrent", p.max_concurrent},
           {"embed_batch", p.embed_batch}};
}
inline void from_json(const Json& j, ProviderSettings& p) {
  ProviderSettings d;
  p.kind = j.value("kind", d.kind);
  p.chat_model = j.value("chat_model", d.chat_model);
  p.judge_model = j.value("judge_model", d.judge_model);
  p.embed_model = j.value("embed_model", d.embed_model);
  p.base_url = j.value("base_url", d.base_url);
  p.embed_base_url = j.value("embed_base_url", d.embed_base_url);
  p.api_key_env = j.value("api_key_env", d.api_key_env);
  p.mock_seed = j.value("mock_seed", d.mock_seed);
  p.max_concurrent = j.value("max_concurrent", d.max_concurrent);
  p.embed_batch = j.value("embed_batch", d.embed_batch);
}

struct BankSettings {
  std::string source = "synthetic";  // "synthetic" | "local" | "remote"
  int bank_size = 120;
  std::string local_corpus_path;
  std::string s2_base_url = "https://api.semanticscholar.org";
  std::string s2_api_key_env = "S2_API_KEY";

  bool operator==(const BankSettings&) const = default;
};

inline void to_json(Json& j, const BankSettings& b) {
  j = Json{{"source", b.source},
           {"bank_size", b.bank_size},
           {"local_corpus_path", b.local_corpus_path},
           {"s2_base_url", b.s2_base_url},
           {"s2_api_key_env", b.s2_api_key_env}};
}
inline void from_json(const Json& j, BankSettings& b) {
  BankSettings d;
  b.source = j.value("source", d.source);
  b.bank_size = j.value("bank_size", d.bank_size);
  b.local_corpus_path = j.value("local_corpus_path", d.local_corpus_path);
  b.s2_base_url = j.value("s2_base_url", d.s2_base_url);
  b.s2_api_key_env = j.value("s2_api_key_env", d.s2_api_key_env);
}

struct RunManifest {
  int layout_version = 1;
  std::vector<Topic> topics;
  std::vector<DialogueConfig> configs;
  int seeds_per_cell = 20;
  DecodingParams decoding;                          // shared by every generation call
  DecodingParams judge_decoding{0.0, 1.0, 256};
  std::int64_t target_total_ideas_r = 0;
  double dedup_threshold = 0.8;
  int tournament_rounds = 10;
  bool order_swap = true;
  std::vector<int> precision_ns = {10, 20, 40};
  std::string baseline_config_id = "baseline";
  std::string examples_text;   // fills the {examples} slot
  std::string method_word = "prompting";  // fills the {method} slot
  bool cumulative_context = true;  // share idea names across seeds of a cell
  ProviderSettings provider;
  BankSettings bank;

  bool operator==(const RunManifest&) const = default;
};

inline void to_json(Json& j, const RunManifest& m) {
  j = Json{{"layout_version", m.layout_version},
           {"topics", m.topics},
           {"configs", m.configs},
           {"seeds_per_cell", m.seeds_per_cell},
           {"decoding", m.decoding},
           {"judge_decoding", m.judge_decoding},
           {"target_total_ideas_r", m.target_total_ideas_r},
           {"dedup_threshold", m.dedup_threshold},
           {"tournament_rounds", m.tournament_rounds},
           {"order_swap", m.order_swap},
           {"precision_ns", m.precision_ns},
           {"baseline_config_id", m.baseline_config_id},
           {"examples_text", m.examples_text},
           {"method_word", m.method_word},
           {"cumulative_context", m.cumulative_context},
           {"provider", m.provider},
           {"bank", m.bank}};
}
inline void from_json(const Json& j, RunManifest& m) {
  RunManifest d;
  m.layout_version = j.value("layout_version", d.layout_version);
  j.at("topics").get_to(m.topics);
  j.at("configs").get_to(m.configs);
  m.seeds_per_cell = j.value("seeds_per_cell", d.seeds_per_cell);
  if (j.contains("decoding")) j.at("decoding").get_to(m.decoding);
  if (j.contains("judge_decoding")) j.at("judge_decoding").get_to(m.judge_decoding);
  m.target_total_ideas_r = j.value("target_total_ideas_r", std::int64_t{0});
  m.dedup_threshold = j.value("dedup_threshold", d.dedup_threshold);
  m.tournament_rounds = j.value("tournament_rounds", d.tournament_rounds);
  m.order_swap = j.value("order_swap", d.order_swap);
  m.precision_ns = j.value("precision_ns", d.precision_ns);
  m.baseline_config_id = j.value("baseline_config_id", d.baseline_config_id);
  m.examples_text = j.value("examples_text", d.examples_text);
  m.method_word = j.value("method_word", d.method_word);
  m.cumulative_context = j.value("cumulative_context", d.cumulative_context);
  if (j.contains("provider")) j.at("provider").get_to(m.provider);
  if (j.contains("bank")) j.at("bank").get_to(m.bank);
}

inline std::int64_t expected_total_ideas(const RunManifest& m) {
  std::int64_t total = 0;
  for (const auto& cfg : m.configs)
    total += static_cast<std::int64_t>(m.topics.size()) * m.seeds_per_cell * cfg.ideas_per_trial_k;
  return total;
}

inline std::vector<std::string> validate_manifest(const RunManifest& m) {
  std::vector<std::string> v;
  if (m.topics.empty()) v.push_back("manifest has no topics");
  if (m.configs.empty()) v.push_back("manifest has no configs");
  if (m.seeds_per_cell < 1) v.push_back("seeds_per_cell must be >= 1");
  if (!(m.dedup_threshold > 0.0 && m.dedup_threshold < 1.0))
    v.push_back("dedup_threshold must be in (0,1)");
  if (m.tournament_rounds < 1) v.push_back("tournament_rounds must be >= 1");
  std::vector<std::string> seen;
  for (const auto& t : m.topics) {
    if (t.id.empty()) v.push_back("topic id must be nonempty");
    if (t.description.empty()) v.push_back("topic description must be nonempty (" + t.id + ")");
    if (std::find(seen.begin(), seen.end(), t.id) != seen.end())
      v.push_back("duplicate topic id: " + t.id);
    seen.push_back(t.id);
  }
  seen.clear();
  for (const auto& c : m.configs) {
    for (auto& violation : validate_config(c)) v.push_back(c.id + ": " + violation);
    if (std::find(seen.begin(), seen.end(), c.id) != seen.end())
      v.push_back("duplicate config id: " + c.id);
    seen.push_back(c.id);
  }
  if (m.target_total_ideas_r != 0 && m.target_total_ideas_r != expected_total_ideas(m))
    v.push_back("target_total_ideas_r (" + std::to_string(m.target_total_ideas_r) +
                ") != topics x configs x seeds x k (" +
                std::to_string(expected_total_ideas(m)) + ")");
  return v;
}

// ---------------------------------------------------------------------------
// defaults

inline std::vector<Topic> default_topics() {
  return {
      {"bias",
       "novel prompting methods to reduce social biases and stereotypes of large language "
       "models"},
      {"coding", "novel prompting methods for large language models to improve code generation"},
      {"safety",
       "novel prompting methods to improve large language models' robustness against adversarial "
       "attacks or improve their security or privacy"},
      {"multilinguality",
       "novel prompting methods to improve large language models' performance on multilingual "
       "tasks or low-resource languages and vernacular languages"},
      {"factuality",
       "novel prompting methods that can improve factuality and reduce hallucination of large "
       "language models"},
      {"math",
       "novel prompting methods for large language models to improve mathematical problem "
       "solving"},
      {"uncertainty",
       "novel prompting methods that can better quantify uncertainty or calibrate the confidence "
       "of large language models"},
  };
}

// The ten standard configurations: Single, Baseline, L in {2,3,4},
// N in {2,3,4}, and the two persona placements.
inline std::vector<DialogueConfig> default_configs() {
  std::vector<DialogueConfig> out;
  auto ai = PersonaName::AIResearcher;

  DialogueConfig single{"single", Variant::Single, 0, 0, ai, {}, 5, 10};
  out.push_back(single);
  out.push_back({"baseline", Variant::Baseline, 1, 1, ai, {ai}, 5, 10});
  for (int l : {2, 3, 4})
    out.push_back({"iter-l" + std::to_string(l), Variant::IterativeSelfCritique, l, 1, ai, {ai},
                   5, 10});
  for (int n : {2, 3, 4})
    out.push_back({"par-n" + std::to_string(n), Variant::ParallelSelfCritique, 1, n, ai,
                   std::vector<PersonaName>(static_cast<std::size_t>(n), ai), 5, 10});
  // The stored domain persona declares the variant's shape; the persona a
  // trial actually uses rotates with the seed (see route_personas).
  out.push_back({"diverse-critic", Variant::DiverseCritic, 1, 1, ai,
                 {PersonaName::PhysicsAI}, 5, 10});
  out.push_back({"diverse-proposer", Variant::DiverseProposerReviser, 1, 1,
                 PersonaName::PhysicsAI, {ai}, 5, 10});
  return out;
}

inline std::string default_examples_text() {
  return R"({"Curriculum Prompt Scheduling": "(1) Problem: Large language models often fail on multi-step tasks when the prompt presents all constraints at once. (2) Existing Methods: Chain-of-thought prompting and least-to-most prompting decompose reasoning but fix the decomposition in advance. (3) Motivation: Human learners master complex skills through curricula that order subproblems by difficulty, suggesting prompts could be scheduled the same way. (4) Proposed Method: Construct a sequence of prompts that introduces task constraints one at a time, where each prompt includes the model's validated answer to the previous stage and a scheduler chooses the next constraint based on the model's self-reported confidence. (5) Experiment Plan: Compare against chain-of-thought and least-to-most prompting on GSM8K and BIG-Bench Hard, measuring exact-match accuracy and calibration error."})";
}

inline RunManifest default_manifest() {
  RunManifest m;
  m.topics = default_topics();
  m.configs = default_configs();
  m.seeds_per_cell = 20;
  m.examples_text = default_examples_text();
  m.target_total_ideas_r = expected_total_ideas(m);  // 7 x 10 x 20 x 5 = 7000
  return m;
}

}  // namespace colloquy
