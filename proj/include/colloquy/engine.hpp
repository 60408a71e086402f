#pragma once

#include <future>
#include <string>
#include <vector>

#include "colloquy/domain.hpp"
#include "colloquy/errors.hpp"
#include "colloquy/gateway.hpp"
#include "colloquy/mock_provider.hpp"
#include "colloquy/paper_bank.hpp"
#include "colloquy/prompts.hpp"

namespace colloquy {

// Carries the partial transcript so a failed trial can be examined post-mortem.
struct TrialFailed : Error {
  Transcript partial;
  TrialFailed(const std::string& msg, Transcript t) : Error(msg), partial(std::move(t)) {}
};

// Phase machine for one trial; transitions other than
// Init -> Ideated -> (Critiqued -> Revised)* -> Done are programming errors.
struct EngineState {
  enum class Phase { Init, Ideated, Critiqued, Revised, Done };
  Phase phase = Phase::Init;
  int round = 0;

  void to_ideated() {
    require(phase == Phase::Init, "Ideated");
    phase = Phase::Ideated;
  }
  void to_critiqued() {
    require(phase == Phase::Ideated || phase == Phase::Revised, "Critiqued");
    phase = Phase::Critiqued;
  }
  void to_revised() {
    require(phase == Phase::Critiqued, "Revised");
    phase = Phase::Revised;
    ++round;
  }
  void to_done() {
    require(phase == Phase::Ideated || phase == Phase::Revised, "Done");
    phase = Phase::Done;
  }

 private:
  void require(bool ok, const char* target) {
    if (!ok) throw std::logic_error(std::string("illegal engine transition to ") + target);
  }
};

struct RoutedPersonas {
  PersonaName proposer = PersonaName::AIResearcher;  // also the reviser
  std::vector<PersonaName> critics;
};

// Diverse variants draw their domain persona from the seed (round-robin over
// the five domain personas) so coverage balances across a 20-seed cell.
inline RoutedPersonas route_personas(const DialogueConfig& cfg, int seed) {
  RoutedPersonas r;
  int critic_count = std::max(cfg.parallel_n, 0);
  PersonaName ai = PersonaName::AIResearcher;
  switch (cfg.variant) {
    case Variant::Single:
      r.proposer = ai;
      break;
    case Variant::DiverseCritic:
      r.proposer = ai;
      r.critics.assign(static_cast<std::size_t>(critic_count),
                       kDomainPersonas[static_cast<std::size_t>(seed % 5)]);
      break;
    case Variant::DiverseProposerReviser:
      r.proposer = kDomainPersonas[static_cast<std::size_t>(seed % 5)];
      r.critics.assign(static_cast<std::size_t>(critic_count), ai);
      break;
    default:
      r.proposer = ai;
      r.critics.assign(static_cast<std::size_t>(critic_count), ai);
      break;
  }
  return r;
}

inline int expected_step_count(const DialogueConfig& cfg) {
  switch (cfg.variant) {
    case Variant::Single: return 1;
    case Variant::Baseline: return 3;
    case Variant::IterativeSelfCritique: return 1 + 2 * cfg.depth_l;
    case Variant::ParallelSelfCritique: return 2 + cfg.parallel_n;
    case Variant::DiverseCritic: return 3;
    case Variant::DiverseProposerReviser: return 3;
  }
  throw std::invalid_argument("unknown variant");
}

struct TrialContext {
  DecodingParams decoding;
  std::string chat_model = "mock-chat";
  std::string examples_text;
  std::string method_word = "prompting";
  std::string existing_ideas;          // newline-joined prior idea names, may be empty
  const PromptSet* prompts = nullptr;  // null: embedded defaults
};

namespace detail {

struct StepOutcome {
  AgentStep step;
  std::vector<ParsedIdea> ideas;  // ideation / revision
  CritiquePayload critique;       // critique
};

// Internal signal: a step exhausted its re-ask; the trial driver turns it
// into TrialFailed with the partial transcript attached.
struct StepFailed {
  AgentStep step;
  std::string message;
};

// Either-shaped so parallel critique results cross thread boundaries without
// touching shared state.
struct StepResult {
  bool ok = false;
  StepOutcome outcome;
  StepFailed failure;
};

inline AgentStep base_step(StepRole role, PersonaName persona, const std::string& prompt) {
  AgentStep s;
  s.role = role;
  s.persona = persona;
  s.system_prompt = std::string(persona_text(persona));
  s.rendered_prompt = prompt;
  return s;
}

}  // namespace detail

// Runs one trial of cfg on (topic, seed): Ideation, then the variant's
// critique/revision schedule, per the call-count law. Parse failures get one
// corrective re-ask; a second failure aborts the trial.
inline Transcript run_trial(const DialogueConfig& cfg, const Topic& topic, int seed,
                            Gateway& gateway, const PaperBank& bank, const TrialContext& ctx) {
  if (auto violations = validate_config(cfg); !violations.empty())
    throw std::invalid_argument("invalid config " + cfg.id + ": " + violations.front());
  const PromptSet& prompts = ctx.prompts ? *ctx.prompts : default_prompts();

  Transcript t;
  t.config = cfg;
  t.topic = topic;
  t.seed = seed;

  RoutedPersonas personas = route_personas(cfg, seed);
  EngineState state;

  auto chat = [&](PersonaName persona, const std::string& user_prompt) {
    ChatRequest req;
    req.system_prompt = std::string(persona_text(persona));
    req.user_prompt = user_prompt;
    req.decoding = ctx.decoding;
    req.model_name = ctx.chat_model;
    return gateway.complete(req);
  };

  // A step whose reply must parse into exactly ideas_per_trial_k ideas.
  // Pure: no shared state, safe to call from worker threads.
  auto idea_step = [&](StepRole role, PersonaName persona,
                       const std::string& prompt) -> detail::StepOutcome {
    detail::StepOutcome out;
    out.step = detail::base_step(role, persona, prompt);
    std::string ask = prompt;
    for (int attempt = 1;; ++attempt) {
      ChatResponse resp = chat(persona, ask);
      out.step.rendered_prompt = ask;
      out.step.raw_response = resp.text;
      out.step.usage = resp.usage;
      out.step.wall_time_ms = resp.latency_ms;
      out.step.attempts = attempt;
      try {
        out.ideas = parse_ideas(resp.text, cfg.ideas_per_trial_k);
        break;
      } catch (const Error& e) {
        if (attempt >= 2)
          throw detail::StepFailed{out.step, std::string(step_role_id(role)) +
                                                 " unrecoverable: " + e.what()};
        ask = prompt + "\n\n" + std::string(kCardinalityCorrective);
      }
    }
    Json payload = Json::object();
    for (const auto& idea : out.ideas) payload[idea.name] = five_part_text(idea.body);
    out.step.parsed_payload = std::move(payload);
    return out;
  };

  auto critique_step = [&](PersonaName persona,
                           const std::string& prompt) -> detail::StepOutcome {
    detail::StepOutcome out;
    out.step = detail::base_step(StepRole::Critique, persona, prompt);
    for (int attempt = 1;; ++attempt) {
      ChatResponse resp = chat(persona, prompt);
      out.step.raw_response = resp.text;
      out.step.usage = resp.usage;
      out.step.wall_time_ms = resp.latency_ms;
      out.step.attempts = attempt;
      try {
        out.critique = parse_critique(resp.text);
        break;
      } catch (const Error& e) {
        if (attempt >= 2)
          throw detail::StepFailed{out.step, std::string("Critique unrecoverable: ") + e.what()};
      }
    }
    Json payload;
    to_json(payload, out.critique);
    out.step.parsed_payload = std::move(payload);
    return out;
  };

  auto fail_trial = [&](detail::StepFailed&& f) -> TrialFailed {
    t.steps.push_back(std::move(f.step));
    return TrialFailed(f.message, std::move(t));
  };

  // --- Ideation ---
  SlotMap ideation_slots{
      {"persona_prompts", std::string(persona_text(personas.proposer))},
      {"topic_description", topic.description},
      {"formatted_papers", format_papers(sample_papers(bank, cfg.papers_per_trial_n,
                                                       static_cast<std::uint64_t>(seed)))},
      {"ideas_n", std::to_string(cfg.ideas_per_trial_k)},
      {"examples", ctx.examples_text},
      {"method", ctx.method_word},
      {"existing_ideas", ctx.existing_ideas},
  };
  std::vector<ParsedIdea> current;
  try {
    auto ideation =
        idea_step(StepRole::Ideation, personas.proposer, render(prompts.ideation, ideation_slots));
    t.steps.push_back(ideation.step);
    current = std::move(ideation.ideas);
  } catch (detail::StepFailed& f) {
    throw fail_trial(std::move(f));
  }
  state.to_ideated();

  int rounds = 0;
  switch (cfg.variant) {
    case Variant::Single: rounds = 0; break;
    case Variant::IterativeSelfCritique: rounds = cfg.depth_l; break;
    default: rounds = 1; break;
  }

  for (int round = 0; round < rounds; ++round) {
    std::string ideas_str = ideas_json_str(current);
    SlotMap critique_base{
        {"topic_description", topic.description},
        {"current_ideas_json_str", ideas_str},
    };

    // N critiques of the same idea snapshot, concurrent but order-stable.
    std::vector<detail::StepResult> critiques(personas.critics.size());
    if (personas.critics.size() > 1) {
      std::vector<std::future<detail::StepResult>> futures;
      futures.reserve(personas.critics.size());
      for (std::size_t c = 0; c < personas.critics.size(); ++c) {
        SlotMap slots = critique_base;
        slots.emplace("persona_prompts", std::string(persona_text(personas.critics[c])));
        std::string prompt = render(prompts.critique, slots);
        PersonaName persona = personas.critics[c];
        futures.push_back(std::async(std::launch::async, [&critique_step, persona, prompt] {
          detail::StepResult r;
          try {
            r.outcome = critique_step(persona, prompt);
            r.ok = true;
          } catch (detail::StepFailed& f) {
            r.failure = std::move(f);
          }
          return r;
        }));
      }
      for (std::size_t c = 0; c < personas.critics.size(); ++c) critiques[c] = futures[c].get();
    } else {
      SlotMap slots = critique_base;
      slots.emplace("persona_prompts", std::string(persona_text(personas.critics[0])));
      try {
        critiques[0].outcome = critique_step(personas.critics[0], render(prompts.critique, slots));
        critiques[0].ok = true;
      } catch (detail::StepFailed& f) {
        critiques[0].failure = std::move(f);
      }
    }
    std::vector<CritiquePayload> payloads;
    for (auto& c : critiques) {
      if (!c.ok) throw fail_trial(std::move(c.failure));
      t.steps.push_back(c.outcome.step);
      payloads.push_back(c.outcome.critique);
    }
    state.to_critiqued();

    SlotMap revise_slots{
        {"persona_prompts", std::string(persona_text(personas.proposer))},
        {"topic_description", topic.description},
        {"current_ideas_json_str", ideas_str},
        {"response_critic", aggregate_critiques(payloads, personas.critics)},
    };
    try {
      auto revision =
          idea_step(StepRole::Revision, personas.proposer, render(prompts.revise, revise_slots));
      t.steps.push_back(revision.step);
      current = std::move(revision.ideas);
    } catch (detail::StepFailed& f) {
      throw fail_trial(std::move(f));
    }
    state.to_revised();
  }
  state.to_done();

  t.final_ideas.reserve(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    IdeaRecord rec;
    rec.idea_name = current[i].name;
    rec.body = current[i].body;
    rec.origin = IdeaOrigin{topic.id, cfg.id, seed, static_cast<int>(i)};
    rec.sectioned = current[i].sectioned;
    t.final_ideas.push_back(std::move(rec));
  }
  if (static_cast<int>(t.steps.size()) != expected_step_count(cfg))
    throw TrialFailed("step count " + std::to_string(t.steps.size()) + " != expected " +
                          std::to_string(expected_step_count(cfg)),
                      std::move(t));
  return t;
}

}  // namespace colloquy
