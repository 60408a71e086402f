#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "colloquy/domain.hpp"
#include "colloquy/errors.hpp"
#include "colloquy/gateway.hpp"
#include "colloquy/prompts.hpp"
#include "colloquy/util.hpp"

namespace colloquy {

struct ExpandContext {
  DecodingParams decoding;  // identical to generation decoding
  std::string chat_model = "mock-chat";
  const PromptSet* prompts = nullptr;
};

// One chat call turning a dedup survivor into a long-form proposal. Ideas
// that did not survive (or were never deduped) are rejected before any call.
inline Proposal expand(const IdeaRecord& idea, const Topic& topic, Gateway& gateway,
                       const ExpandContext& ctx) {
  if (!idea.survived_dedup.has_value() || !*idea.survived_dedup)
    throw std::invalid_argument("expand: idea " + idea.id() + " is not a dedup survivor");
  const PromptSet& prompts = ctx.prompts ? *ctx.prompts : default_prompts();

  SlotMap slots{
      {"persona_prompts", std::string(texts::kAiResearcherPersona)},
      {"topic_description", topic.description},
      {"idea_json_str", idea_json_str(idea)},
  };
  ChatRequest req;
  req.system_prompt = std::string(texts::kAiResearcherPersona);
  req.user_prompt = render(prompts.expand, slots);
  req.decoding = ctx.decoding;
  req.model_name = ctx.chat_model;

  ChatResponse resp;
  try {
    resp = gateway.complete(req);
  } catch (const Error& e) {
    throw ExpansionFailed("expansion of " + idea.id() + " failed: " + e.what());
  }
  if (trim(resp.text).empty())
    throw ExpansionFailed("expansion of " + idea.id() + " returned empty text");

  Proposal p;
  p.proposal_id = idea.id();
  p.source_idea = idea.origin;
  p.idea_name = idea.idea_name;
  p.expanded_text = resp.text;
  p.decoding = ctx.decoding;
  return p;
}

// Expands every survivor in order, reusing cached proposals from cache_path
// (JSON lines). Already-cached ideas cost zero calls; the cache is rewritten
// in survivor order only when something new was added.
inline std::vector<Proposal> expand_pool(const std::vector<IdeaRecord>& survivors,
                                         const Topic& topic, Gateway& gateway,
                                         const ExpandContext& ctx,
                                         const std::filesystem::path& cache_path) {
  std::map<std::string, Proposal> cached;
  if (std::filesystem::exists(cache_path)) {
    for (const auto& line : split_lines(read_file(cache_path))) {
      if (trim(line).empty()) continue;
      Proposal p = Json::parse(line).get<Proposal>();
      cached[p.proposal_id] = std::move(p);
    }
  }

  std::vector<Proposal> out;
  out.reserve(survivors.size());
  bool added = false;
  for (const auto& idea : survivors) {
    auto it = cached.find(idea.id());
    if (it != cached.end()) {
      out.push_back(it->second);
    } else {
      out.push_back(expand(idea, topic, gateway, ctx));
      added = true;
    }
  }
  if (added || (!survivors.empty() && !std::filesystem::exists(cache_path))) {
    std::string lines;
    for (const auto& p : out) {
      Json j = p;
      lines += j.dump() + "\n";
    }
    atomic_write_file(cache_path, lines);
  }
  return out;
}

}  // namespace colloquy
