#pragma once

#include <deque>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "colloquy/gateway.hpp"
#include "colloquy/prompts.hpp"
#include "colloquy/util.hpp"

namespace colloquy {

// Appended by callers when re-asking after a malformed reply; the mock keys
// its flaky behaviors off their absence so one re-ask always recovers.
inline constexpr std::string_view kCardinalityCorrective =
    "Your previous reply did not contain the required number of ideas. Reply again with exactly "
    "the required number of ideas in the specified JSON format.";
inline constexpr std::string_view kJudgeCorrective =
    "Your previous reply did not end with a single letter A or B. Reply again and end with "
    "exactly one letter: A or B.";

enum class MockJudgeMode {
  HashParity,    // verdict from the prompt hash (order-sensitive)
  PreferFirst,   // always the first-presented proposal (position-biased)
  PreferLexMin,  // lexicographically smaller proposal text wins
};

struct MockOptions {
  std::uint64_t seed = 0;
  MockJudgeMode judge_mode = MockJudgeMode::HashParity;
  std::int64_t latency_ms = 0;
  bool flaky_cardinality = false;  // idea replies come one short until corrected
  bool garbled_judge = false;      // judge replies refuse to pick until corrected
  int embed_dim = 384;
};

// Deterministic stand-in for both endpoints: every reply is a pure function
// of (seed, prompt), and replies are syntactically valid for their prompt
// kind, so full pipelines run offline and replay byte-identically.
class MockProvider : public Provider {
 public:
  MockProvider() = default;
  explicit MockProvider(MockOptions opt) : opt_(opt) {}
  explicit MockProvider(std::uint64_t seed) { opt_.seed = seed; }

  ChatResponse chat(const ChatRequest& req) override {
    take_scripted_failure(&chat_calls_);
    std::string reply = reply_for(req.user_prompt);
    ChatResponse resp;
    resp.text = std::move(reply);
    resp.usage.prompt_tokens =
        static_cast<std::int64_t>((req.system_prompt.size() + req.user_prompt.size()) / 4);
    resp.usage.completion_tokens = static_cast<std::int64_t>(resp.text.size() / 4);
    resp.latency_ms = opt_.latency_ms;
    return resp;
  }

  std::vector<std::vector<double>> embeddings(const std::vector<std::string>& texts,
                                              const std::string&) override {
    take_scripted_failure(&embed_calls_);
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
      DetRng rng(mix64(opt_.seed ^ fnv1a64(t) ^ 0x5eedbeefcafef00dULL));
      std::vector<double> v(static_cast<std::size_t>(opt_.embed_dim));
      for (auto& x : v) x = rng.gaussian();
      out.push_back(std::move(v));  // unnormalized on purpose: the gateway must normalize
    }
    {
      std::lock_guard lock(m_);
      embed_text_count_ += static_cast<std::int64_t>(texts.size());
    }
    return out;
  }

  // The next `count` calls (chat or embeddings) fail with the given HTTP
  // status before normal behavior resumes.
  void push_transient_failures(int status, int count = 1) {
    std::lock_guard lock(m_);
    for (int i = 0; i < count; ++i) scripted_.push_back(status);
  }
  void push_auth_failure() {
    std::lock_guard lock(m_);
    scripted_.push_back(-1);
  }

  int chat_calls() const {
    std::lock_guard lock(m_);
    return chat_calls_;
  }
  int embed_calls() const {
    std::lock_guard lock(m_);
    return embed_calls_;
  }
  std::int64_t embed_text_count() const {
    std::lock_guard lock(m_);
    return embed_text_count_;
  }

  const MockOptions& options() const { return opt_; }

 private:
  void take_scripted_failure(int* counter) {
    std::lock_guard lock(m_);
    ++*counter;
    if (scripted_.empty()) return;
    int code = scripted_.front();
    scripted_.pop_front();
    if (code == -1) throw AuthError("mock: invalid credentials");
    throw TransientProviderError("mock: provider returned " + std::to_string(code), code);
  }

  // ---- prompt classification ----

  static bool contains(std::string_view haystack, std::string_view needle) {
    return haystack.find(needle) != std::string_view::npos;
  }

  std::string reply_for(const std::string& prompt) const {
    std::uint64_t h = mix64(opt_.seed ^ mix64(fnv1a64(prompt)));
    if (contains(prompt, "Respond with exactly one letter, A or B")) return judge_reply(prompt, h);
    if (contains(prompt, "Now generate a list of constructive criticisms"))
      return critique_reply(prompt, h);
    if (contains(prompt, "Please revise the original research proposal"))
      return revise_reply(prompt, h);
    if (contains(prompt, "Expand this idea into a full experiment proposal"))
      return expand_reply(prompt, h);
    int n = extract_ideas_n(prompt);
    if (n > 0) return ideation_reply(prompt, h, n);
    throw MalformedProviderReply("mock: cannot classify prompt kind");
  }

  static int extract_ideas_n(std::string_view prompt) {
    constexpr std::string_view lead = "You should generate ";
    std::size_t p = prompt.find(lead);
    if (p == std::string_view::npos) return 0;
    std::size_t d = p + lead.size();
    int n = 0;
    while (d < prompt.size() && std::isdigit(static_cast<unsigned char>(prompt[d]))) {
      n = n * 10 + (prompt[d] - '0');
      ++d;
    }
    if (n == 0) return 0;
    return contains(prompt.substr(d), " different ideas") ? n : 0;
  }

  // ---- content synthesis ----

  static std::string hex8(std::uint64_t x) { return to_hex(x).substr(8); }

  static std::string_view pick(const std::vector<std::string_view>& v, std::uint64_t x) {
    return v[static_cast<std::size_t>(x % v.size())];
  }

  std::string idea_name(std::uint64_t h, int i,
                        const std::vector<std::string>& used) const {
    static const std::vector<std::string_view> adjectives = {
        "Adaptive",       "Contrastive", "Recursive",     "Latent",
        "Modular",        "Causal",      "Symbolic",      "Curriculum",
        "Entropy-Guided", "Self-Consistent", "Counterfactual", "Hierarchical"};
    static const std::vector<std::string_view> nouns = {
        "Prompt Scaffolding", "Reasoning Chains",  "Critique Loops",   "Context Weaving",
        "Persona Ensembles",  "Uncertainty Probes", "Knowledge Anchoring", "Dialogue Sharding",
        "Retrieval Fusion",   "Verification Gates", "Memory Distillation", "Bias Auditing"};
    std::uint64_t hi = mix64(h ^ (static_cast<std::uint64_t>(i) + 11));
    std::string name = std::string(pick(adjectives, hi)) + " " + std::string(pick(nouns, hi >> 17));
    for (const auto& u : used)
      if (u == name) return name + " " + hex8(hi);
    return name;
  }

  std::string idea_body_text(std::uint64_t h, int i, const std::string& name) const {
    static const std::vector<std::string_view> focuses = {
        "compositional reasoning", "long-horizon planning",   "faithful self-explanation",
        "cross-lingual transfer",  "numerically grounded claims", "calibrated refusals",
        "robust tool selection",   "schema-consistent outputs"};
    static const std::vector<std::string_view> conditions = {
        "distribution shift",        "adversarial paraphrasing", "sparse context",
        "conflicting instructions",  "low-resource settings",    "multi-step dependencies"};
    static const std::vector<std::string_view> benches = {
        "BIG-Bench Hard", "GSM8K", "MMLU", "TruthfulQA", "HumanEval", "XNLI"};
    static const std::vector<std::string_view> baselines = {
        "chain-of-thought prompting", "self-consistency decoding", "least-to-most prompting",
        "zero-shot instructions",     "retrieval-augmented prompting", "reflexion-style revision"};
    static const std::vector<std::string_view> sources = {
        "ensemble learning",  "program analysis",   "cognitive load theory",
        "control theory",     "information retrieval", "game theory"};
    static const std::vector<std::string_view> mechanisms = {
        "redundancy with disagreement detection", "staged constraint release",
        "explicit uncertainty budgets",           "adversarial role separation",
        "structured memory rehearsal",            "iterative contract narrowing"};
    static const std::vector<std::string_view> verbs = {
        "decomposes", "cross-examines", "re-weights", "schedules", "perturbs", "distills"};
    static const std::vector<std::string_view> objects = {
        "intermediate reasoning drafts", "candidate prompt variants", "retrieved evidence spans",
        "persona-conditioned critiques", "confidence annotations",    "failure-case clusters",
        "constraint checklists",         "counterexample probes"};
    static const std::vector<std::string_view> metrics = {
        "exact-match accuracy",   "calibration error", "pass@1",
        "contradiction rate",     "win rate under LLM judging", "coverage of planted errors"};

    std::uint64_t k = mix64(h ^ (static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL + 3));
    std::string nonce = hex8(mix64(k ^ 0xabcdef));
    std::string problem = "Large language models still struggle with " +
                          std::string(pick(focuses, k)) + " under " +
                          std::string(pick(conditions, k >> 7)) + ".";
    std::string existing;
    if (k % 7 != 0)
      existing = "Benchmarks such as " + std::string(pick(benches, k >> 13)) +
                 " and baselines like " + std::string(pick(baselines, k >> 19)) +
                 " cover parts of the problem.";
    std::string motivation = "Insights from " + std::string(pick(sources, k >> 23)) +
                             " suggest that " + std::string(pick(mechanisms, k >> 29)) +
                             " can transfer to prompting.";
    std::string proposed = "We introduce " + name + ", which " +
                           std::string(pick(verbs, k >> 31)) + " " +
                           std::string(pick(objects, k >> 37)) +
                           " across staged dialogue turns; every step is tagged with marker "
                           "nonce-" + nonce + " for traceability.";
    std::string experiment = "Evaluate on " + std::string(pick(benches, k >> 41)) + " against " +
                             std::string(pick(baselines, k >> 47)) + ", reporting " +
                             std::string(pick(metrics, k >> 53)) + ".";
    return "(1) Problem: " + problem + "\n(2) Existing Methods: " + existing +
           "\n(3) Motivation: " + motivation + "\n(4) Proposed Method: " + proposed +
           "\n(5) Experiment Plan: " + experiment;
  }

  std::string wrap_json(const Json& j, std::uint64_t h) const {
    std::string body = j.dump(2);
    if (h & 0x10)
      return "Here are the requested ideas.\n\n```json\n" + body + "\n```";
    return body;
  }

  std::string ideation_reply(const std::string& prompt, std::uint64_t h, int n) const {
    int count = n;
    if (opt_.flaky_cardinality && !contains(prompt, kCardinalityCorrective))
      count = (n >= 2) ? n - 1 : n + 1;
    Json ideas = Json::object();
    std::vector<std::string> used;
    for (int i = 0; i < count; ++i) {
      std::string name = idea_name(h, i, used);
      used.push_back(name);
      ideas[name] = idea_body_text(h, i, name);
    }
    return wrap_json(ideas, h);
  }

  // The proposal under critique/revision is the first JSON object embedded in
  // the prompt; keys survive revision so idea counts and names are stable.
  static Json extract_embedded_object(const std::string& prompt) {
    std::string_view sv{prompt};
    for (std::size_t open = sv.find('{'); open != std::string_view::npos;
         open = sv.find('{', open + 1)) {
      std::size_t close = detail::balanced_end(sv, open);
      if (close == std::string_view::npos) continue;
      Json j = Json::parse(sv.substr(open, close - open + 1), nullptr, false);
      if (!j.is_discarded() && j.is_object() && !j.empty()) return j;
    }
    throw MalformedProviderReply("mock: no embedded idea JSON found in prompt");
  }

  std::string critique_reply(const std::string& prompt, std::uint64_t h) const {
    static const std::vector<std::string_view> labels = {
        "Missing data preparation detail", "Involving human experiments", "Metric is vague",
        "Prompt not specified", "Missing test cases"};
    static const std::vector<std::string_view> asks = {
        "how exactly would this be constructed?",
        "spell out an automatic alternative.",
        "give the step-by-step computation.",
        "always provide the exact prompts to use.",
        "walk through one end-to-end example."};
    Json ideas = extract_embedded_object(prompt);
    std::string quote = "the proposal";
    if (ideas.begin() != ideas.end() && ideas.begin().value().is_string()) {
      std::string flat = collapse_whitespace(ideas.begin().value().get<std::string>());
      quote = trim(flat.substr(0, 60));
    }
    int count = 1 + static_cast<int>(h % 5);
    std::vector<std::string> items;
    for (int i = 0; i < count; ++i) {
      std::uint64_t k = mix64(h ^ (static_cast<std::uint64_t>(i) + 101));
      items.push_back(std::string(pick(labels, k)) + ": \"" + quote + "\" - " +
                      std::string(pick(asks, k >> 9)) + " See marker nonce-" + hex8(k) + ".");
    }
    std::string out;
    if ((h & 0x8) && count >= 2) {
      for (const auto& item : items) out += "- " + item + "\n";
    } else {
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += "\n\n";
        out += items[i];
      }
    }
    return out;
  }

  std::string revise_reply(const std::string& prompt, std::uint64_t h) const {
    Json original = extract_embedded_object(prompt);
    std::vector<std::string> names;
    for (auto it = original.begin(); it != original.end(); ++it) names.push_back(it.key());
    if (opt_.flaky_cardinality && !contains(prompt, kCardinalityCorrective)) {
      if (names.size() >= 2)
        names.pop_back();
      else
        names.push_back("Unsolicited Extra Idea");
    }
    Json revised = Json::object();
    for (std::size_t i = 0; i < names.size(); ++i)
      revised[names[i]] = idea_body_text(h, static_cast<int>(i), names[i]);
    return wrap_json(revised, h);
  }

  std::string expand_reply(const std::string& prompt, std::uint64_t h) const {
    Json idea = extract_embedded_object(prompt);
    std::string name = idea.begin().key();
    IdeaBody body;
    bool sectioned = idea.begin().value().is_string() &&
                     detail::split_sections(idea.begin().value().get<std::string>(), body);
    if (!sectioned) body.proposed_method = idea.begin().value().dump();
    std::string nonce = hex8(mix64(h ^ 0xe4fa));
    std::string out = "Expanded Proposal: " + name + "\n\n";
    out += "(1) Problem: " + body.problem +
           " A pilot study will quantify the failure modes on 200 sampled instances.\n\n";
    out += "(2) Existing Methods: " +
           (body.existing_methods.empty() ? std::string("No established baseline covers this setting; zero-shot prompting serves as the reference point.")
                                          : body.existing_methods + " These serve as the primary baselines.") +
           "\n\n";
    out += "(3) Motivation: " + body.motivation +
           " The expansion keeps the core method unchanged and elaborates execution detail.\n\n";
    out += "(4) Proposed Method: " + body.proposed_method +
           " Step prompts: step 1 uses \"Restate the task constraints\"; step 2 uses \"Apply the "
           "method and show intermediate work\"; step 3 uses \"Verify the result against each "
           "constraint\". Control marker nonce-" + nonce + ".\n\n";
    out += "(5) Experiment Plan: " + body.experiment_plan +
           " Test case walkthrough: one held-out instance is shown with the full prompt chain and "
           "the expected output; metrics are computed automatically with no human annotation.";
    return out;
  }

  std::string judge_reply(const std::string& prompt, std::uint64_t h) const {
    if (opt_.garbled_judge && !contains(prompt, kJudgeCorrective))
      return "Both proposals have merit and weaknesses; the comparison is close.";
    static constexpr std::string_view a_lead = "Proposal A:\n\n";
    static constexpr std::string_view b_lead = "Proposal B:\n\n";
    static constexpr std::string_view b_tail = "\n\nCompare the two proposals";
    char verdict = 'A';
    switch (opt_.judge_mode) {
      case MockJudgeMode::PreferFirst:
        verdict = 'A';
        break;
      case MockJudgeMode::PreferLexMin: {
        std::size_t ap = prompt.find(a_lead);
        std::size_t bp = prompt.find(b_lead, ap == std::string::npos ? 0 : ap);
        std::size_t bt = prompt.find(b_tail, bp == std::string::npos ? 0 : bp);
        if (ap == std::string::npos || bp == std::string::npos || bt == std::string::npos)
          throw MalformedProviderReply("mock: judge prompt missing proposal markers");
        std::string_view a_text{prompt.data() + ap + a_lead.size(),
                                bp - (ap + a_lead.size()) > 2 ? bp - (ap + a_lead.size()) - 2 : 0};
        std::string_view b_text{prompt.data() + bp + b_lead.size(), bt - (bp + b_lead.size())};
        verdict = (a_text <= b_text) ? 'A' : 'B';
        break;
      }
      case MockJudgeMode::HashParity:
        verdict = (h & 1) ? 'A' : 'B';
        break;
    }
    std::string letter(1, verdict);
    std::string out = "Proposal " + letter +
                      " presents the more concrete and feasible plan.\n\nFinal answer:\n";
    out += (h & 0x4) ? (letter + ".") : letter;
    return out;
  }

  MockOptions opt_;
  mutable std::mutex m_;
  std::deque<int> scripted_;
  int chat_calls_ = 0;
  int embed_calls_ = 0;
  std::int64_t embed_text_count_ = 0;
};

}  // namespace colloquy
