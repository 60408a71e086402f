#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "colloquy/domain.hpp"
#include "colloquy/errors.hpp"
#include "colloquy/prompt_texts.hpp"
#include "colloquy/util.hpp"

namespace colloquy {

enum class PromptKind { Ideation, Critique, Revise, Expand, Judge };

// Templates are shipped as data files; the embedded constants below mirror
// them byte-for-byte (the test suite asserts this). A PromptSet lets a run
// swap the data files in without recompiling.
struct PromptSet {
  std::string ideation{texts::kIdeationTemplate};
  std::string critique{texts::kCritiqueTemplate};
  std::string revise{texts::kReviseTemplate};
  std::string expand{texts::kExpandTemplate};
  std::string judge{texts::kJudgeTemplate};

  static PromptSet from_dir(const std::filesystem::path& dir) {
    PromptSet s;
    s.ideation = read_file(dir / "ideation.txt");
    s.critique = read_file(dir / "critique.txt");
    s.revise = read_file(dir / "revise.txt");
    s.expand = read_file(dir / "expand.txt");
    s.judge = read_file(dir / "judge.txt");
    return s;
  }

  const std::string& text(PromptKind k) const {
    switch (k) {
      case PromptKind::Ideation: return ideation;
      case PromptKind::Critique: return critique;
      case PromptKind::Revise: return revise;
      case PromptKind::Expand: return expand;
      case PromptKind::Judge: return judge;
    }
    throw std::invalid_argument("unknown prompt kind");
  }
};

inline const PromptSet& default_prompts() {
  static const PromptSet s{};
  return s;
}

inline constexpr std::string_view kSlotNames[] = {
    "persona_prompts",  "topic_description", "formatted_papers",
    "ideas_n",          "examples",          "method",
    "existing_ideas",   "current_ideas_json_str", "response_critic",
    "idea_json_str",    "proposal_a",        "proposal_b",
};

inline bool is_slot_name(std::string_view name) {
  for (auto s : kSlotNames)
    if (s == name) return true;
  return false;
}

using SlotMap = std::map<std::string, std::string, std::less<>>;

// Substitutes {slot} markers in one left-to-right pass; substituted values are
// emitted verbatim and never rescanned, so braces inside values are inert.
// An empty persona_prompts value falls back to the baseline persona text.
inline std::string render(const std::string& tpl, const SlotMap& slots) {
  std::string out;
  out.reserve(tpl.size() + 256);
  std::size_t i = 0;
  while (i < tpl.size()) {
    char c = tpl[i];
    if (c != '{') {
      out.push_back(c);
      ++i;
      continue;
    }
    std::size_t close = tpl.find('}', i + 1);
    if (close == std::string::npos) {
      out.append(tpl, i, std::string::npos);
      break;
    }
    std::string_view name{tpl.data() + i + 1, close - i - 1};
    if (!is_slot_name(name)) {  // a literal brace, not a slot marker
      out.push_back(c);
      ++i;
      continue;
    }
    auto it = slots.find(name);
    if (it == slots.end()) throw MissingSlot(std::string(name));
    if (name == "persona_prompts" && it->second.empty())
      out.append(texts::kAiResearcherPersona);
    else
      out.append(it->second);
    i = close + 1;
  }
  return out;
}

inline std::string render(PromptKind kind, const SlotMap& slots,
                          const PromptSet& prompts = default_prompts()) {
  return render(prompts.text(kind), slots);
}

// ---------------------------------------------------------------------------
// idea parsing

struct ParsedIdea {
  std::string name;
  IdeaBody body;
  bool sectioned = true;

  bool operator==(const ParsedIdea&) const = default;
};

namespace detail {

// Finds the end of the balanced JSON object starting at `open` (which must
// index a '{'), respecting strings and escapes. Returns npos if unbalanced.
inline std::size_t balanced_end(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\')
        ++i;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i;
  }
  return std::string_view::npos;
}

// nlohmann silently keeps the last of duplicate keys, so the top-level keys
// are scanned by hand first.
inline std::vector<std::string> top_level_keys(std::string_view obj) {
  std::vector<std::string> keys;
  int depth = 0;
  bool in_string = false;
  std::string current;
  bool capturing = false;
  for (std::size_t i = 0; i < obj.size(); ++i) {
    char c = obj[i];
    if (in_string) {
      if (c == '\\') {
        if (capturing && i + 1 < obj.size()) current.push_back(obj[i + 1]);
        ++i;
      } else if (c == '"') {
        in_string = false;
        if (capturing) {
          // a string at depth 1 is a key only if a ':' follows
          std::size_t j = i + 1;
          while (j < obj.size() && std::isspace(static_cast<unsigned char>(obj[j]))) ++j;
          if (j < obj.size() && obj[j] == ':') keys.push_back(current);
          capturing = false;
        }
      } else if (capturing) {
        current.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_string = true;
        if (depth == 1) {
          capturing = true;
          current.clear();
        }
        break;
      case '{':
      case '[': ++depth; break;
      case '}':
      case ']': --depth; break;
      default: break;
    }
  }
  return keys;
}

inline const std::vector<std::string>& section_headers() {
  static const std::vector<std::string> h = {
      "(1) Problem", "(2) Existing Methods", "(3) Motivation", "(4) Proposed Method",
      "(5) Experiment Plan"};
  return h;
}

inline std::string strip_section_lead(std::string_view s) {
  std::size_t b = 0;
  if (b < s.size() && s[b] == ':') ++b;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
  return trim(s.substr(b));
}

// Splits a five-part idea description on its numbered headers. Returns false
// (and leaves body untouched) when any header is missing.
inline bool split_sections(const std::string& text, IdeaBody& body) {
  const auto& headers = section_headers();
  std::size_t pos[5];
  std::size_t search_from = 0;
  for (int k = 0; k < 5; ++k) {
    std::size_t p = text.find(headers[static_cast<std::size_t>(k)], search_from);
    if (p == std::string::npos) return false;
    pos[k] = p;
    search_from = p + headers[static_cast<std::size_t>(k)].size();
  }
  std::string parts[5];
  for (int k = 0; k < 5; ++k) {
    std::size_t content_begin = pos[k] + headers[static_cast<std::size_t>(k)].size();
    std::size_t content_end = (k < 4) ? pos[k + 1] : text.size();
    parts[k] = strip_section_lead(
        std::string_view(text).substr(content_begin, content_end - content_begin));
  }
  body.problem = parts[0];
  body.existing_methods = parts[1];
  body.motivation = parts[2];
  body.proposed_method = parts[3];
  body.experiment_plan = parts[4];
  return true;
}

inline bool object_sections(const Json& v, IdeaBody& body) {
  auto pick = [&](std::initializer_list<const char*> names, std::string& out) {
    for (const char* n : names) {
      if (v.contains(n) && v[n].is_string()) {
        out = v[n].get<std::string>();
        return true;
      }
    }
    return false;
  };
  IdeaBody b;
  bool ok = pick({"Problem", "problem"}, b.problem) &&
            pick({"Existing Methods", "existing_methods", "ExistingMethods"}, b.existing_methods) &&
            pick({"Motivation", "motivation"}, b.motivation) &&
            pick({"Proposed Method", "proposed_method", "ProposedMethod"}, b.proposed_method) &&
            pick({"Experiment Plan", "experiment_plan", "ExperimentPlan"}, b.experiment_plan);
  if (ok) body = b;
  return ok;
}

}  // namespace detail

// Extracts the first JSON object from a raw model reply (code fences and
// surrounding prose are skipped) and parses it as idea_name -> description.
inline std::vector<ParsedIdea> parse_ideas(const std::string& raw, int expected_k) {
  std::string_view sv{raw};
  Json doc;
  std::string object_text;
  bool found = false;
  for (std::size_t open = sv.find('{'); open != std::string_view::npos;
       open = sv.find('{', open + 1)) {
    std::size_t close = detail::balanced_end(sv, open);
    if (close == std::string_view::npos) continue;
    object_text = std::string(sv.substr(open, close - open + 1));
    doc = Json::parse(object_text, nullptr, false);
    if (!doc.is_discarded() && doc.is_object()) {
      found = true;
      break;
    }
  }
  if (!found) throw UnparseableReply("no JSON object found in reply");

  auto keys = detail::top_level_keys(object_text);
  {
    std::vector<std::string> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i] == sorted[i - 1]) throw DuplicateIdeaName(sorted[i]);
  }

  std::vector<ParsedIdea> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    ParsedIdea idea;
    idea.name = it.key();
    if (idea.name.empty()) throw UnparseableReply("empty idea name");
    if (it.value().is_string()) {
      std::string text = it.value().get<std::string>();
      if (!detail::split_sections(text, idea.body)) {
        idea.body.proposed_method = trim(text);
        idea.sectioned = false;
      }
    } else if (it.value().is_object() && detail::object_sections(it.value(), idea.body)) {
      idea.sectioned = true;
    } else {
      idea.body.proposed_method = it.value().dump();
      idea.sectioned = false;
    }
    out.push_back(std::move(idea));
  }
  if (static_cast<int>(out.size()) != expected_k)
    throw WrongCardinality(static_cast<int>(out.size()), expected_k);
  return out;
}

// ---------------------------------------------------------------------------
// critique parsing

enum class CritiqueCategory {
  MissingDatasetDetail,
  InvolvingHumans,
  MissingMetricDetail,
  MissingPromptDetail,
  TestCases,
  Other,
};

inline std::string_view critique_category_id(CritiqueCategory c) {
  switch (c) {
    case CritiqueCategory::MissingDatasetDetail: return "MissingDatasetDetail";
    case CritiqueCategory::InvolvingHumans: return "InvolvingHumans";
    case CritiqueCategory::MissingMetricDetail: return "MissingMetricDetail";
    case CritiqueCategory::MissingPromptDetail: return "MissingPromptDetail";
    case CritiqueCategory::TestCases: return "TestCases";
    case CritiqueCategory::Other: return "Other";
  }
  throw std::invalid_argument("unknown critique category");
}

inline void to_json(Json& j, const CritiqueCategory& c) { j = critique_category_id(c); }
inline void from_json(const Json& j, CritiqueCategory& c) {
  auto s = j.get<std::string>();
  for (auto v : {CritiqueCategory::MissingDatasetDetail, CritiqueCategory::InvolvingHumans,
                 CritiqueCategory::MissingMetricDetail, CritiqueCategory::MissingPromptDetail,
                 CritiqueCategory::TestCases, CritiqueCategory::Other})
    if (critique_category_id(v) == s) {
      c = v;
      return;
    }
  throw std::invalid_argument("unknown critique category id: " + s);
}

struct CritiqueItem {
  CritiqueCategory category = CritiqueCategory::Other;
  std::string quoted_sentence;
  std::string comment;
  std::string text;  // the item verbatim, used when aggregating

  bool operator==(const CritiqueItem&) const = default;
};

inline void to_json(Json& j, const CritiqueItem& i) {
  j = Json{{"category", i.category},
           {"quoted_sentence", i.quoted_sentence},
           {"comment", i.comment},
           {"text", i.text}};
}
inline void from_json(const Json& j, CritiqueItem& i) {
  j.at("category").get_to(i.category);
  j.at("quoted_sentence").get_to(i.quoted_sentence);
  j.at("comment").get_to(i.comment);
  j.at("text").get_to(i.text);
}

struct CritiquePayload {
  std::vector<CritiqueItem> items;
  bool truncated = false;

  bool operator==(const CritiquePayload&) const = default;
};

inline void to_json(Json& j, const CritiquePayload& p) {
  j = Json{{"items", p.items}, {"truncated", p.truncated}};
}
inline void from_json(const Json& j, CritiquePayload& p) {
  j.at("items").get_to(p.items);
  p.truncated = j.value("truncated", false);
}

namespace detail {

inline bool is_bullet_line(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  if (i >= line.size()) return false;
  if ((line[i] == '-' || line[i] == '*') && i + 1 < line.size() && line[i + 1] == ' ')
    return true;
  std::size_t d = i;
  while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
  return d > i && d < line.size() && (line[d] == '.' || line[d] == ')');
}

inline std::string strip_bullet(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  if (i < line.size() && (line[i] == '-' || line[i] == '*')) return trim(line.substr(i + 1));
  std::size_t d = i;
  while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
  if (d > i && d < line.size() && (line[d] == '.' || line[d] == ')'))
    return trim(line.substr(d + 1));
  return trim(line);
}

inline CritiqueCategory infer_category(std::string_view label) {
  std::string l = to_lower(label);
  if (l.find("data") != std::string::npos) return CritiqueCategory::MissingDatasetDetail;
  if (l.find("human") != std::string::npos) return CritiqueCategory::InvolvingHumans;
  if (l.find("metric") != std::string::npos) return CritiqueCategory::MissingMetricDetail;
  if (l.find("prompt") != std::string::npos) return CritiqueCategory::MissingPromptDetail;
  if (l.find("test") != std::string::npos) return CritiqueCategory::TestCases;
  return CritiqueCategory::Other;
}

inline CritiqueItem make_item(const std::string& text) {
  CritiqueItem item;
  item.text = text;
  // canonical shape: Label: "quoted sentence" - comment
  std::size_t colon = text.find(':');
  std::size_t first_quote = text.find('"');
  std::string after_label = text;
  if (colon != std::string::npos && (first_quote == std::string::npos || colon < first_quote)) {
    item.category = infer_category(std::string_view(text).substr(0, colon));
    after_label = trim(std::string_view(text).substr(colon + 1));
  } else {
    item.category = CritiqueCategory::Other;
  }
  std::size_t q1 = after_label.find('"');
  if (q1 != std::string::npos) {
    std::size_t q2 = after_label.find('"', q1 + 1);
    if (q2 != std::string::npos) {
      item.quoted_sentence = after_label.substr(q1 + 1, q2 - q1 - 1);
      std::string rest = trim(std::string_view(after_label).substr(q2 + 1));
      if (!rest.empty() && (rest[0] == '-' || rest[0] == ':')) rest = trim(rest.substr(1));
      item.comment = rest;
      return item;
    }
  }
  item.comment = after_label;
  return item;
}

}  // namespace detail

// Splits a free-text critique into items on blank lines, or on bullet lines
// inside a block that uses them. Items beyond the fifth are dropped and the
// payload flagged truncated.
inline CritiquePayload parse_critique(const std::string& raw) {
  if (trim(raw).empty()) throw UnparseableReply("empty critique reply");

  std::vector<std::string> blocks;
  std::string current;
  for (const auto& line : split_lines(raw)) {
    if (trim(line).empty()) {
      if (!current.empty()) blocks.push_back(current);
      current.clear();
      continue;
    }
    if (!current.empty()) current.push_back('\n');
    current += line;
  }
  if (!current.empty()) blocks.push_back(current);

  std::vector<std::string> item_texts;
  for (const auto& block : blocks) {
    auto lines = split_lines(block);
    int bullet_count = 0;
    for (const auto& l : lines)
      if (detail::is_bullet_line(l)) ++bullet_count;
    if (bullet_count >= 2) {
      std::string item;
      for (const auto& l : lines) {
        if (detail::is_bullet_line(l)) {
          if (!item.empty()) item_texts.push_back(item);
          item = detail::strip_bullet(l);
        } else if (!item.empty()) {
          item += "\n" + l;
        }
        // prose before the first bullet is preamble, dropped
      }
      if (!item.empty()) item_texts.push_back(item);
    } else {
      item_texts.push_back(block);
    }
  }

  CritiquePayload payload;
  for (const auto& t : item_texts) {
    if (payload.items.size() == 5) {
      payload.truncated = true;
      break;
    }
    payload.items.push_back(detail::make_item(t));
  }
  if (payload.items.empty()) throw UnparseableReply("critique reply had no items");
  return payload;
}

// Joins critiques under "Reviewer i (<persona>):" headers, in input order;
// the result fills the Revise template's {response_critic} slot.
inline std::string aggregate_critiques(const std::vector<CritiquePayload>& payloads,
                                       const std::vector<PersonaName>& personas) {
  if (payloads.empty() || payloads.size() != personas.size())
    throw std::invalid_argument("aggregate_critiques: need equally many payloads and personas");
  for (const auto& p : payloads)
    if (p.items.empty())
      throw std::invalid_argument("aggregate_critiques: payload with no items");

  std::string out;
  for (std::size_t i = 0; i < payloads.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += "Reviewer " + std::to_string(i + 1) + " (" +
           std::string(persona_display_name(personas[i])) + "):";
    for (const auto& item : payloads[i].items) out += "\n" + item.text;
  }
  return out;
}

// ---------------------------------------------------------------------------
// serialization for prompt slots

// {current_ideas_json_str}: name -> full five-part text, two-space indent.
inline std::string ideas_json_str(const std::vector<ParsedIdea>& ideas) {
  Json j = Json::object();
  for (const auto& idea : ideas) j[idea.name] = five_part_text(idea.body);
  return j.dump(2);
}

inline std::string ideas_json_str(const std::vector<IdeaRecord>& ideas) {
  Json j = Json::object();
  for (const auto& idea : ideas) j[idea.idea_name] = five_part_text(idea.body);
  return j.dump(2);
}

// {idea_json_str}: the single selected idea, same shape.
inline std::string idea_json_str(const IdeaRecord& idea) {
  Json j = Json::object();
  j[idea.idea_name] = five_part_text(idea.body);
  return j.dump(2);
}

}  // namespace colloquy
