#pragma once

// Shipped prompt templates and persona blocks. The same texts live as data
// files under assets/; test_prompts keeps the two copies byte-identical.
// Slot markers use {name} syntax and are substituted by prompts.hpp.

#include <string_view>

namespace colloquy::texts {

inline constexpr std::string_view kIdeationTemplate = R"__T({persona_prompts}

Now I want you to help me brainstorm some new research project ideas on the topic of: {topic_description}.

Here are some relevant papers on this topic just for your background knowledge: {formatted_papers}

You should generate {ideas_n} different ideas on this topic. Try to be creative and diverse in the idea generation, and do not repeat any similar ideas. The above papers are only for inspiration and you should not cite them and just make some incremental modifications. Instead, you should make sure your ideas are novel and distinct from the prior literature. You should aim for projects that can potentially win best paper awards at top AI conferences like ACL and NeurIPS.

Each idea should be described as:
  (1) Problem: State the problem statement, which should be closely related to the topic description and something that large language models cannot solve well yet.
  (2) Existing Methods: Mention some existing benchmarks and baseline methods if there are any.
  (3) Motivation: Explain the inspiration of the proposed method and why it would work well.
  (4) Proposed Method: Propose your new method and describe it in detail. The proposed method should be maximally different from all existing work and baselines, and be more advanced and effective than the baselines. You should be as creative as possible in proposing new methods, we love unhinged ideas that sound crazy. This should be the most detailed section of the proposal.
  (5) Experiment Plan: Specify the experiment steps, baselines, and evaluation metrics.

You can follow these examples to get a sense of how the ideas should be formatted (but don't borrow the ideas themselves): {examples}

You should make sure to come up with your own novel and different ideas for the specified problem: {topic_description}. 

You should try to tackle important problems that are well recognized in the field and considered challenging for current models. For example, think of novel solutions for problems with existing benchmarks and baselines. In rare cases, you can propose to tackle a new problem, but you will have to justify why it is important and how to set up proper evaluation. 

Focus on novel {method} ideas for now. The proposed method section should specify how to construct the prompts for all steps involved. Try to avoid large-scale pretraining experiments or human studies.

You should avoid repeating the following existing ideas and try to be different and diverse: {existing_ideas}

Please write down your {ideas_n} ideas (each idea should be described as one paragraph). 
Output the ideas in json format as a dictionary, where you should generate a short idea name (e.g., "Non-Linear Story Understanding", or "Multi-Agent Negotiation") as the key and the actual idea description as the value (following the above format). Do not repeat idea names or contents.)__T";

inline constexpr std::string_view kCritiqueTemplate = R"__T({persona_prompts}

You need to provide some constructive feedback to the given project proposal on the topic of: {topic_description}.

The project proposal (containing multiple ideas) is

{current_ideas_json_str}

You should raise critical questions and comments if there are any missing details from the project proposal, or if there are any parts that are not feasible for the student to complete the project within two months. 

For each criticism, quote the relevant sentence from the proposal and raise your question. Your criticisms should be a subset of the following categories:
- missing dataset detail: the proposal should mention the datasets to use, or how to collect the data if needed
- involving humans: try to avoid human experiments
- missing metric detail: the proposal should mention the evaluation metrics
- missing prompt detail: give concrete examples of the prompts (vague descriptions are not enough), including for the new proposed prompting method and for all baselines
- test cases: the proposal should show 1-2 examples of how the test examples would look like, how the prompts will be applied, and the expected outputs

Each criticism should quote a sentence from the original proposal, and try to be concise. Here are a few example criticisms:

Missing data preparation detail: "Create a comprehensive list of idiomatic expressions" - how to create such a list? Any tools or sources that we can use?

Involving human experiments: "Contrast the LLM's responses with a baseline of human expectations" - we should avoid human annotation to make the project more feasible, try to think of alternatives with automatic approaches, such as using LLMs to replace humans.

Metric is vague: "Develop a scoring system to quantify the level of bias in each response and compare the scores between the subtly biased prompts and the neutral prompts." - how exactly should we implement such a scoring system? There should be detailed step-by-step instructions.

Prompt not specified: "Develop a set of prompts that describe scenarios involving individuals in both stereotypical and counter-stereotypical roles." - you should always try to give the exact prompts to use.

Missing test cases: "Test the model on a set of prompts and compare the responses to human expectations" - add a subsection in the experiment plan to show how an example prompt is applied on a test example and what the expected output is.

Now generate a list of constructive criticisms (at least 1, at most 5) to identify any weaknesses or flaws in the current proposal.)__T";

inline constexpr std::string_view kReviseTemplate = R"__T({persona_prompts}

You previously proposed the following research ideas on the topic of: {topic_description}.

The original project proposal (containing multiple ideas) is

{current_ideas_json_str}

However, the following criticisms were raised by expert reviewers: {response_critic}

Please revise the original research proposal based on the criticisms provided above. Your goal is to improve the ideas by addressing each point raised in the critique, making the proposal more concrete, feasible, novel, and impactful.

Specifically, you should:
- Carefully consider each criticism and modify the corresponding idea(s) to resolve the identified issues.
- Ensure all necessary details are included, such as specific datasets, evaluation metrics, concrete prompt examples, and clear experimental steps, as pointed out by the critique.
- If an idea is fundamentally flawed or infeasible according to the critique, you may replace it with a new, improved idea on the same topic, ensuring it still aligns with the overall research goal.
- Maintain the original structure for each idea: (1) Problem, (2) Existing Methods, (3) Motivation, (4) Proposed Method, (5) Experiment Plan.

Output the revised set of ideas in the original JSON format: a dictionary where keys are short, descriptive idea names and values are the detailed idea descriptions following the specified structure. Ensure you provide the same number of ideas as the original proposal.)__T";

inline constexpr std::string_view kExpandTemplate = R"__T({persona_prompts}

You previously brainstormed research ideas on the topic of: {topic_description}. One of them was selected for further development.

The selected idea is

{idea_json_str}

Expand this idea into a full experiment proposal. Keep the core proposed method unchanged: do not replace it with a different idea, only elaborate it. Your proposal should be detailed enough that a student could execute it without asking clarifying questions.

Specifically, you should:
- Elaborate each of the original five sections: (1) Problem, (2) Existing Methods, (3) Motivation, (4) Proposed Method, (5) Experiment Plan.
- Give the exact prompts to use for every step of the proposed method and for all baselines.
- Name the specific datasets or describe exactly how to collect the data if no public dataset fits.
- Name the evaluation metrics and describe exactly how each is computed.
- Walk through 1-2 concrete test cases: show an example input, how the prompts are applied to it, and the expected output.
- Avoid human experiments and large-scale pretraining; prefer automatic evaluation.

Write the expanded proposal as plain text with the five numbered section headers.)__T";

inline constexpr std::string_view kJudgeTemplate = R"__T(You are an impartial expert reviewer comparing two research project proposals on the topic of: {topic_description}.

Proposal A:

{proposal_a}

Proposal B:

{proposal_b}

Compare the two proposals on novelty, feasibility, and potential impact, and select the single better one. You must pick exactly one winner even if the decision is close.

Respond with exactly one letter, A or B, on the final line of your reply.)__T";

inline constexpr std::string_view kAiResearcherPersona = R"__T(You are an expert AI researcher.)__T";

inline constexpr std::string_view kPhysicsPersona = R"__T(You are an expert in physics and its intersection with AI. Propose novel AI research methodologies (e.g., algorithms, models) inspired by physical principles (like statistical mechanics, field theory, or complex systems dynamics), or critique existing AI approaches using insights and analogies from physics.)__T";

inline constexpr std::string_view kChemistryPersona = R"__T(You are an expert in chemistry and its intersection with AI. Propose novel AI research methodologies (e.g., learning processes, representations) inspired by chemical concepts (like reaction kinetics, molecular interactions, or self-assembly), or critique existing AI approaches using insights and analogies from chemistry.)__T";

inline constexpr std::string_view kBiologyPersona = R"__T(You are an expert in biology and its intersection with AI. Propose novel AI research methodologies (e.g., architectures, learning rules) inspired by biological systems (like evolution, neuroscience, or immune systems), or critique existing AI approaches using insights and analogies from biology.)__T";

inline constexpr std::string_view kFinancePersona = R"__T(You are an expert in finance and its intersection with AI. Propose novel AI research methodologies (e.g., decision-making models, predictive algorithms) inspired by financial concepts (like market dynamics, behavioral economics, or risk modeling), or critique existing AI approaches using insights and analogies from finance.)__T";

inline constexpr std::string_view kPsychologyPersona = R"__T(You are an expert in psychology and its intersection with AI. Propose novel AI research methodologies (e.g., reasoning processes, learning paradigms, interaction designs) inspired by psychological theories (like cognitive processes, learning theories, or social dynamics), or critique existing AI approaches using insights and analogies from psychology.)__T";

}  // namespace colloquy::texts
