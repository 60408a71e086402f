#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "colloquy/colloquy.hpp"

namespace {

colloquy::RunManifest load_manifest(const std::string& path) {
  if (path.empty()) return colloquy::default_manifest();
  return colloquy::Json::parse(colloquy::read_file(path)).get<colloquy::RunManifest>();
}

std::shared_ptr<colloquy::Provider> make_provider(const colloquy::RunManifest& manifest,
                                                  bool mock) {
  if (mock || manifest.provider.kind == "mock") return colloquy::make_mock_provider(manifest);
  if (manifest.provider.kind == "http") return colloquy::make_http_provider(manifest.provider);
  throw std::invalid_argument("unknown provider kind: " + manifest.provider.kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"colloquy: multi-agent ideation dialogues, dedup, and tournament ranking"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand

  std::string manifest_path;
  std::string run_dir = "run";
  bool mock = false;
  bool no_resume = false;
  int concurrency = 8;
  std::vector<std::string> topics, configs;
  std::vector<int> seeds;

  app.add_option("--manifest", manifest_path, "Path to a manifest JSON (default: built-in)");
  app.add_option("--run-dir", run_dir, "Run directory for all artifacts")->capture_default_str();
  app.add_flag("--mock", mock, "Use the deterministic offline provider");
  app.add_flag("--no-resume", no_resume, "Redo work even when outputs already exist");
  app.add_option("--concurrency", concurrency, "Worker threads for the generate stage")
      ->capture_default_str();
  app.add_option("--topics", topics, "Restrict to these topic ids");
  app.add_option("--configs", configs, "Restrict to these config ids");
  app.add_option("--seeds", seeds, "Restrict to these seeds (generate only)");

  auto* cmd_bank = app.add_subcommand("bank", "Build the paper bank for each topic");
  auto* cmd_generate = app.add_subcommand("generate", "Run dialogue trials and save transcripts");
  auto* cmd_dedup = app.add_subcommand("dedup", "Embed idea pools and drop near-duplicates");
  auto* cmd_expand = app.add_subcommand("expand", "Expand surviving ideas into full proposals");
  auto* cmd_rank = app.add_subcommand("rank", "Judge candidate pools against the baseline");
  auto* cmd_report = app.add_subcommand("report", "Render the summary tables");
  auto* cmd_all = app.add_subcommand("all", "Run every stage in order");

  CLI11_PARSE(app, argc, argv);

  try {
    // A run directory's stored manifest is authoritative once it exists, so
    // the provider built here always matches what the runner will use.
    auto stored = std::filesystem::path(run_dir) / "manifest.json";
    colloquy::RunManifest manifest =
        std::filesystem::exists(stored)
            ? colloquy::Json::parse(colloquy::read_file(stored)).get<colloquy::RunManifest>()
            : load_manifest(manifest_path);
    if (mock) manifest.provider.kind = "mock";

    colloquy::RunnerOptions options;
    options.run_dir = run_dir;
    options.resume = !no_resume;
    options.concurrency = concurrency;
    options.topic_filter = topics;
    options.config_filter = configs;
    options.seed_filter = seeds;
    options.log = &std::cout;
    if (manifest.bank.source == "remote")
      options.remote_fetcher = colloquy::make_s2_fetcher(manifest.bank);

    std::shared_ptr<colloquy::Provider> provider = make_provider(manifest, mock);
    colloquy::Runner runner(std::move(manifest), std::move(options), std::move(provider));

    if (cmd_bank->parsed()) runner.stage_bank();
    if (cmd_generate->parsed()) runner.stage_generate();
    if (cmd_dedup->parsed()) runner.stage_dedup();
    if (cmd_expand->parsed()) runner.stage_expand();
    if (cmd_rank->parsed()) runner.stage_rank();
    if (cmd_report->parsed()) runner.stage_report();
    if (cmd_all->parsed()) runner.stage_all();

    if (runner.failures() > 0) {
      std::cerr << "completed with " << runner.failures()
                << " failure(s); see failures.jsonl in the run directory\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
