#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "or_graph_kit/pipeline.hpp"

namespace fs = std::filesystem;
using namespace orgk;

namespace {

struct Flags {
  std::string config;
  std::string take;
  std::uint64_t seed = 0;
  std::string out = "out";
  int jobs = 1;
};

int run(const std::string& command, const Flags& flags) {
  const fs::path config_file(flags.config);
  io::RunConfig cfg = io::run_config_from_json(io::read_json(config_file));
  if (!flags.take.empty()) cfg.take = flags.take;
  io::check_run_config(cfg);

  pipeline::Context ctx;
  ctx.config = cfg;
  ctx.config_dir = config_file.has_parent_path() ? config_file.parent_path() : fs::path(".");
  ctx.input = ctx.config_path(cfg.input) / cfg.take;
  ctx.jobs = flags.jobs;
  ctx.seed = flags.seed;

  const fs::path root = command == "synth" ? fs::path(flags.out) : fs::path(flags.out) / cfg.take;
  pipeline::OutputTransaction txn(root);
  ctx.out = &txn;
  pipeline::log(pipeline::LogLevel::debug, command + ": writing under " + root.string());

  if (command == "fuse") pipeline::run_fuse(ctx);
  else if (command == "label") pipeline::run_label(ctx);
  else if (command == "predict") pipeline::run_predict(ctx);
  else if (command == "track") pipeline::run_track(ctx);
  else if (command == "roles") pipeline::run_roles(ctx);
  else if (command == "synth") pipeline::run_synth(ctx);
  else if (command == "export-dot") pipeline::run_export_dot(ctx);
  else if (command == "eval") std::cout << io::format_metrics(pipeline::run_eval(ctx));
  else if (command == "run-all") std::cout << io::format_metrics(pipeline::run_all(ctx));
  txn.commit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operating-room scene graph toolkit"};
  app.name("or-graph-kit");
  app.require_subcommand(1, 1);

  Flags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"fuse", "fuse per-camera clouds into one cloud per frame"},
      {"label", "assign every fused point to an instance"},
      {"predict", "predict scene graphs from labels, detections and model scores"},
      {"track", "associate detected humans across frames"},
      {"roles", "score tracks and assign unique clinical roles"},
      {"eval", "evaluate stage outputs against ground truth"},
      {"synth", "generate a synthetic take"},
      {"export-dot", "write predicted graphs as DOT"},
      {"run-all", "fuse, label, predict, track, roles, eval"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--take", flags.take, "take id (overrides the config)");
    sub->add_option("--seed", flags.seed, "random seed")->capture_default_str();
    sub->add_option("--out", flags.out, "output directory")->capture_default_str();
    sub->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  }

  if (argc > 1 && argv[1][0] != '-') {
    bool known = false;
    for (const auto& [name, _] : commands) known = known || std::string(name) == argv[1];
    if (!known) {
      std::cerr << "or-graph-kit: unknown subcommand '" << argv[1] << "'\n" << app.help();
      return 1;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "or-graph-kit: " << e.what() << "\n" << app.help();
    return 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const Error& e) {
    std::cerr << "or-graph-kit: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "or-graph-kit: io-error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "or-graph-kit: internal error: " << e.what() << "\n";
    return 2;
  }
}
