#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "bball/commands.hpp"
#include "bball/kernels.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  std::string results, f4, crowd, out_dir, simd;
  uint64_t seed = 0;
  int jobs = 0;
  std::string exclude_rounds;
  bool seed_set = false, jobs_set = false;
};

void add_common_flags(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON configuration file");
  cmd->add_option("--results", args.results, "results CSV (season,round,date,teams,scores)");
  cmd->add_option("--f4", args.f4, "final-four metadata CSV (season,team)");
  cmd->add_option("--crowd", args.crowd, "crowd predictions CSV");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "random seed")->each([&](const std::string&) {
    args.seed_set = true;
  });
  cmd->add_option("--jobs", args.jobs, "worker thread cap (results are identical for any value)")
      ->each([&](const std::string&) { args.jobs_set = true; });
  cmd->add_option("--exclude-rounds", args.exclude_rounds,
                  "comma-separated rounds to leave out of scoring");
  cmd->add_option("--simd", args.simd, "force kernel dispatch: scalar or avx2");
}

bball::RunConfig resolve_config(const CliArgs& args) {
  bball::RunConfig cfg =
      args.config_path.empty() ? bball::default_config() : bball::load_config(args.config_path);
  if (!args.results.empty()) cfg.results_path = args.results;
  if (!args.f4.empty()) cfg.f4_path = args.f4;
  if (!args.crowd.empty()) cfg.crowd_path = args.crowd;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.seed_set) cfg.seed = args.seed;
  if (args.jobs_set) cfg.jobs = args.jobs;
  if (!args.exclude_rounds.empty()) {
    cfg.excluded_rounds.clear();
    std::string token;
    for (char c : args.exclude_rounds + ",") {
      if (c == ',') {
        if (!token.empty()) cfg.excluded_rounds.insert(std::stoi(token));
        token.clear();
      } else {
        token += c;
      }
    }
  }
  if (!args.simd.empty()) {
    if (args.simd == "scalar")
      bball::kernels::force(bball::kernels::Isa::Scalar);
    else if (args.simd == "avx2")
      bball::kernels::force(bball::kernels::Isa::Avx2);
    else
      throw bball::Error("unknown --simd value '" + args.simd + "'");
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euroleague game outcome prediction pipeline"};
  app.require_subcommand(1);

  CliArgs args;
  std::string method, model, level;

  CLI::App* validate = app.add_subcommand("validate", "check the input files");
  add_common_flags(validate, args);

  CLI::App* describe = app.add_subcommand("describe", "season summaries and distributions");
  add_common_flags(describe, args);

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "cross-validated grid search over the classifiers");
  add_common_flags(calibrate, args);
  calibrate->add_option("--level", level, "feature level: match or team");

  CLI::App* select = app.add_subcommand("select-features", "filter, pca or wrapper selection");
  add_common_flags(select, args);
  select->add_option("method", method, "filter, pca or wrapper")->required();

  CLI::App* backtest =
      app.add_subcommand("backtest", "round-by-round walk-forward evaluation");
  add_common_flags(backtest, args);
  backtest->add_option("model", model, "model1..model3, bench1..bench3 or crowd")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    bball::RunConfig cfg = resolve_config(args);
    if (!level.empty()) cfg.level = level;
    if (validate->parsed()) return bball::cmd_validate(cfg);
    if (describe->parsed()) return bball::cmd_describe(cfg);
    if (calibrate->parsed()) return bball::cmd_calibrate(cfg);
    if (select->parsed()) return bball::cmd_select_features(cfg, method);
    if (backtest->parsed()) return bball::cmd_backtest(cfg, model);
  } catch (const bball::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
