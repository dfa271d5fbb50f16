#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "bball/commands.hpp"
#include "bball/ingest.hpp"
#include "synth.hpp"

using namespace bball;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() /
          ("bball_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

void write_f4_csv(const synth::League& lg, const std::string& path) {
  std::ofstream out(path);
  out << "season,team\n";
  for (const auto& [season, teams] : lg.f4)
    for (const auto& t : teams) out << season << "," << t << "\n";
}

void write_crowd_csv(const synth::League& lg, int season, const std::string& path,
                     uint64_t seed) {
  Rng rng(seed);
  std::ofstream out(path);
  out << "season,round,home_team,away_team,player_id,prediction\n";
  const SeasonDataset& d = find_season(lg.datasets, season);
  for (const auto& g : d.games) {
    Label truth = derive_label(g);
    for (int p = 0; p < 7; ++p) {
      Label vote = rng.next_unit() < 0.75
                       ? truth
                       : (truth == Label::HomeWin ? Label::AwayWin : Label::HomeWin);
      out << g.season << "," << g.round << "," << g.home_team << "," << g.away_team
          << ",player" << p << "," << to_int(vote) << "\n";
    }
  }
}

RunConfig base_config(const Workspace& ws, const synth::League& lg) {
  write_results(lg.datasets, ws.path("results.csv"));
  write_f4_csv(lg, ws.path("f4.csv"));
  RunConfig cfg = default_config();
  cfg.results_path = ws.path("results.csv");
  cfg.f4_path = ws.path("f4.csv");
  cfg.out_dir = ws.path("out");
  cfg.seed = 11;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

size_t line_count(const std::string& text) {
  size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

/// Reads every file under a directory into name -> bytes.
std::map<std::string, std::string> snapshot(const std::string& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) out[entry.path().filename().string()] = slurp(entry.path());
  return out;
}

}  // namespace

TEST_CASE("validate exits 0 on clean data and 1 on broken data") {
  Workspace ws;
  synth::League lg = synth::make_league(2018, 2, 6, 301);
  RunConfig cfg = base_config(ws, lg);
  CHECK(cmd_validate(cfg) == 0);

  // duplicate game appended
  std::ofstream out(ws.path("results.csv"), std::ios::app);
  const GameRecord& g = lg.datasets[0].games[0];
  out << g.season << "," << g.round << "," << to_string(g.date) << "," << g.home_team << ","
      << g.away_team << "," << g.home_score << "," << g.away_score << "\n";
  out.close();
  CHECK(cmd_validate(cfg) == 1);

  cfg.results_path = ws.path("missing.csv");
  CHECK(cmd_validate(cfg) == 1);
}

TEST_CASE("describe writes one summary row per season plus distribution files") {
  Workspace ws;
  synth::League lg = synth::make_league(2019, 1, 6, 303);
  RunConfig cfg = base_config(ws, lg);
  REQUIRE(cmd_describe(cfg) == 0);

  std::string summary_csv = slurp(ws.path("out/season_summary.csv"));
  CHECK(line_count(summary_csv) == 2);  // header + one season
  for (const char* name :
       {"score_quartiles.csv", "diff_quartiles.csv", "win_prob_curve_all.csv",
        "win_prob_curve_home.csv", "win_prob_curve_away.csv", "resolved_config.json",
        "run_manifest.json"})
    CHECK(fs::exists(ws.path(std::string("out/") + name)));
}

TEST_CASE("calibrate writes a grid file and a summary row per algorithm") {
  Workspace ws;
  synth::League lg = synth::make_league(2017, 3, 6, 305);
  RunConfig cfg = base_config(ws, lg);
  cfg.algorithms = {"NB", "KNN"};
  cfg.grids["KNN"] = {{"k", {1, 3}}};
  cfg.dump_features = true;
  REQUIRE(cmd_calibrate(cfg) == 0);

  std::string summary = slurp(ws.path("out/calibration_summary.csv"));
  CHECK(line_count(summary) == 3);  // header + two algorithms
  CHECK(fs::exists(ws.path("out/calibration_grid_NB.csv")));
  CHECK(fs::exists(ws.path("out/calibration_grid_KNN.csv")));

  // two training seasons of a 6-team league: 2 x (10-1) x 3 scored games
  std::string dumped = slurp(ws.path("out/features_match.csv"));
  CHECK(line_count(dumped) == 1 + 2 * 9 * 3);
}

TEST_CASE("calibrate level flag switches the design matrix") {
  Workspace ws;
  synth::League lg = synth::make_league(2017, 3, 6, 307);
  RunConfig cfg = base_config(ws, lg);
  cfg.algorithms = {"NB"};
  REQUIRE(cmd_calibrate(cfg) == 0);
  std::string match_summary = slurp(ws.path("out/calibration_summary.csv"));

  cfg.level = "team";
  cfg.out_dir = ws.path("out_team");
  REQUIRE(cmd_calibrate(cfg) == 0);
  std::string team_summary = slurp(ws.path("out_team/calibration_summary.csv"));
  CHECK(match_summary != team_summary);
  CHECK(team_summary.find("team") != std::string::npos);
}

TEST_CASE("same seed gives byte-identical calibration outputs at any job count") {
  Workspace ws;
  synth::League lg = synth::make_league(2017, 3, 6, 309);
  RunConfig cfg = base_config(ws, lg);
  cfg.algorithms = {"KNN", "ADA2"};
  cfg.grids["KNN"] = {{"k", {1, 3, 5}}};
  cfg.grids["ADA2"] = {{"n_estimators", {10, 20}}, {"learning_rate", {0.5, 1.0}}};

  REQUIRE(cmd_calibrate(cfg) == 0);
  auto first = snapshot(cfg.out_dir);
  fs::remove_all(cfg.out_dir);
  cfg.jobs = 8;
  REQUIRE(cmd_calibrate(cfg) == 0);
  auto second = snapshot(cfg.out_dir);
  second["resolved_config.json"] = first["resolved_config.json"];  // records the jobs flag
  second["run_manifest.json"] = first["run_manifest.json"];
  CHECK(first == second);
}

TEST_CASE("select-features rejects unknown methods and sweeps pca fully") {
  Workspace ws;
  synth::League lg = synth::make_league(2017, 3, 6, 311);
  RunConfig cfg = base_config(ws, lg);
  CHECK(cmd_select_features(cfg, "sorcery") == 2);

  cfg.grids["ADA2"] = {{"n_estimators", {15}}, {"learning_rate", {1.0}}};
  REQUIRE(cmd_select_features(cfg, "pca") == 0);
  std::string sweep = slurp(ws.path("out/pca_sweep.csv"));
  CHECK(line_count(sweep) == 13);  // header + one row per component count
}

TEST_CASE("select-features filter emits rankings and three increment curves") {
  Workspace ws;
  synth::League lg = synth::make_league(2017, 3, 6, 313);
  RunConfig cfg = base_config(ws, lg);
  cfg.wrapper_fixed = {{"n_estimators", 15}, {"learning_rate", 1.0}};
  REQUIRE(cmd_select_features(cfg, "filter") == 0);
  std::string ranking = slurp(ws.path("out/filter_ranking.csv"));
  CHECK(line_count(ranking) == 13);  // header + 12 features
  for (const char* name : {"filter_increment_anova.csv", "filter_increment_mi.csv",
                           "filter_increment_chi2.csv"})
    CHECK(line_count(slurp(ws.path(std::string("out/") + name))) == 13);
}

TEST_CASE("backtest validates the model name and runs the benchmarks") {
  Workspace ws;
  synth::League lg = synth::make_league(2018, 2, 6, 315);
  RunConfig cfg = base_config(ws, lg);
  CHECK(cmd_backtest(cfg, "model9") == 2);

  REQUIRE(cmd_backtest(cfg, "bench1") == 0);
  std::string summary = slurp(ws.path("out/backtest_summary.csv"));
  CHECK(summary.find("bench1") != std::string::npos);
  CHECK(fs::exists(ws.path("out/backtest_bench1.csv")));

  cfg.out_dir = ws.path("out2");
  REQUIRE(cmd_backtest(cfg, "bench2") == 0);
  cfg.out_dir = ws.path("out3");
  REQUIRE(cmd_backtest(cfg, "bench3") == 0);
}

TEST_CASE("backtest crowd consumes the crowd file and reports coverage") {
  Workspace ws;
  synth::League lg = synth::make_league(2018, 2, 6, 317);
  RunConfig cfg = base_config(ws, lg);
  write_crowd_csv(lg, 2019, ws.path("crowd.csv"), 99);
  cfg.crowd_path = ws.path("crowd.csv");
  cfg.excluded_rounds = {6};
  REQUIRE(cmd_backtest(cfg, "crowd") == 0);
  CHECK(fs::exists(ws.path("out/crowd_backtest.csv")));
  std::string per_round = slurp(ws.path("out/crowd_backtest.csv"));
  CHECK(per_round.find("\n6,") == std::string::npos);  // round 6 excluded
}

TEST_CASE("backtest model runs a small walk-forward from config") {
  Workspace ws;
  synth::League lg = synth::make_league(2018, 2, 6, 319);
  RunConfig cfg = base_config(ws, lg);
  ModelDef def;
  def.algorithm = "ADA2";
  def.params = {{"n_estimators", 20}, {"learning_rate", 0.8}};
  def.features = {};
  cfg.models["model3"] = def;
  REQUIRE(cmd_backtest(cfg, "model3") == 0);
  std::string summary = slurp(ws.path("out/backtest_summary.csv"));
  CHECK(summary.find("model3") != std::string::npos);
  std::string per_round = slurp(ws.path("out/backtest_model3.csv"));
  CHECK(line_count(per_round) == 10);  // header + rounds 2..10
}

TEST_CASE("config files load, override defaults, and round-trip") {
  Workspace ws;
  {
    std::ofstream out(ws.path("config.json"));
    out << R"({
      "seed": 99,
      "cv_folds": 4,
      "excluded_rounds": [1, 26],
      "grids": {"KNN": {"k": [1, 3, 5]}},
      "models": {"model1": {"algorithm": "NB", "features": ["Position Home"]}}
    })";
  }
  RunConfig cfg = load_config(ws.path("config.json"));
  CHECK(cfg.seed == 99);
  CHECK(cfg.cv_folds == 4);
  CHECK(cfg.excluded_rounds == std::set<int>{1, 26});
  REQUIRE(cfg.grids.count("KNN"));
  CHECK(cfg.grids["KNN"][0].second == std::vector<double>{1, 3, 5});
  CHECK(cfg.models.at("model1").algorithm == "NB");
  CHECK(cfg.models.at("model2").algorithm == "ADA2");  // untouched default

  {
    std::ofstream out(ws.path("bad.json"));
    out << R"({"grids": {"NOPE": {"k": [1]}}})";
  }
  CHECK_THROWS_AS(load_config(ws.path("bad.json")), Error);
  CHECK_THROWS_AS(load_config(ws.path("absent.json")), Error);
}
