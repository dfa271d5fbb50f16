#include "bball/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "bball/backtest.hpp"
#include "bball/crowd.hpp"
#include "bball/csv.hpp"
#include "bball/descriptive.hpp"
#include "bball/feature_selection.hpp"
#include "bball/ingest.hpp"

namespace bball {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for hashing");
  uint64_t h = 1469598103934665603ULL;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void print_report(const ValidationReport& rep) {
  for (const auto& [line, msg] : rep.errors) {
    if (line > 0)
      std::printf("error: line %d: %s\n", line, msg.c_str());
    else
      std::printf("error: %s\n", msg.c_str());
  }
  for (const auto& [line, msg] : rep.warnings) {
    if (line > 0)
      std::printf("warning: line %d: %s\n", line, msg.c_str());
    else
      std::printf("warning: %s\n", msg.c_str());
  }
}

/// Collects output file names and writes the provenance pair
/// (resolved_config.json + run_manifest.json) at the end of a run.
class RunOutputs {
 public:
  RunOutputs(const RunConfig& cfg, std::string command, std::string argument)
      : cfg_(cfg), command_(std::move(command)), argument_(std::move(argument)) {
    fs::create_directories(cfg.out_dir);
  }

  std::string path(const std::string& name) {
    files_.push_back(name);
    return (fs::path(cfg_.out_dir) / name).string();
  }

  void finish() {
    {
      std::ofstream out(fs::path(cfg_.out_dir) / "resolved_config.json");
      out << config_to_json(cfg_);
    }
    json manifest;
    manifest["version"] = kVersion;
    manifest["command"] = command_;
    manifest["argument"] = argument_;
    manifest["seed"] = cfg_.seed;
    manifest["jobs"] = cfg_.jobs;
    json inputs = json::object();
    for (const auto& [key, p] : {std::pair{"results", cfg_.results_path},
                                 {"f4", cfg_.f4_path},
                                 {"crowd", cfg_.crowd_path}}) {
      if (!p.empty() && fs::exists(p))
        inputs[key] = {{"path", p}, {"fnv64", hex64(fnv1a64_file(p))}};
    }
    manifest["inputs"] = inputs;
    std::vector<std::string> sorted = files_;
    sorted.push_back("resolved_config.json");
    std::sort(sorted.begin(), sorted.end());
    manifest["outputs"] = sorted;
    std::ofstream out(fs::path(cfg_.out_dir) / "run_manifest.json");
    out << manifest.dump(2) << "\n";
  }

 private:
  const RunConfig& cfg_;
  std::string command_, argument_;
  std::vector<std::string> files_;
};

struct LoadedData {
  std::vector<SeasonDataset> datasets;
  ValidationReport report;
};

LoadedData load_datasets(const RunConfig& cfg, bool need_f4) {
  if (cfg.results_path.empty()) throw Error("no results file given (--results or config)");
  LoadedData out;
  ResultsFile rf = read_results(cfg.results_path);
  out.report = rf.report;
  out.datasets = std::move(rf.datasets);
  if (!out.report.ok()) return out;
  if (!cfg.f4_path.empty()) {
    std::map<int, std::set<std::string>> season_teams;
    for (const auto& d : out.datasets) season_teams[d.season] = d.teams;
    F4Map f4 = read_f4(cfg.f4_path, out.report, &season_teams);
    attach_f4(out.datasets, f4, out.report);
  } else if (need_f4) {
    throw Error("this command needs final-four metadata (--f4 or config)");
  } else {
    for (auto& d : out.datasets) d.f4_prev.clear();
  }
  return out;
}

int resolved_test_season(const RunConfig& cfg, const std::vector<SeasonDataset>& datasets) {
  if (cfg.test_season != 0) return cfg.test_season;
  int latest = 0;
  for (const auto& d : datasets) latest = std::max(latest, d.season);
  if (latest == 0) throw Error("no seasons in the data");
  return latest;
}

std::vector<int> resolved_train_seasons(const RunConfig& cfg,
                                        const std::vector<SeasonDataset>& datasets,
                                        int test_season) {
  if (!cfg.train_seasons.empty()) return cfg.train_seasons;
  std::vector<int> out;
  for (const auto& d : datasets)
    if (d.season < test_season) out.push_back(d.season);
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error("no training seasons precede season " +
                               std::to_string(test_season));
  return out;
}

std::string params_to_string(const Params& p) {
  std::string out;
  for (const auto& [k, v] : p) {
    if (!out.empty()) out += ';';
    out += k + "=" + format_double(v, 6);
  }
  return out;
}

CvOptions cv_options(const RunConfig& cfg) {
  CvOptions opts;
  opts.k = cfg.cv_folds;
  opts.seed = cfg.seed;
  opts.jobs = cfg.jobs;
  return opts;
}

FeatureMatrix build_matrix(const std::vector<SeasonDataset>& datasets,
                           const std::vector<int>& seasons, const std::string& level) {
  if (level == "team") return team_feature_matrix(datasets, seasons);
  if (level == "match") return match_feature_matrix(datasets, seasons);
  throw Error("unknown level '" + level + "' (expected match or team)");
}

Grid grid_for(const RunConfig& cfg, Algorithm a) {
  auto it = cfg.grids.find(to_string(a));
  if (it != cfg.grids.end()) return it->second;
  return default_grid(a);
}

/// Step-one wrapper parameters: either the configured fixed set or a fresh
/// full-feature tuning of the wrapper algorithm.
ModelSpec resolve_fixed_spec(const RunConfig& cfg, const FeatureMatrix& data) {
  ModelSpec spec;
  spec.algorithm = algorithm_from_string(cfg.wrapper_algorithm);
  spec.seed = cfg.seed;
  if (!cfg.wrapper_fixed.empty()) {
    spec.hyper_params = cfg.wrapper_fixed;
    return spec;
  }
  Grid grid = grid_for(cfg, spec.algorithm);
  if (grid.empty()) return spec;
  std::printf("tuning %s on all features to fix the scan parameters...\n",
              cfg.wrapper_algorithm.c_str());
  GridResult tuned = grid_search_estimators_refined(spec, grid, data, cv_options(cfg));
  spec.hyper_params = tuned.best_params;
  std::printf("fixed parameters: %s (cv accuracy %.4f)\n",
              params_to_string(tuned.best_params).c_str(), tuned.best_metric.accuracy);
  return spec;
}

void write_backtest_files(RunOutputs& outputs, const std::string& model,
                          const BacktestReport& report) {
  std::string per_round_name =
      model == "crowd" ? "crowd_backtest.csv" : "backtest_" + model + ".csv";
  {
    CsvWriter w(outputs.path(per_round_name));
    w.write_row({"round", "n_games", "n_correct", "accuracy"});
    for (const auto& r : report.per_round)
      w.write_row({std::to_string(r.round), std::to_string(r.n_games),
                   std::to_string(r.n_correct),
                   format_double(static_cast<double>(r.n_correct) / r.n_games)});
  }
  {
    CsvWriter w(outputs.path("backtest_summary.csv"));
    w.write_row({"model", "n_games", "n_correct", "accuracy", "weighted_accuracy",
                 "trend_slope", "n_skipped_no_votes"});
    w.write_row({model, std::to_string(report.total_games()),
                 std::to_string(report.total_correct()), format_double(report.totals.accuracy),
                 std::isnan(report.totals.weighted_accuracy)
                     ? "nan"
                     : format_double(report.totals.weighted_accuracy),
                 format_double(report.trend_slope), std::to_string(report.skipped_no_votes)});
  }
  {
    CsvWriter w(outputs.path("backtest_" + model + "_predictions.csv"));
    w.write_row({"season", "round", "home_team", "away_team", "predicted", "probability_home"});
    for (const auto& r : report.per_round)
      for (const auto& p : r.predictions)
        w.write_row({std::to_string(p.game.season), std::to_string(p.game.round),
                     p.game.home_team, p.game.away_team, std::to_string(to_int(p.predicted)),
                     format_double(p.probability_home)});
  }
  for (const auto& wmsg : report.warnings) std::printf("warning: %s\n", wmsg.c_str());
  std::printf("%s: %zu/%zu correct, accuracy %.4f, weighted accuracy %.4f, trend %+.5f\n",
              model.c_str(), report.total_correct(), report.total_games(),
              report.totals.accuracy, report.totals.weighted_accuracy, report.trend_slope);
}

}  // namespace

int cmd_validate(const RunConfig& cfg) {
  try {
    LoadedData data = load_datasets(cfg, false);
    ValidationReport rep = data.report;
    if (rep.ok()) rep.merge(validate(data.datasets));
    print_report(rep);
    for (const auto& [season, complete] : rep.is_complete_season)
      std::printf("season %d: %s\n", season, complete ? "complete" : "incomplete");
    if (!rep.ok()) return kExitFailure;
    std::printf("ok: %zu season(s) loaded\n", data.datasets.size());
    return kExitOk;
  } catch (const Error& e) {
    std::printf("error: %s\n", e.what());
    return kExitFailure;
  }
}

int cmd_describe(const RunConfig& cfg) {
  try {
    LoadedData data = load_datasets(cfg, false);
    if (!data.report.ok()) {
      print_report(data.report);
      return kExitFailure;
    }
    if (data.datasets.empty()) {
      std::printf("error: no games to describe\n");
      return kExitFailure;
    }
    RunOutputs outputs(cfg, "describe", "");

    {
      CsvWriter w(outputs.path("season_summary.csv"));
      w.write_row({"season", "home_wins", "away_wins", "mean_home_score", "mean_away_score",
                   "mean_home_win_score", "mean_away_win_score", "mean_home_score_away_wins",
                   "mean_away_score_away_wins"});
      for (const auto& d : data.datasets) {
        SeasonSummary s = season_summary(d);
        w.write_row({std::to_string(s.season), std::to_string(s.home_wins),
                     std::to_string(s.away_wins), format_double(s.mean_home_score, 1),
                     format_double(s.mean_away_score, 1),
                     format_double(s.mean_home_win_score, 1),
                     format_double(s.mean_away_win_score, 1),
                     format_double(s.mean_home_score_away_wins, 1),
                     format_double(s.mean_away_score_away_wins, 1)});
      }
    }

    auto quartile_row = [](const QuartileSummary& q) {
      return std::vector<std::string>{format_double(q.min, 1),    format_double(q.q1, 1),
                                      format_double(q.median, 1), format_double(q.q3, 1),
                                      format_double(q.max, 1),    std::to_string(q.n)};
    };
    std::vector<GameRecord> pooled = pool_games(data.datasets);
    {
      CsvWriter w(outputs.path("score_quartiles.csv"));
      w.write_row({"season", "side", "filter", "min", "q1", "median", "q3", "max", "n"});
      auto emit = [&](const std::string& season, std::span<const GameRecord> games) {
        for (auto [side, side_name] : {std::pair{Side::Home, "home"}, {Side::Away, "away"}})
          for (auto [f, f_name] : {std::pair{OutcomeFilter::All, "all"},
                                   {OutcomeFilter::Wins, "wins"},
                                   {OutcomeFilter::Losses, "losses"}}) {
            std::vector<std::string> row = {season, side_name, f_name};
            auto vals = quartile_row(score_quartiles(games, side, f));
            row.insert(row.end(), vals.begin(), vals.end());
            w.write_row(row);
          }
      };
      for (const auto& d : data.datasets) emit(std::to_string(d.season), d.games);
      emit("all", pooled);
    }
    {
      CsvWriter w(outputs.path("diff_quartiles.csv"));
      w.write_row({"season", "winner", "min", "q1", "median", "q3", "max", "n"});
      auto emit = [&](const std::string& season, std::span<const GameRecord> games) {
        for (auto [side, name] : {std::pair{Side::Home, "home"}, {Side::Away, "away"}}) {
          std::vector<std::string> row = {season, name};
          auto vals = quartile_row(diff_quartiles(games, side));
          row.insert(row.end(), vals.begin(), vals.end());
          w.write_row(row);
        }
      };
      for (const auto& d : data.datasets) emit(std::to_string(d.season), d.games);
      emit("all", pooled);
    }
    for (auto [scope, name] :
         {std::pair{Scope::All, "all"}, {Scope::Home, "home"}, {Scope::Away, "away"}}) {
      CsvWriter w(outputs.path(std::string("win_prob_curve_") + name + ".csv"));
      w.write_row({"threshold", "probability", "support"});
      for (const auto& pt : win_probability_curve(std::span<const GameRecord>(pooled), scope))
        w.write_row({std::to_string(pt.threshold), format_double(pt.p), std::to_string(pt.n)});
    }

    outputs.finish();
    std::printf("described %zu season(s) into %s\n", data.datasets.size(), cfg.out_dir.c_str());
    return kExitOk;
  } catch (const Error& e) {
    std::printf("error: %s\n", e.what());
    return kExitFailure;
  }
}

int cmd_calibrate(const RunConfig& cfg) {
  try {
    LoadedData data = load_datasets(cfg, false);
    if (!data.report.ok()) {
      print_report(data.report);
      return kExitFailure;
    }
    int test_season = resolved_test_season(cfg, data.datasets);
    std::vector<int> train_seasons = resolved_train_seasons(cfg, data.datasets, test_season);
    FeatureMatrix matrix = build_matrix(data.datasets, train_seasons, cfg.level);
    CvOptions opts = cv_options(cfg);

    std::vector<std::string> algorithms = cfg.algorithms;
    if (algorithms.empty())
      for (Algorithm a : all_algorithms()) algorithms.push_back(to_string(a));

    RunOutputs outputs(cfg, "calibrate", cfg.level);
    if (cfg.dump_features)
      write_feature_matrix_csv(matrix, outputs.path("features_" + cfg.level + ".csv"));
    CsvWriter summary(outputs.path("calibration_summary.csv"));
    summary.write_row({"algorithm", "level", "best_params", "accuracy", "weighted_accuracy"});

    for (const std::string& name : algorithms) {
      Algorithm algo = algorithm_from_string(name);
      ModelSpec spec{algo, {}, cfg.seed};
      Grid grid = grid_for(cfg, algo);

      GridResult result;
      if (grid.empty()) {
        result.best_metric = cross_validate(spec, matrix, opts);
        result.all_points.push_back(GridPoint{{}, result.best_metric});
      } else if (algo == Algorithm::ADA || algo == Algorithm::ADA2) {
        result = grid_search_estimators_refined(spec, grid, matrix, opts);
      } else {
        result = grid_search(spec, grid, matrix, opts);
      }

      CsvWriter w(outputs.path("calibration_grid_" + name + ".csv"));
      w.write_row({"params", "accuracy", "weighted_accuracy"});
      for (const auto& pt : result.all_points)
        w.write_row({params_to_string(pt.params), format_double(pt.metrics.accuracy),
                     format_double(pt.metrics.weighted_accuracy)});
      summary.write_row({name, cfg.level, params_to_string(result.best_params),
                         format_double(result.best_metric.accuracy),
                         format_double(result.best_metric.weighted_accuracy)});
      std::printf("%s: accuracy %.4f, weighted %.4f, params {%s}\n", name.c_str(),
                  result.best_metric.accuracy, result.best_metric.weighted_accuracy,
                  params_to_string(result.best_params).c_str());
    }
    outputs.finish();
    return kExitOk;
  } catch (const Error& e) {
    std::printf("error: %s\n", e.what());
    return kExitFailure;
  }
}

int cmd_select_features(const RunConfig& cfg, const std::string& method) {
  if (method != "filter" && method != "pca" && method != "wrapper") {
    std::printf("error: unknown method '%s' (expected filter, pca or wrapper)\n",
                method.c_str());
    return kExitUsage;
  }
  try {
    LoadedData data = load_datasets(cfg, false);
    if (!data.report.ok()) {
      print_report(data.report);
      return kExitFailure;
    }
    int test_season = resolved_test_season(cfg, data.datasets);
    std::vector<int> train_seasons = resolved_train_seasons(cfg, data.datasets, test_season);
    FeatureMatrix matrix = match_feature_matrix(data.datasets, train_seasons);
    CvOptions opts = cv_options(cfg);
    RunOutputs outputs(cfg, "select-features", method);

    if (method == "filter") {
      // the filter stage analyses the training set only, so fitting the
      // scaler on all of it leaks nothing
      FeatureMatrix scaled = apply_scaler(fit_scaler(matrix), matrix);
      std::vector<FeatureRanking> rankings;
      for (FilterMethod fm : {FilterMethod::ANOVA, FilterMethod::MI, FilterMethod::CHI2})
        rankings.push_back(rank_features(fm, scaled, cfg.mi_bins));
      {
        CsvWriter w(outputs.path("filter_ranking.csv"));
        w.write_row({"feature", "anova_rank", "mi_rank", "chi2_rank", "anova_score", "mi_score",
                     "chi2_score"});
        for (size_t j = 0; j < scaled.n_cols; ++j)
          w.write_row({scaled.column_names[j], std::to_string(rankings[0].ranks[j]),
                       std::to_string(rankings[1].ranks[j]),
                       std::to_string(rankings[2].ranks[j]),
                       format_double(rankings[0].scores[j]),
                       format_double(rankings[1].scores[j]),
                       format_double(rankings[2].scores[j])});
      }
      ModelSpec fixed = resolve_fixed_spec(cfg, matrix);
      for (const auto& ranking : rankings) {
        auto curve = incremental_filter_eval(ranking, fixed, matrix, opts);
        CsvWriter w(outputs.path("filter_increment_" + to_string(ranking.method) + ".csv"));
        w.write_row({"n_features", "features", "accuracy", "weighted_accuracy"});
        for (size_t j = 0; j < curve.size(); ++j) {
          std::string names;
          for (const auto& f : curve[j].features) names += (names.empty() ? "" : "|") + f;
          w.write_row({std::to_string(j + 1), names, format_double(curve[j].metrics.accuracy),
                       format_double(curve[j].metrics.weighted_accuracy)});
        }
      }
    } else if (method == "pca") {
      ModelSpec spec{algorithm_from_string(cfg.wrapper_algorithm), {}, cfg.seed};
      Grid grid = grid_for(cfg, spec.algorithm);
      auto sweep = pca_sweep(spec, grid, matrix, opts);
      CsvWriter w(outputs.path("pca_sweep.csv"));
      w.write_row({"components", "best_params", "accuracy", "weighted_accuracy"});
      for (const auto& [c, result] : sweep)
        w.write_row({std::to_string(c), params_to_string(result.best_params),
                     format_double(result.best_metric.accuracy),
                     format_double(result.best_metric.weighted_accuracy)});
    } else {
      ModelSpec fixed = resolve_fixed_spec(cfg, matrix);
      auto scan = wrapper_search(fixed, matrix, opts);
      std::printf("evaluated %zu feature subsets\n", scan.size());
      {
        CsvWriter w(outputs.path("wrapper_scan.csv"));
        w.write_row({"mask", "n_features", "features", "accuracy", "weighted_accuracy"});
        for (const auto& r : scan) {
          std::string names;
          for (const auto& f : r.features) names += (names.empty() ? "" : "|") + f;
          w.write_row({std::to_string(r.mask), std::to_string(r.features.size()), names,
                       format_double(r.cv_metrics.accuracy),
                       format_double(r.cv_metrics.weighted_accuracy)});
        }
      }
      size_t top_n = std::min<size_t>(10, scan.size());
      std::vector<SubsetResult> top(scan.begin(), scan.begin() + top_n);
      ModelSpec tmpl{fixed.algorithm, {}, cfg.seed};
      auto refined = wrapper_refine(top, tmpl, grid_for(cfg, fixed.algorithm), matrix, opts);
      CsvWriter w(outputs.path("wrapper_top10.csv"));
      w.write_row({"rank", "mask", "features", "scan_accuracy", "scan_weighted_accuracy",
                   "refined_accuracy", "refined_weighted_accuracy", "refined_params"});
      for (size_t i = 0; i < refined.size(); ++i) {
        const SubsetResult& r = refined[i];
        const SubsetResult* scanned = nullptr;
        for (const auto& s : top)
          if (s.mask == r.mask) scanned = &s;
        std::string names;
        for (const auto& f : r.features) names += (names.empty() ? "" : "|") + f;
        w.write_row({std::to_string(i + 1), std::to_string(r.mask), names,
                     format_double(scanned ? scanned->cv_metrics.accuracy : 0),
                     format_double(scanned ? scanned->cv_metrics.weighted_accuracy : 0),
                     format_double(r.cv_metrics.accuracy),
                     format_double(r.cv_metrics.weighted_accuracy),
                     params_to_string(r.params)});
      }
    }
    outputs.finish();
    return kExitOk;
  } catch (const Error& e) {
    std::printf("error: %s\n", e.what());
    return kExitFailure;
  }
}

int cmd_backtest(const RunConfig& cfg, const std::string& model) {
  static const std::set<std::string> known = {"model1", "model2", "model3", "bench1",
                                              "bench2", "bench3", "crowd"};
  if (!known.count(model)) {
    std::printf("error: unknown model '%s' (expected model1..model3, bench1..bench3 or crowd)\n",
                model.c_str());
    return kExitUsage;
  }
  try {
    bool needs_f4 = model == "bench2";
    LoadedData data = load_datasets(cfg, needs_f4);
    if (!data.report.ok()) {
      print_report(data.report);
      return kExitFailure;
    }
    int test_season = resolved_test_season(cfg, data.datasets);
    RunOutputs outputs(cfg, "backtest", model);

    BacktestReport report;
    if (model == "bench1") {
      report = benchmark_home(data.datasets, test_season, cfg.excluded_rounds);
    } else if (model == "bench2") {
      report = benchmark_f4(data.datasets, test_season, cfg.excluded_rounds);
    } else if (model == "bench3") {
      report = benchmark_standings(data.datasets, test_season, cfg.excluded_rounds);
    } else if (model == "crowd") {
      if (cfg.crowd_path.empty()) throw Error("crowd backtest needs --crowd or config data.crowd");
      ValidationReport crowd_rep;
      std::vector<CrowdVote> votes = read_crowd(cfg.crowd_path, crowd_rep);
      print_report(crowd_rep);
      if (!crowd_rep.ok()) return kExitFailure;
      report = crowd_backtest(votes, data.datasets, test_season, cfg.excluded_rounds);
    } else {
      auto it = cfg.models.find(model);
      if (it == cfg.models.end()) throw Error("config defines no model named '" + model + "'");
      const ModelDef& def = it->second;
      ModelRecipe recipe;
      recipe.name = model;
      recipe.spec = ModelSpec{algorithm_from_string(def.algorithm), def.params, cfg.seed};
      recipe.features = def.features;
      recipe.level = def.level;
      if (def.regrid) recipe.regrid = grid_for(cfg, recipe.spec.algorithm);
      report = walk_forward(data.datasets, test_season, recipe, cv_options(cfg),
                            cfg.excluded_rounds);
    }
    write_backtest_files(outputs, model, report);
    outputs.finish();
    return kExitOk;
  } catch (const Error& e) {
    std::printf("error: %s\n", e.what());
    return kExitFailure;
  }
}

}  // namespace bball
