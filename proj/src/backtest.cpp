#include "bball/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bball/stats.hpp"

namespace bball {

size_t BacktestReport::total_games() const {
  size_t n = 0;
  for (const auto& r : per_round) n += r.n_games;
  return n;
}

size_t BacktestReport::total_correct() const {
  size_t n = 0;
  for (const auto& r : per_round) n += r.n_correct;
  return n;
}

double accuracy_trend(const BacktestReport& report) {
  if (report.per_round.size() < 2)
    throw Error("accuracy trend needs at least two scored rounds");
  std::vector<double> x, y;
  for (const auto& r : report.per_round) {
    x.push_back(r.round);
    y.push_back(static_cast<double>(r.n_correct) / static_cast<double>(r.n_games));
  }
  return least_squares_slope(x, y);
}

namespace {

// Totals and trend from the accumulated rounds. Weighted accuracy pools the
// per-class recalls across the whole season; a single-class season leaves it
// NaN with a warning instead of failing the run.
void finalize(BacktestReport& report, const std::vector<Label>& actual,
              const std::vector<Label>& predicted) {
  if (!actual.empty()) report.totals.accuracy = accuracy(actual, predicted);
  try {
    report.totals.weighted_accuracy = weighted_accuracy(actual, predicted);
  } catch (const Error& e) {
    report.totals.weighted_accuracy = std::numeric_limits<double>::quiet_NaN();
    report.warnings.push_back(e.what());
  }
  report.trend_slope = report.per_round.size() >= 2 ? accuracy_trend(report) : 0.0;
}

// Shared driver for the rule-based predictors: walks the scored rounds of the
// test season and asks `rule` for each game's call.
template <typename Rule>
BacktestReport rule_backtest(const std::vector<SeasonDataset>& datasets, int test_season,
                             const std::set<int>& excluded_rounds, const Rule& rule) {
  const SeasonDataset& season = find_season(datasets, test_season);
  if (season.games.empty()) throw Error("test season has no games");

  BacktestReport report;
  std::vector<Label> actual, predicted;
  for (int round = 2; round <= season.max_round(); ++round) {
    if (excluded_rounds.count(round)) continue;
    RoundResult rr;
    rr.round = round;
    for (const auto& g : season.games) {
      if (g.round != round) continue;
      Prediction p = rule(season, g);
      Label truth = derive_label(g);
      ++rr.n_games;
      rr.n_correct += p.predicted == truth;
      actual.push_back(truth);
      predicted.push_back(p.predicted);
      rr.predictions.push_back(std::move(p));
    }
    if (rr.n_games == 0) {
      report.warnings.push_back("round " + std::to_string(round) +
                                " has no games; skipped");
      continue;
    }
    report.per_round.push_back(std::move(rr));
  }
  finalize(report, actual, predicted);
  return report;
}

}  // namespace

BacktestReport benchmark_home(const std::vector<SeasonDataset>& datasets, int test_season,
                              const std::set<int>& excluded_rounds) {
  return rule_backtest(datasets, test_season, excluded_rounds,
                       [](const SeasonDataset&, const GameRecord& g) {
                         return Prediction{id_of(g), Label::HomeWin, 1.0};
                       });
}

BacktestReport benchmark_f4(const std::vector<SeasonDataset>& datasets, int test_season,
                            const std::set<int>& excluded_rounds) {
  const SeasonDataset& season = find_season(datasets, test_season);
  if (season.f4_prev.empty())
    throw Error("final-four benchmark needs last season's final-four metadata");
  return rule_backtest(datasets, test_season, excluded_rounds,
                       [](const SeasonDataset& d, const GameRecord& g) {
                         bool home_f4 = d.f4_prev.count(g.home_team) > 0;
                         bool away_f4 = d.f4_prev.count(g.away_team) > 0;
                         Label pick = home_f4 == away_f4
                                          ? Label::HomeWin
                                          : (home_f4 ? Label::HomeWin : Label::AwayWin);
                         return Prediction{id_of(g), pick, pick == Label::HomeWin ? 1.0 : 0.0};
                       });
}

BacktestReport benchmark_standings(const std::vector<SeasonDataset>& datasets, int test_season,
                                   const std::set<int>& excluded_rounds) {
  // per-round position lookups, computed lazily once per round
  std::map<int, std::map<std::string, int>> positions;
  auto position_table = [&](const SeasonDataset& d, int round) -> const std::map<std::string, int>& {
    auto it = positions.find(round);
    if (it == positions.end()) {
      std::map<std::string, int> table;
      for (const auto& row : compute_standings(d, round - 1)) table[row.team] = row.position;
      it = positions.emplace(round, std::move(table)).first;
    }
    return it->second;
  };
  return rule_backtest(datasets, test_season, excluded_rounds,
                       [&](const SeasonDataset& d, const GameRecord& g) {
                         const auto& table = position_table(d, g.round);
                         int home_pos = table.at(g.home_team);
                         int away_pos = table.at(g.away_team);
                         Label pick =
                             home_pos < away_pos ? Label::HomeWin : Label::AwayWin;
                         return Prediction{id_of(g), pick, pick == Label::HomeWin ? 1.0 : 0.0};
                       });
}

namespace {

std::vector<int> seasons_before(const std::vector<SeasonDataset>& datasets, int test_season) {
  std::vector<int> prior;
  for (const auto& d : datasets)
    if (d.season < test_season) prior.push_back(d.season);
  std::sort(prior.begin(), prior.end());
  return prior;
}

}  // namespace

BacktestReport walk_forward(const std::vector<SeasonDataset>& datasets, int test_season,
                            const ModelRecipe& recipe, const CvOptions& cv_opts,
                            const std::set<int>& excluded_rounds) {
  const SeasonDataset& season = find_season(datasets, test_season);
  std::vector<int> prior = seasons_before(datasets, test_season);
  if (prior.empty()) throw Error("walk-forward needs at least one prior season for training");
  bool team_level = recipe.level == "team";
  if (!team_level && recipe.level != "match")
    throw Error("unknown prediction level '" + recipe.level + "'");

  // Features are pre-game by construction, so the full matrix can be built
  // once and sliced by round.
  std::vector<int> all_seasons = prior;
  all_seasons.push_back(test_season);
  FeatureMatrix full = team_level ? team_feature_matrix(datasets, all_seasons)
                                  : match_feature_matrix(datasets, all_seasons);
  if (!recipe.features.empty()) full = select_columns(full, recipe.features);

  BacktestReport report;
  std::vector<Label> actual, predicted;
  for (int round = 2; round <= season.max_round(); ++round) {
    if (excluded_rounds.count(round)) continue;
    std::vector<size_t> train_idx, test_idx;
    for (size_t i = 0; i < full.n_rows; ++i) {
      const GameId& id = full.row_keys[i].game;
      if (id.season != test_season)
        train_idx.push_back(i);
      else if (id.round < round)
        train_idx.push_back(i);
      else if (id.round == round)
        test_idx.push_back(i);
    }
    if (test_idx.empty()) {
      report.warnings.push_back("round " + std::to_string(round) + " has no games; skipped");
      continue;
    }
    if (train_idx.empty()) throw Error("no training rows before round " + std::to_string(round));

    FeatureMatrix train_set = subset_rows(full, train_idx);
    FeatureMatrix test_set = subset_rows(full, test_idx);
    Scaler scaler = fit_scaler(train_set);
    train_set = apply_scaler(scaler, train_set);
    test_set = apply_scaler(scaler, test_set);

    ModelSpec spec = recipe.spec;
    if (recipe.regrid) {
      GridResult tuned = grid_search(spec, *recipe.regrid, train_set, cv_opts);
      for (const auto& [k, v] : tuned.best_params) spec.hyper_params[k] = v;
    }
    TrainedModel model = train(spec, train_set);

    RoundResult rr;
    rr.round = round;
    rr.n_train = train_set.n_rows;
    if (team_level) {
      // rows come in home/away pairs per game
      for (size_t i = 0; i + 1 < test_set.n_rows; i += 2) {
        double p_home = model.predict_proba(std::span(test_set.row(i), test_set.n_cols));
        double p_away = model.predict_proba(std::span(test_set.row(i + 1), test_set.n_cols));
        Label pick = combine_team_predictions(p_home, p_away);
        Label truth = test_set.labels[i];  // home row's label marks the home result
        Prediction p{test_set.row_keys[i].game, pick, p_home};
        ++rr.n_games;
        rr.n_correct += pick == truth;
        actual.push_back(truth);
        predicted.push_back(pick);
        rr.predictions.push_back(std::move(p));
      }
    } else {
      for (size_t i = 0; i < test_set.n_rows; ++i) {
        double p_home = model.predict_proba(std::span(test_set.row(i), test_set.n_cols));
        Label pick = label_from_probability(p_home);
        Label truth = test_set.labels[i];
        Prediction p{test_set.row_keys[i].game, pick, p_home};
        ++rr.n_games;
        rr.n_correct += pick == truth;
        actual.push_back(truth);
        predicted.push_back(pick);
        rr.predictions.push_back(std::move(p));
      }
    }
    report.per_round.push_back(std::move(rr));
  }
  finalize(report, actual, predicted);
  return report;
}

}  // namespace bball
