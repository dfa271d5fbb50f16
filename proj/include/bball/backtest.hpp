#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bball/model_selection.hpp"

namespace bball {

struct RoundResult {
  int round = 0;
  size_t n_games = 0;
  size_t n_correct = 0;
  size_t n_train = 0;  // training rows available when this round was predicted
  std::vector<Prediction> predictions;
};

struct BacktestReport {
  std::vector<RoundResult> per_round;
  MetricPair totals;  // weighted_accuracy is NaN when only one outcome occurred
  double trend_slope = 0;
  std::vector<std::string> warnings;
  size_t skipped_no_votes = 0;  // crowd runs only

  size_t total_games() const;
  size_t total_correct() const;
};

/// Least-squares slope of per-round accuracy against round index.
double accuracy_trend(const BacktestReport& report);

struct ModelRecipe {
  std::string name;
  ModelSpec spec;
  std::vector<std::string> features;  // empty = all canonical columns
  std::string level = "match";        // "match" or "team"
  std::optional<Grid> regrid;         // per-round re-tuning when present
};

/// Round-by-round walk-forward over the test season: the model for round r is
/// trained on every scored round of the prior seasons plus rounds 2..r-1 of
/// the test season, scaler refitted each step. Round 1 is excluded
/// everywhere; rounds listed in excluded_rounds are trained on but not scored.
BacktestReport walk_forward(const std::vector<SeasonDataset>& datasets, int test_season,
                            const ModelRecipe& recipe, const CvOptions& cv_opts,
                            const std::set<int>& excluded_rounds = {});

/// The home team always wins.
BacktestReport benchmark_home(const std::vector<SeasonDataset>& datasets, int test_season,
                              const std::set<int>& excluded_rounds = {});

/// Last season's final-four teams always win; all-or-none final-four games go
/// to the home team.
BacktestReport benchmark_f4(const std::vector<SeasonDataset>& datasets, int test_season,
                            const std::set<int>& excluded_rounds = {});

/// The team higher in the standings entering the round wins.
BacktestReport benchmark_standings(const std::vector<SeasonDataset>& datasets, int test_season,
                                   const std::set<int>& excluded_rounds = {});

}  // namespace bball
