#pragma once

#include <span>
#include <string>
#include <vector>

#include "bball/domain.hpp"

namespace bball {

struct StandingsRow {
  std::string team;
  int wins = 0;
  int losses = 0;
  int points_for = 0;
  int points_against = 0;
  int diff = 0;
  int position = 0;  // 1-based rank
};

/// Standings over rounds 1..through_round. Ordering: wins desc, score
/// difference desc, points scored desc, then team name for full determinism.
std::vector<StandingsRow> compute_standings(const SeasonDataset& d, int through_round);

/// A team's pre-round snapshot. Everything is computed from rounds strictly
/// before `before_round`, within its own season.
struct TeamState {
  int position = 0;
  double avg_offense = 0;
  double avg_defense = 0;
  double avg_diff = 0;
  double form = 0;  // fraction of the last min(5, played) games won
  int f4 = 0;
  int games_played = 0;
};

TeamState team_state(const SeasonDataset& d, const std::string& team, int before_round);

struct RowKey {
  GameId game;
  std::string team;  // empty for match-level rows
};

struct FeatureMatrix {
  std::vector<std::string> column_names;
  size_t n_rows = 0;
  size_t n_cols = 0;
  std::vector<double> values;  // row-major
  std::vector<Label> labels;
  std::vector<RowKey> row_keys;

  double at(size_t r, size_t c) const { return values[r * n_cols + c]; }
  double& at(size_t r, size_t c) { return values[r * n_cols + c]; }
  const double* row(size_t r) const { return values.data() + r * n_cols; }
  std::vector<double> row_vec(size_t r) const {
    return {row(r), row(r) + n_cols};
  }
  size_t column_index(const std::string& name) const;  // throws if absent
};

const std::vector<std::string>& match_feature_names();  // 12 canonical columns
const std::vector<std::string>& team_feature_names();   // 7 canonical columns

/// One row per game of rounds >= 2, both teams' states side by side.
/// Round 1 carries no prior information and is excluded everywhere.
FeatureMatrix match_feature_matrix(const std::vector<SeasonDataset>& datasets,
                                   const std::vector<int>& seasons);

/// Two rows per game (home first); the label marks whether that row's team won.
FeatureMatrix team_feature_matrix(const std::vector<SeasonDataset>& datasets,
                                  const std::vector<int>& seasons);

struct Scaler {
  std::vector<double> mins;
  std::vector<double> maxs;
};

/// Per-column min/max over the given rows (all rows when `rows` is empty).
Scaler fit_scaler(const FeatureMatrix& m);
Scaler fit_scaler(const FeatureMatrix& m, std::span<const size_t> rows);

/// x' = (x - min) / (max - min), clamped to [0,1]; constant columns map to 0.
FeatureMatrix apply_scaler(const Scaler& s, const FeatureMatrix& m);

FeatureMatrix subset_rows(const FeatureMatrix& m, std::span<const size_t> rows);
FeatureMatrix select_columns(const FeatureMatrix& m, const std::vector<std::string>& names);
FeatureMatrix select_columns(const FeatureMatrix& m, const std::vector<size_t>& cols);

void write_feature_matrix_csv(const FeatureMatrix& m, const std::string& path);

}  // namespace bball
