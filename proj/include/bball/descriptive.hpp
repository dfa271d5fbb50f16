#pragma once

#include <span>
#include <vector>

#include "bball/domain.hpp"

namespace bball {

struct QuartileSummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  size_t n = 0;
};

struct SeasonSummary {
  int season = 0;
  size_t home_wins = 0;
  size_t away_wins = 0;
  double mean_home_score = 0;
  double mean_away_score = 0;
  double mean_home_win_score = 0;  // home team's score, home wins only
  double mean_away_win_score = 0;  // away team's score, away wins only
  // Alternative pairing surfaced alongside the literal one: the home and away
  // scores conditioned on away wins. Reports carry both so the reader can see
  // which convention a given published table used.
  double mean_home_score_away_wins = 0;
  double mean_away_score_away_wins = 0;
};

enum class Side { Home, Away };
enum class OutcomeFilter { All, Wins, Losses };
enum class Scope { All, Home, Away };

SeasonSummary season_summary(const SeasonDataset& d);

QuartileSummary score_quartiles(std::span<const GameRecord> games, Side side,
                                OutcomeFilter filter);
inline QuartileSummary score_quartiles(const SeasonDataset& d, Side side, OutcomeFilter f) {
  return score_quartiles(std::span<const GameRecord>(d.games), side, f);
}

/// Quartiles of |home_score - away_score| over games won by the given side.
QuartileSummary diff_quartiles(std::span<const GameRecord> games, Side winner);
inline QuartileSummary diff_quartiles(const SeasonDataset& d, Side winner) {
  return diff_quartiles(std::span<const GameRecord>(d.games), winner);
}

struct WinProbPoint {
  int threshold = 0;   // points
  double p = 0;        // win probability when scoring >= threshold
  size_t n = 0;        // supporting team-game observations
};

/// One observation per team-game (two per game for Scope::All). Thresholds
/// run over every integer in [min score, max score] with nonzero support.
std::vector<WinProbPoint> win_probability_curve(std::span<const GameRecord> games, Scope scope);
inline std::vector<WinProbPoint> win_probability_curve(const SeasonDataset& d, Scope scope) {
  return win_probability_curve(std::span<const GameRecord>(d.games), scope);
}

std::vector<GameRecord> pool_games(const std::vector<SeasonDataset>& datasets);

}  // namespace bball
