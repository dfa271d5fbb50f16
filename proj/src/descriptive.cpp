#include "bball/descriptive.hpp"

#include <algorithm>
#include <cmath>

#include "bball/stats.hpp"

namespace bball {

namespace {

QuartileSummary summarize(std::vector<double> values) {
  if (values.empty()) throw Error("no games match the requested selection");
  std::sort(values.begin(), values.end());
  QuartileSummary s;
  s.n = values.size();
  s.min = values.front();
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  s.max = values.back();
  return s;
}

double safe_mean(const std::vector<double>& v) { return v.empty() ? 0.0 : mean(v); }

}  // namespace

SeasonSummary season_summary(const SeasonDataset& d) {
  if (d.games.empty()) throw Error("season summary of an empty dataset");
  SeasonSummary s;
  s.season = d.season;
  std::vector<double> home, away, home_in_home_wins, away_in_away_wins;
  std::vector<double> home_in_away_wins, away_in_away_wins_alt;
  for (const auto& g : d.games) {
    Label l = derive_label(g);
    home.push_back(g.home_score);
    away.push_back(g.away_score);
    if (l == Label::HomeWin) {
      ++s.home_wins;
      home_in_home_wins.push_back(g.home_score);
    } else {
      ++s.away_wins;
      away_in_away_wins.push_back(g.away_score);
      home_in_away_wins.push_back(g.home_score);
      away_in_away_wins_alt.push_back(g.away_score);
    }
  }
  s.mean_home_score = mean(home);
  s.mean_away_score = mean(away);
  s.mean_home_win_score = safe_mean(home_in_home_wins);
  s.mean_away_win_score = safe_mean(away_in_away_wins);
  s.mean_home_score_away_wins = safe_mean(home_in_away_wins);
  s.mean_away_score_away_wins = safe_mean(away_in_away_wins_alt);
  return s;
}

QuartileSummary score_quartiles(std::span<const GameRecord> games, Side side,
                                OutcomeFilter filter) {
  std::vector<double> values;
  for (const auto& g : games) {
    Label l = derive_label(g);
    bool side_won = (side == Side::Home) == (l == Label::HomeWin);
    if (filter == OutcomeFilter::Wins && !side_won) continue;
    if (filter == OutcomeFilter::Losses && side_won) continue;
    values.push_back(side == Side::Home ? g.home_score : g.away_score);
  }
  return summarize(std::move(values));
}

QuartileSummary diff_quartiles(std::span<const GameRecord> games, Side winner) {
  std::vector<double> values;
  for (const auto& g : games) {
    Label l = derive_label(g);
    bool match = (winner == Side::Home) == (l == Label::HomeWin);
    if (match) values.push_back(std::abs(g.home_score - g.away_score));
  }
  return summarize(std::move(values));
}

std::vector<WinProbPoint> win_probability_curve(std::span<const GameRecord> games, Scope scope) {
  if (games.empty()) throw Error("win probability curve of an empty dataset");
  struct Obs {
    int score;
    bool won;
  };
  std::vector<Obs> obs;
  for (const auto& g : games) {
    Label l = derive_label(g);
    if (scope != Scope::Away) obs.push_back({g.home_score, l == Label::HomeWin});
    if (scope != Scope::Home) obs.push_back({g.away_score, l == Label::AwayWin});
  }
  int lo = obs[0].score, hi = obs[0].score;
  for (const auto& o : obs) {
    lo = std::min(lo, o.score);
    hi = std::max(hi, o.score);
  }
  std::vector<WinProbPoint> curve;
  for (int threshold = lo; threshold <= hi; ++threshold) {
    size_t n = 0, wins = 0;
    for (const auto& o : obs) {
      if (o.score >= threshold) {
        ++n;
        if (o.won) ++wins;
      }
    }
    if (n == 0) continue;
    curve.push_back({threshold, static_cast<double>(wins) / static_cast<double>(n), n});
  }
  return curve;
}

std::vector<GameRecord> pool_games(const std::vector<SeasonDataset>& datasets) {
  std::vector<GameRecord> out;
  for (const auto& d : datasets) out.insert(out.end(), d.games.begin(), d.games.end());
  return out;
}

}  // namespace bball
