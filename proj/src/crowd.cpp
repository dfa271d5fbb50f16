#include "bball/crowd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace bball {

Label majority_vote(std::span<const Label> votes) {
  if (votes.empty()) throw Error("majority vote over zero votes");
  size_t home = 0;
  for (Label v : votes) home += v == Label::HomeWin;
  size_t away = votes.size() - home;
  return home >= away ? Label::HomeWin : Label::AwayWin;
}

BacktestReport crowd_backtest(const std::vector<CrowdVote>& votes,
                              const std::vector<SeasonDataset>& datasets, int test_season,
                              const std::set<int>& excluded_rounds) {
  const SeasonDataset& season = find_season(datasets, test_season);

  std::map<GameId, Label> actual;
  for (const auto& g : season.games) actual[id_of(g)] = derive_label(g);

  std::map<GameId, std::vector<Label>> ballots;
  for (const auto& v : votes) {
    if (v.game.season != test_season) continue;
    if (!actual.count(v.game))
      throw Error("crowd votes reference a game absent from the results: " + v.game.home_team +
                  " vs " + v.game.away_team + ", season " + std::to_string(v.game.season) +
                  " round " + std::to_string(v.game.round));
    ballots[v.game].push_back(v.prediction);
  }
  if (ballots.empty()) throw Error("no crowd votes cover the test season");

  BacktestReport report;
  std::vector<Label> truths, picks;
  for (int round = 2; round <= season.max_round(); ++round) {
    if (excluded_rounds.count(round)) continue;
    RoundResult rr;
    rr.round = round;
    for (const auto& g : season.games) {
      if (g.round != round) continue;
      auto it = ballots.find(id_of(g));
      if (it == ballots.end()) {
        ++report.skipped_no_votes;
        continue;
      }
      Label pick = majority_vote(it->second);
      size_t home_votes = 0;
      for (Label v : it->second) home_votes += v == Label::HomeWin;
      Label truth = actual.at(id_of(g));
      ++rr.n_games;
      rr.n_correct += pick == truth;
      truths.push_back(truth);
      picks.push_back(pick);
      rr.predictions.push_back(Prediction{
          id_of(g), pick,
          static_cast<double>(home_votes) / static_cast<double>(it->second.size())});
    }
    if (rr.n_games > 0) report.per_round.push_back(std::move(rr));
  }
  if (truths.empty()) throw Error("crowd votes cover no scored rounds");

  report.totals.accuracy = accuracy(truths, picks);
  try {
    report.totals.weighted_accuracy = weighted_accuracy(truths, picks);
  } catch (const Error& e) {
    report.totals.weighted_accuracy = std::numeric_limits<double>::quiet_NaN();
    report.warnings.push_back(e.what());
  }
  report.trend_slope = report.per_round.size() >= 2 ? accuracy_trend(report) : 0.0;
  return report;
}

}  // namespace bball
