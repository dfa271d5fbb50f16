#pragma once

// Brute-force reference computations, written independently of the library's
// implementations so the two can be checked against each other.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "bball/domain.hpp"

namespace oracle {

struct TeamTally {
  std::string team;
  int wins = 0, losses = 0, scored = 0, conceded = 0;
};

/// Standings by direct recount: walk every game up to the round, tally, then
/// order by the documented tie-break chain.
inline std::vector<TeamTally> standings_recount(const bball::SeasonDataset& d,
                                                int through_round) {
  std::map<std::string, TeamTally> tally;
  for (const auto& t : d.teams) tally[t].team = t;
  for (const auto& g : d.games) {
    if (g.round > through_round) continue;
    TeamTally& h = tally[g.home_team];
    TeamTally& a = tally[g.away_team];
    h.scored += g.home_score;
    h.conceded += g.away_score;
    a.scored += g.away_score;
    a.conceded += g.home_score;
    if (g.home_score > g.away_score) {
      h.wins++;
      a.losses++;
    } else {
      a.wins++;
      h.losses++;
    }
  }
  std::vector<TeamTally> rows;
  for (auto& [t, row] : tally) rows.push_back(row);
  std::sort(rows.begin(), rows.end(), [](const TeamTally& x, const TeamTally& y) {
    int dx = x.scored - x.conceded, dy = y.scored - y.conceded;
    if (x.wins != y.wins) return x.wins > y.wins;
    if (dx != dy) return dx > dy;
    if (x.scored != y.scored) return x.scored > y.scored;
    return x.team < y.team;
  });
  return rows;
}

struct TeamStateRecount {
  int position = 0;
  double avg_offense = 0, avg_defense = 0, avg_diff = 0, form = 0;
  int f4 = 0;
};

inline TeamStateRecount team_state_recount(const bball::SeasonDataset& d,
                                           const std::string& team, int before_round) {
  TeamStateRecount st;
  st.f4 = d.f4_prev.count(team) ? 1 : 0;
  auto rows = standings_recount(d, before_round - 1);
  for (size_t i = 0; i < rows.size(); ++i)
    if (rows[i].team == team) st.position = static_cast<int>(i) + 1;

  std::vector<std::pair<int, bool>> games;  // (round, won) in round order
  double scored = 0, conceded = 0;
  int played = 0;
  for (const auto& g : d.games) {
    if (g.round >= before_round) continue;
    if (g.home_team == team) {
      scored += g.home_score;
      conceded += g.away_score;
      games.emplace_back(g.round, g.home_score > g.away_score);
      ++played;
    } else if (g.away_team == team) {
      scored += g.away_score;
      conceded += g.home_score;
      games.emplace_back(g.round, g.away_score > g.home_score);
      ++played;
    }
  }
  if (played == 0) return st;
  st.avg_offense = scored / played;
  st.avg_defense = conceded / played;
  st.avg_diff = st.avg_offense - st.avg_defense;
  std::sort(games.begin(), games.end());
  int window = std::min(5, played);
  int wins = 0;
  for (int i = 0; i < window; ++i)
    if (games[games.size() - 1 - i].second) ++wins;
  st.form = static_cast<double>(wins) / window;
  return st;
}

/// Win probability at one threshold by recounting every team-game observation.
inline std::pair<double, size_t> win_prob_recount(const std::vector<bball::GameRecord>& games,
                                                  int threshold, int scope_home,
                                                  int scope_away) {
  size_t n = 0, wins = 0;
  for (const auto& g : games) {
    if (scope_home && g.home_score >= threshold) {
      ++n;
      wins += g.home_score > g.away_score;
    }
    if (scope_away && g.away_score >= threshold) {
      ++n;
      wins += g.away_score > g.home_score;
    }
  }
  if (n == 0) return {-1.0, 0};
  return {static_cast<double>(wins) / static_cast<double>(n), n};
}

}  // namespace oracle
