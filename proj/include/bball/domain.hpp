#pragma once

#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace bball {

/// Base error type for the whole library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outcome of a game. Basketball cannot tie: overtime resolves every game.
enum class Label : int { HomeWin = 1, AwayWin = 2 };

inline int to_int(Label l) { return static_cast<int>(l); }
Label label_from_int(int v);  // throws on values outside {1,2}

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
  auto operator<=>(const Date&) const = default;
};

Date parse_date(const std::string& iso);  // strict YYYY-MM-DD
std::string to_string(const Date& d);

/// One played regular-season game.
struct GameRecord {
  int season = 0;  // end year of the season, e.g. 2019 for 2018-19
  int round = 0;
  Date date;
  std::string home_team;
  std::string away_team;
  int home_score = 0;
  int away_score = 0;

  bool operator==(const GameRecord&) const = default;
};

/// Identity of a game: dates are informational, everything is keyed by round.
struct GameId {
  int season = 0;
  int round = 0;
  std::string home_team;
  std::string away_team;
  auto operator<=>(const GameId&) const = default;
};

inline GameId id_of(const GameRecord& g) {
  return GameId{g.season, g.round, g.home_team, g.away_team};
}

/// All games of one season plus season-level metadata.
struct SeasonDataset {
  int season = 0;
  std::vector<GameRecord> games;  // sorted by (round, date, home, away)
  std::set<std::string> teams;
  std::set<std::string> f4_prev;  // final-four teams of the previous season

  int max_round() const;
  /// 2*(n_teams - 1) rounds in a complete regular season.
  int expected_rounds() const {
    return teams.size() < 2 ? 0 : 2 * (static_cast<int>(teams.size()) - 1);
  }
};

Label derive_label(const GameRecord& g);  // throws on tied scores

struct Prediction {
  GameId game;
  Label predicted = Label::HomeWin;
  double probability_home = 0.5;
};

/// Probability ties at exactly 0.5 go to the home side, consistent with the
/// home-advantage majority rule used throughout.
inline Label label_from_probability(double p_home) {
  return p_home >= 0.5 ? Label::HomeWin : Label::AwayWin;
}

const SeasonDataset& find_season(const std::vector<SeasonDataset>& datasets, int season);
bool has_season(const std::vector<SeasonDataset>& datasets, int season);

}  // namespace bball
