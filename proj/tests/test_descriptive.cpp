#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bball/descriptive.hpp"
#include "bball/stats.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace bball;

namespace {

GameRecord game(int round, const std::string& h, const std::string& a, int hs, int as) {
  return GameRecord{2019, round, Date{2019, 1, std::min(round, 28)}, h, a, hs, as};
}

SeasonDataset tiny_season(std::vector<GameRecord> games) {
  SeasonDataset d;
  d.season = 2019;
  for (auto& g : games) {
    d.teams.insert(g.home_team);
    d.teams.insert(g.away_team);
    d.games.push_back(std::move(g));
  }
  return d;
}

}  // namespace

TEST_CASE("quantile uses linear interpolation between order statistics") {
  // hand evaluation: positions (n-1)q over {1,2,3,4}
  CHECK(quantile({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({1, 2, 3, 4}, 0.75) == doctest::Approx(3.25));
  CHECK(quantile({70, 80, 90}, 0.5) == doctest::Approx(80));
}

TEST_CASE("season_summary on a single game") {
  SeasonDataset d = tiny_season({game(1, "A", "B", 80, 70)});
  SeasonSummary s = season_summary(d);
  CHECK(s.home_wins == 1);
  CHECK(s.away_wins == 0);
  CHECK(s.mean_home_score == doctest::Approx(80));
  CHECK(s.mean_away_score == doctest::Approx(70));
  CHECK(s.mean_home_win_score == doctest::Approx(80));
}

TEST_CASE("season_summary counts match a direct recount on synthetic data") {
  synth::SeasonSpec spec;
  spec.n_teams = 10;
  SeasonDataset d = synth::make_season(spec);
  SeasonSummary s = season_summary(d);

  size_t home = 0, away = 0;
  double home_total = 0;
  for (const auto& g : d.games) {
    (g.home_score > g.away_score ? home : away)++;
    home_total += g.home_score;
  }
  CHECK(s.home_wins == home);
  CHECK(s.away_wins == away);
  CHECK(s.home_wins + s.away_wins == d.games.size());
  CHECK(s.mean_home_score == doctest::Approx(home_total / d.games.size()));
}

TEST_CASE("score_quartiles selects side and outcome") {
  SeasonDataset d = tiny_season({
      game(1, "A", "B", 70, 60),
      game(2, "B", "A", 80, 90),
      game(3, "A", "B", 90, 100),
  });
  QuartileSummary all = score_quartiles(d, Side::Home, OutcomeFilter::All);
  CHECK(all.n == 3);
  CHECK(all.median == doctest::Approx(80));
  QuartileSummary wins = score_quartiles(d, Side::Home, OutcomeFilter::Wins);
  CHECK(wins.n == 1);  // only the 70-60 home win
  CHECK(wins.median == doctest::Approx(70));
  QuartileSummary away_wins = score_quartiles(d, Side::Away, OutcomeFilter::Wins);
  CHECK(away_wins.n == 2);  // away won 90 and 100
  CHECK(away_wins.median == doctest::Approx(95));
  CHECK_THROWS_AS(score_quartiles(tiny_season({game(1, "A", "B", 70, 60)}), Side::Away,
                                  OutcomeFilter::Wins),
                  Error);
}

TEST_CASE("diff_quartiles of one ten-point home win is all tens") {
  SeasonDataset d = tiny_season({game(1, "A", "B", 80, 70)});
  QuartileSummary q = diff_quartiles(d, Side::Home);
  CHECK(q.min == 10);
  CHECK(q.q1 == 10);
  CHECK(q.median == 10);
  CHECK(q.q3 == 10);
  CHECK(q.max == 10);
  CHECK(q.n == 1);
  CHECK_THROWS_AS(diff_quartiles(d, Side::Away), Error);
}

TEST_CASE("quartile summaries are always ordered") {
  synth::SeasonSpec spec;
  spec.n_teams = 8;
  for (uint64_t seed : {1u, 2u, 3u}) {
    spec.seed = seed;
    SeasonDataset d = synth::make_season(spec);
    for (Side side : {Side::Home, Side::Away}) {
      for (OutcomeFilter f : {OutcomeFilter::All, OutcomeFilter::Wins, OutcomeFilter::Losses}) {
        QuartileSummary q = score_quartiles(d, side, f);
        CHECK(q.min <= q.q1);
        CHECK(q.q1 <= q.median);
        CHECK(q.median <= q.q3);
        CHECK(q.q3 <= q.max);
        CHECK(q.n >= 1);
      }
      QuartileSummary q = diff_quartiles(d, side);
      CHECK(q.min <= q.q1);
      CHECK(q.q3 <= q.max);
    }
  }
}

TEST_CASE("win probability curve: single game, home scope") {
  SeasonDataset d = tiny_season({game(1, "A", "B", 80, 70)});
  auto curve = win_probability_curve(d, Scope::Home);
  // one observation at 80 points, won; every threshold has p = 1, n = 1
  REQUIRE(curve.size() == 1);
  CHECK(curve[0].threshold == 80);
  CHECK(curve[0].p == doctest::Approx(1.0));
  CHECK(curve[0].n == 1);

  auto all = win_probability_curve(d, Scope::All);
  for (const auto& pt : all) {
    if (pt.threshold <= 70) CHECK(pt.p == doctest::Approx(0.5));
    if (pt.threshold >= 75) CHECK(pt.p == doctest::Approx(1.0));
  }
}

TEST_CASE("win probability curve equals the brute-force recount everywhere") {
  synth::SeasonSpec spec;
  spec.n_teams = 12;
  SeasonDataset d = synth::make_season(spec);
  struct ScopeSpec {
    Scope scope;
    int home, away;
  };
  for (auto [scope, use_home, use_away] : {ScopeSpec{Scope::All, 1, 1},
                                           ScopeSpec{Scope::Home, 1, 0},
                                           ScopeSpec{Scope::Away, 0, 1}}) {
    auto curve = win_probability_curve(d, scope);
    REQUIRE_FALSE(curve.empty());
    for (const auto& pt : curve) {
      auto [p, n] = oracle::win_prob_recount(d.games, pt.threshold, use_home, use_away);
      CHECK(pt.n == n);
      CHECK(pt.p == doctest::Approx(p).epsilon(1e-12));
    }
  }
}

TEST_CASE("home curve dominates away curve on home-advantage data") {
  synth::SeasonSpec spec;
  spec.n_teams = 16;
  spec.home_advantage = 6.0;
  SeasonDataset d = synth::make_season(spec);
  auto home = win_probability_curve(d, Scope::Home);
  auto away = win_probability_curve(d, Scope::Away);
  std::map<int, double> away_p;
  for (const auto& pt : away) away_p[pt.threshold] = pt.p;
  size_t compared = 0, dominated = 0;
  for (const auto& pt : home) {
    auto it = away_p.find(pt.threshold);
    if (it == away_p.end()) continue;
    ++compared;
    if (pt.p >= it->second - 1e-12) ++dominated;
  }
  REQUIRE(compared > 20);
  // strong home advantage: the home curve should sit above at nearly every threshold
  CHECK(static_cast<double>(dominated) / compared > 0.9);
}
