#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bball/backtest.hpp"
#include "synth.hpp"

using namespace bball;

namespace {

ModelRecipe nb_recipe() {
  ModelRecipe r;
  r.name = "nb";
  r.spec = ModelSpec{Algorithm::NB, {}, 7};
  return r;
}

SeasonDataset all_home_wins_season(int season) {
  synth::SeasonSpec spec;
  spec.season = season;
  spec.n_teams = 4;
  SeasonDataset d = synth::make_season(spec);
  for (auto& g : d.games) {
    if (g.home_score <= g.away_score) {
      g.home_score = g.away_score + 5;
    }
  }
  return d;
}

}  // namespace

TEST_CASE("walk-forward trains on prior seasons plus earlier rounds only") {
  synth::League lg = synth::make_league(2017, 3, 16, 101);
  BacktestReport report = walk_forward(lg.datasets, 2019, nb_recipe(), CvOptions{});

  // 29 scored rounds, 8 games each
  REQUIRE(report.per_round.size() == 29);
  CHECK(report.total_games() == 232);
  for (const auto& rr : report.per_round) CHECK(rr.n_games == 8);

  // round 8: two prior seasons of 232 scored rows plus rounds 2..7 of the
  // test season, 8 games each
  const RoundResult* round8 = nullptr;
  for (const auto& rr : report.per_round)
    if (rr.round == 8) round8 = &rr;
  REQUIRE(round8 != nullptr);
  CHECK(round8->n_train == 2 * 232 + 6 * 8);

  // totals agree with a recount of the per-round entries
  size_t games = 0, correct = 0;
  for (const auto& rr : report.per_round) {
    games += rr.n_games;
    correct += rr.n_correct;
    CHECK(rr.n_correct <= rr.n_games);
  }
  CHECK(report.totals.accuracy ==
        doctest::Approx(static_cast<double>(correct) / games).epsilon(1e-12));
}

TEST_CASE("walk-forward predictions never depend on the future") {
  synth::League lg = synth::make_league(2018, 2, 8, 103);
  BacktestReport full = walk_forward(lg.datasets, 2019, nb_recipe(), CvOptions{});

  for (int cut = 3; cut <= lg.datasets[1].max_round(); ++cut) {
    synth::League trimmed = lg;
    std::erase_if(trimmed.datasets[1].games,
                  [&](const GameRecord& g) { return g.round >= cut; });
    BacktestReport partial = walk_forward(trimmed.datasets, 2019, nb_recipe(), CvOptions{});
    for (const auto& rr : partial.per_round) {
      REQUIRE(rr.round < cut);
      const RoundResult* match = nullptr;
      for (const auto& fr : full.per_round)
        if (fr.round == rr.round) match = &fr;
      REQUIRE(match != nullptr);
      REQUIRE(rr.predictions.size() == match->predictions.size());
      for (size_t i = 0; i < rr.predictions.size(); ++i) {
        CHECK(rr.predictions[i].game == match->predictions[i].game);
        CHECK(rr.predictions[i].predicted == match->predictions[i].predicted);
        CHECK(rr.predictions[i].probability_home == match->predictions[i].probability_home);
      }
    }
  }
}

TEST_CASE("walk-forward without a prior season fails") {
  synth::League lg = synth::make_league(2019, 1, 8, 105);
  CHECK_THROWS_AS(walk_forward(lg.datasets, 2019, nb_recipe(), CvOptions{}), Error);
}

TEST_CASE("walk-forward at team level combines the two win probabilities") {
  synth::League lg = synth::make_league(2018, 2, 8, 107);
  ModelRecipe recipe = nb_recipe();
  recipe.level = "team";
  BacktestReport report = walk_forward(lg.datasets, 2019, recipe, CvOptions{});
  CHECK(report.per_round.size() == 13);   // 14 rounds, round 1 skipped
  CHECK(report.total_games() == 13 * 4);  // one prediction per game, not per row
  CHECK(report.totals.accuracy > 0.5);    // strength-driven synthetic data is learnable
}

TEST_CASE("excluded rounds are trained on but not scored") {
  synth::League lg = synth::make_league(2018, 2, 8, 109);
  BacktestReport all = walk_forward(lg.datasets, 2019, nb_recipe(), CvOptions{});
  BacktestReport skipped = walk_forward(lg.datasets, 2019, nb_recipe(), CvOptions{}, {5, 9});
  CHECK(skipped.per_round.size() == all.per_round.size() - 2);
  for (const auto& rr : skipped.per_round) {
    CHECK(rr.round != 5);
    CHECK(rr.round != 9);
    // the same round's predictions agree with the unrestricted run
    for (const auto& fr : all.per_round)
      if (fr.round == rr.round)
        for (size_t i = 0; i < rr.predictions.size(); ++i)
          CHECK(rr.predictions[i].predicted == fr.predictions[i].predicted);
  }
}

TEST_CASE("per-round regridding runs and stays deterministic") {
  synth::League lg = synth::make_league(2018, 2, 6, 111);
  ModelRecipe recipe;
  recipe.name = "knn";
  recipe.spec = ModelSpec{Algorithm::KNN, {}, 3};
  recipe.regrid = Grid{{"k", {1, 3, 5}}};
  CvOptions opts;
  opts.k = 3;
  opts.seed = 5;
  BacktestReport a = walk_forward(lg.datasets, 2019, recipe, opts);
  BacktestReport b = walk_forward(lg.datasets, 2019, recipe, opts);
  REQUIRE(a.per_round.size() == b.per_round.size());
  for (size_t r = 0; r < a.per_round.size(); ++r)
    for (size_t i = 0; i < a.per_round[r].predictions.size(); ++i)
      CHECK(a.per_round[r].predictions[i].predicted == b.per_round[r].predictions[i].predicted);
}

TEST_CASE("benchmark 1 always picks the home side") {
  synth::League lg = synth::make_league(2019, 1, 8, 113);
  BacktestReport report = benchmark_home(lg.datasets, 2019);
  size_t home_wins = 0, games = 0;
  for (const auto& g : lg.datasets[0].games) {
    if (g.round < 2) continue;
    ++games;
    home_wins += g.home_score > g.away_score;
  }
  CHECK(report.total_games() == games);
  CHECK(report.totals.accuracy == doctest::Approx(static_cast<double>(home_wins) / games));
  CHECK(report.totals.weighted_accuracy == 0.5);  // exactly, for any two-class season
  for (const auto& rr : report.per_round)
    for (const auto& p : rr.predictions) CHECK(p.predicted == Label::HomeWin);
}

TEST_CASE("benchmark 1 on an all-home-wins season leaves weighted accuracy undefined") {
  std::vector<SeasonDataset> datasets = {all_home_wins_season(2019)};
  BacktestReport report = benchmark_home(datasets, 2019);
  CHECK(report.totals.accuracy == doctest::Approx(1.0));
  CHECK(std::isnan(report.totals.weighted_accuracy));
  CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("benchmark 2 follows the final-four rule exactly") {
  synth::League lg = synth::make_league(2018, 2, 8, 115);
  const SeasonDataset& season = lg.datasets[1];
  BacktestReport report = benchmark_f4(lg.datasets, 2019);
  for (const auto& rr : report.per_round) {
    for (const auto& p : rr.predictions) {
      bool home_f4 = season.f4_prev.count(p.game.home_team) > 0;
      bool away_f4 = season.f4_prev.count(p.game.away_team) > 0;
      Label expect = home_f4 == away_f4 ? Label::HomeWin
                                        : (home_f4 ? Label::HomeWin : Label::AwayWin);
      CHECK(p.predicted == expect);
    }
  }

  std::vector<SeasonDataset> no_meta = lg.datasets;
  no_meta[1].f4_prev.clear();
  CHECK_THROWS_AS(benchmark_f4(no_meta, 2019), Error);
}

TEST_CASE("benchmark 3 picks the better-placed team") {
  synth::League lg = synth::make_league(2019, 1, 6, 117);
  const SeasonDataset& d = lg.datasets[0];
  BacktestReport report = benchmark_standings(lg.datasets, 2019);
  for (const auto& rr : report.per_round) {
    auto standings = compute_standings(d, rr.round - 1);
    std::map<std::string, int> pos;
    for (const auto& row : standings) pos[row.team] = row.position;
    for (const auto& p : rr.predictions) {
      Label expect =
          pos.at(p.game.home_team) < pos.at(p.game.away_team) ? Label::HomeWin : Label::AwayWin;
      CHECK(p.predicted == expect);
    }
  }

  // round 2: a 1-0 home team hosts a 0-1 away team
  for (const auto& p : report.per_round[0].predictions) {
    auto standings = compute_standings(d, 1);
    std::map<std::string, int> pos;
    for (const auto& row : standings) pos[row.team] = row.position;
    if (pos.at(p.game.home_team) < pos.at(p.game.away_team))
      CHECK(p.predicted == Label::HomeWin);
  }
}

TEST_CASE("accuracy trend fits the per-round least squares line") {
  BacktestReport flat;
  for (int r = 2; r <= 6; ++r) flat.per_round.push_back(RoundResult{r, 4, 2, 0, {}});
  CHECK(accuracy_trend(flat) == doctest::Approx(0.0));

  BacktestReport rising;
  rising.per_round.push_back(RoundResult{1, 4, 2, 0, {}});  // 0.5
  rising.per_round.push_back(RoundResult{2, 4, 3, 0, {}});  // 0.75
  rising.per_round.push_back(RoundResult{3, 4, 4, 0, {}});  // 1.0
  CHECK(accuracy_trend(rising) == doctest::Approx(0.25));

  BacktestReport single;
  single.per_round.push_back(RoundResult{2, 4, 2, 0, {}});
  CHECK_THROWS_AS(accuracy_trend(single), Error);
}
