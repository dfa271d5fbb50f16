#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bball/crowd.hpp"
#include "bball/rng.hpp"
#include "synth.hpp"

using namespace bball;

namespace {

std::vector<Label> votes_of(std::initializer_list<int> v) {
  std::vector<Label> out;
  for (int x : v) out.push_back(label_from_int(x));
  return out;
}

std::vector<CrowdVote> perfect_crowd(const SeasonDataset& d, int players) {
  std::vector<CrowdVote> votes;
  for (const auto& g : d.games)
    for (int p = 0; p < players; ++p)
      votes.push_back(CrowdVote{id_of(g), "player" + std::to_string(p), derive_label(g)});
  return votes;
}

}  // namespace

TEST_CASE("majority vote picks the most frequent label, ties to home") {
  CHECK(majority_vote(votes_of({1, 1, 2})) == Label::HomeWin);
  CHECK(majority_vote(votes_of({1, 1, 2, 2, 2})) == Label::AwayWin);
  CHECK(majority_vote(votes_of({1, 2})) == Label::HomeWin);
  std::vector<Label> empty;
  CHECK_THROWS_AS(majority_vote(empty), Error);
}

TEST_CASE("majority vote is order-invariant and cancels opposite pairs") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Label> votes;
    size_t n = 1 + rng.next_below(15);
    for (size_t i = 0; i < n; ++i)
      votes.push_back(rng.next_below(2) ? Label::HomeWin : Label::AwayWin);
    Label base = majority_vote(votes);

    std::vector<Label> shuffled = votes;
    rng.shuffle(shuffled);
    CHECK(majority_vote(shuffled) == base);

    std::vector<Label> padded = votes;
    padded.push_back(Label::HomeWin);
    padded.push_back(Label::AwayWin);
    CHECK(majority_vote(padded) == base);
  }
}

TEST_CASE("a crowd that votes the actual results scores a perfect season") {
  synth::League lg = synth::make_league(2019, 1, 8, 77);
  auto votes = perfect_crowd(lg.datasets[0], 5);
  BacktestReport report = crowd_backtest(votes, lg.datasets, 2019);
  CHECK(report.totals.accuracy == doctest::Approx(1.0));
  CHECK(report.total_games() ==
        lg.datasets[0].games.size() - lg.datasets[0].games.size() / lg.datasets[0].max_round());
  CHECK(report.skipped_no_votes == 0);

  // totals equal a recount
  size_t correct = 0, games = 0;
  for (const auto& rr : report.per_round) {
    correct += rr.n_correct;
    games += rr.n_games;
  }
  CHECK(report.totals.accuracy == doctest::Approx(static_cast<double>(correct) / games));
}

TEST_CASE("games without votes are counted, not fatal") {
  synth::League lg = synth::make_league(2019, 1, 8, 79);
  const SeasonDataset& d = lg.datasets[0];
  auto votes = perfect_crowd(d, 3);
  const GameId skip = id_of(d.games[10]);
  std::erase_if(votes, [&](const CrowdVote& v) { return v.game == skip; });
  BacktestReport report = crowd_backtest(votes, lg.datasets, 2019);
  if (skip.round >= 2) {
    CHECK(report.skipped_no_votes == 1);
  }
  CHECK(report.totals.accuracy == doctest::Approx(1.0));
}

TEST_CASE("votes for unknown games fail loudly") {
  synth::League lg = synth::make_league(2019, 1, 8, 81);
  auto votes = perfect_crowd(lg.datasets[0], 2);
  CrowdVote ghost;
  ghost.game = GameId{2019, 3, "PhantomA", "PhantomB"};
  ghost.player_id = "playerX";
  ghost.prediction = Label::HomeWin;
  votes.push_back(ghost);
  CHECK_THROWS_AS(crowd_backtest(votes, lg.datasets, 2019), Error);
}

TEST_CASE("excluded rounds and round 1 never get scored") {
  synth::League lg = synth::make_league(2019, 1, 8, 83);
  auto votes = perfect_crowd(lg.datasets[0], 3);
  BacktestReport report = crowd_backtest(votes, lg.datasets, 2019, {5});
  for (const auto& rr : report.per_round) {
    CHECK(rr.round != 1);
    CHECK(rr.round != 5);
  }
}

TEST_CASE("a noisy crowd lands between chance and perfection") {
  synth::League lg = synth::make_league(2019, 1, 8, 85);
  const SeasonDataset& d = lg.datasets[0];
  Rng rng(5);
  std::vector<CrowdVote> votes;
  for (const auto& g : d.games) {
    Label truth = derive_label(g);
    for (int p = 0; p < 9; ++p) {
      Label vote = rng.next_unit() < 0.7 ? truth
                                         : (truth == Label::HomeWin ? Label::AwayWin
                                                                    : Label::HomeWin);
      votes.push_back(CrowdVote{id_of(g), "player" + std::to_string(p), vote});
    }
  }
  BacktestReport report = crowd_backtest(votes, lg.datasets, 2019);
  CHECK(report.totals.accuracy > 0.7);  // majority amplifies individual skill
  CHECK(report.totals.accuracy <= 1.0);
}
