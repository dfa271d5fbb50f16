#pragma once

#include <set>
#include <span>
#include <vector>

#include "bball/backtest.hpp"
#include "bball/ingest.hpp"

namespace bball {

/// Most frequent label; exact ties go to the home side like every other
/// tie in the pipeline.
Label majority_vote(std::span<const Label> votes);

/// Scores the crowd's per-game majority against the results. Round 1 and the
/// rounds listed in excluded_rounds are skipped; games without any votes are
/// counted in skipped_no_votes rather than failing.
BacktestReport crowd_backtest(const std::vector<CrowdVote>& votes,
                              const std::vector<SeasonDataset>& datasets, int test_season,
                              const std::set<int>& excluded_rounds = {});

}  // namespace bball
