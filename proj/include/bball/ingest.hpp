#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bball/domain.hpp"

namespace bball {

/// Findings from parsing or validating a dataset. Line numbers are 1-based;
/// 0 marks file- or dataset-level findings.
struct ValidationReport {
  std::vector<std::pair<int, std::string>> errors;
  std::vector<std::pair<int, std::string>> warnings;
  std::map<int, bool> is_complete_season;

  bool ok() const { return errors.empty(); }
  void error(int line, std::string msg) { errors.emplace_back(line, std::move(msg)); }
  void warn(int line, std::string msg) { warnings.emplace_back(line, std::move(msg)); }
  void merge(const ValidationReport& other);
};

struct ResultsFile {
  std::vector<SeasonDataset> datasets;  // sorted by season; empty if errors
  ValidationReport report;
};

// Canonical results schema:
//   season,round,date,home_team,away_team,home_score,away_score
// Dates are ISO-8601; every other module consumes domain types only.
ResultsFile read_results(const std::string& path);

/// Like read_results but throws on any content error.
std::vector<SeasonDataset> parse_results(const std::string& path);

void write_results(const std::vector<SeasonDataset>& datasets, const std::string& path);

// Final-four metadata schema: season,team — the four teams that reached the
// final four OF that season. Consumers attach row `s` to season s+1.
using F4Map = std::map<int, std::set<std::string>>;
F4Map read_f4(const std::string& path, ValidationReport& report,
              const std::map<int, std::set<std::string>>* season_teams = nullptr);

/// Sets each dataset's f4_prev from the metadata of the preceding season.
/// Missing metadata leaves the set empty and adds a warning.
void attach_f4(std::vector<SeasonDataset>& datasets, const F4Map& f4, ValidationReport& report);

struct CrowdVote {
  GameId game;
  std::string player_id;
  Label prediction = Label::HomeWin;
};

// Crowd schema: season,round,home_team,away_team,player_id,prediction
// Duplicate (game, player) rows keep the last value, with a warning.
std::vector<CrowdVote> read_crowd(const std::string& path, ValidationReport& report);

/// Dataset-level checks: team-per-round uniqueness, round contiguity,
/// completeness, team-set consistency. Findings go in the report; nothing throws.
ValidationReport validate(const std::vector<SeasonDataset>& datasets);

}  // namespace bball
