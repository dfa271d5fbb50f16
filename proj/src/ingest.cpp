#include "bball/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "bball/csv.hpp"

namespace bball {

namespace {

const std::vector<std::string> kResultsHeader = {
    "season", "round", "date", "home_team", "away_team", "home_score", "away_score"};
const std::vector<std::string> kF4Header = {"season", "team"};
const std::vector<std::string> kCrowdHeader = {
    "season", "round", "home_team", "away_team", "player_id", "prediction"};

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool game_order(const GameRecord& a, const GameRecord& b) {
  return std::tie(a.season, a.round, a.date, a.home_team, a.away_team) <
         std::tie(b.season, b.round, b.date, b.home_team, b.away_team);
}

}  // namespace

void ValidationReport::merge(const ValidationReport& other) {
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  for (const auto& [season, complete] : other.is_complete_season)
    is_complete_season[season] = complete;
}

ResultsFile read_results(const std::string& path) {
  ResultsFile out;
  CsvReader reader(path);
  reader.require_header(kResultsHeader, "results file '" + path + "'");

  std::vector<GameRecord> games;
  std::map<GameId, int> seen;  // identity -> first line
  for (const auto& row : reader.rows()) {
    if (row.fields.size() != kResultsHeader.size()) {
      out.report.error(row.line, "expected 7 fields, got " + std::to_string(row.fields.size()));
      continue;
    }
    GameRecord g;
    if (!parse_int(row.fields[0], g.season)) {
      out.report.error(row.line, "bad season '" + row.fields[0] + "'");
      continue;
    }
    if (!parse_int(row.fields[1], g.round) || g.round < 1) {
      out.report.error(row.line, "bad round '" + row.fields[1] + "' (integer >= 1 required)");
      continue;
    }
    try {
      g.date = parse_date(row.fields[2]);
    } catch (const Error& e) {
      out.report.error(row.line, e.what());
      continue;
    }
    g.home_team = row.fields[3];
    g.away_team = row.fields[4];
    if (g.home_team.empty() || g.away_team.empty()) {
      out.report.error(row.line, "empty team name");
      continue;
    }
    if (g.home_team == g.away_team) {
      out.report.error(row.line, "team '" + g.home_team + "' plays itself");
      continue;
    }
    if (!parse_int(row.fields[5], g.home_score) || g.home_score < 0 ||
        !parse_int(row.fields[6], g.away_score) || g.away_score < 0) {
      out.report.error(row.line, "bad score pair '" + row.fields[5] + "','" + row.fields[6] + "'");
      continue;
    }
    if (g.home_score == g.away_score) {
      out.report.error(row.line, "tied score " + row.fields[5] + "-" + row.fields[6] +
                                     ": basketball games cannot tie");
      continue;
    }
    auto [it, inserted] = seen.emplace(id_of(g), row.line);
    if (!inserted) {
      out.report.error(row.line, "duplicate game " + g.home_team + " vs " + g.away_team +
                                     " (season " + row.fields[0] + ", round " + row.fields[1] +
                                     "), first seen at line " + std::to_string(it->second));
      continue;
    }
    games.push_back(std::move(g));
  }

  if (games.empty() && out.report.ok()) out.report.warn(0, "no games in '" + path + "'");
  if (!out.report.ok()) return out;

  std::sort(games.begin(), games.end(), game_order);
  std::map<int, SeasonDataset> by_season;
  for (auto& g : games) {
    SeasonDataset& d = by_season[g.season];
    d.season = g.season;
    d.teams.insert(g.home_team);
    d.teams.insert(g.away_team);
    d.games.push_back(std::move(g));
  }
  for (auto& [season, d] : by_season) out.datasets.push_back(std::move(d));
  return out;
}

std::vector<SeasonDataset> parse_results(const std::string& path) {
  ResultsFile f = read_results(path);
  if (!f.report.ok()) {
    const auto& [line, msg] = f.report.errors.front();
    throw Error(path + ":" + std::to_string(line) + ": " + msg +
                (f.report.errors.size() > 1
                     ? " (+" + std::to_string(f.report.errors.size() - 1) + " more errors)"
                     : ""));
  }
  return f.datasets;
}

void write_results(const std::vector<SeasonDataset>& datasets, const std::string& path) {
  CsvWriter w(path);
  w.write_row(kResultsHeader);
  for (const auto& d : datasets) {
    for (const auto& g : d.games) {
      w.write_row({std::to_string(g.season), std::to_string(g.round), to_string(g.date),
                   g.home_team, g.away_team, std::to_string(g.home_score),
                   std::to_string(g.away_score)});
    }
  }
}

F4Map read_f4(const std::string& path, ValidationReport& report,
              const std::map<int, std::set<std::string>>* season_teams) {
  CsvReader reader(path);
  reader.require_header(kF4Header, "final-four file '" + path + "'");
  F4Map out;
  for (const auto& row : reader.rows()) {
    if (row.fields.size() != kF4Header.size()) {
      report.error(row.line, "expected 2 fields, got " + std::to_string(row.fields.size()));
      continue;
    }
    int season = 0;
    if (!parse_int(row.fields[0], season)) {
      report.error(row.line, "bad season '" + row.fields[0] + "'");
      continue;
    }
    if (row.fields[1].empty()) {
      report.error(row.line, "empty team name");
      continue;
    }
    if (!out[season].insert(row.fields[1]).second)
      report.warn(row.line, "team '" + row.fields[1] + "' listed twice for season " +
                                row.fields[0]);
  }
  for (const auto& [season, teams] : out) {
    if (teams.size() != 4)
      report.warn(0, "season " + std::to_string(season) + " lists " +
                         std::to_string(teams.size()) + " final-four teams, expected 4");
    if (season_teams) {
      // the flag applies to the following season's games
      auto it = season_teams->find(season + 1);
      if (it != season_teams->end()) {
        for (const auto& t : teams)
          if (!it->second.count(t))
            report.warn(0, "final-four team '" + t + "' of season " + std::to_string(season) +
                               " does not appear in season " + std::to_string(season + 1) +
                               " results");
      }
    }
  }
  return out;
}

void attach_f4(std::vector<SeasonDataset>& datasets, const F4Map& f4, ValidationReport& report) {
  for (auto& d : datasets) {
    auto it = f4.find(d.season - 1);
    if (it == f4.end()) {
      d.f4_prev.clear();
      report.warn(0, "no final-four metadata for season " + std::to_string(d.season - 1) +
                         "; all season " + std::to_string(d.season) + " flags set to 0");
    } else {
      d.f4_prev = it->second;
    }
  }
}

std::vector<CrowdVote> read_crowd(const std::string& path, ValidationReport& report) {
  CsvReader reader(path);
  reader.require_header(kCrowdHeader, "crowd file '" + path + "'");
  std::map<std::pair<GameId, std::string>, std::pair<int, Label>> latest;  // -> (line, vote)
  for (const auto& row : reader.rows()) {
    if (row.fields.size() != kCrowdHeader.size()) {
      report.error(row.line, "expected 6 fields, got " + std::to_string(row.fields.size()));
      continue;
    }
    GameId id;
    if (!parse_int(row.fields[0], id.season) || !parse_int(row.fields[1], id.round)) {
      report.error(row.line, "bad season/round '" + row.fields[0] + "','" + row.fields[1] + "'");
      continue;
    }
    id.home_team = row.fields[2];
    id.away_team = row.fields[3];
    const std::string& player = row.fields[4];
    if (id.home_team.empty() || id.away_team.empty() || player.empty()) {
      report.error(row.line, "empty team or player field");
      continue;
    }
    int pred = 0;
    if (!parse_int(row.fields[5], pred) || (pred != 1 && pred != 2)) {
      report.error(row.line, "prediction '" + row.fields[5] + "' outside {1,2}");
      continue;
    }
    auto key = std::make_pair(std::move(id), player);
    auto [it, inserted] = latest.try_emplace(key, row.line, label_from_int(pred));
    if (!inserted) {
      report.warn(row.line, "duplicate vote by '" + player + "' for " + key.first.home_team +
                                " vs " + key.first.away_team + "; keeping the last one");
      it->second = {row.line, label_from_int(pred)};
    }
  }
  std::vector<CrowdVote> out;
  out.reserve(latest.size());
  for (const auto& [key, val] : latest)
    out.push_back(CrowdVote{key.first, key.second, val.second});
  return out;  // sorted by (game, player) via map order
}

ValidationReport validate(const std::vector<SeasonDataset>& datasets) {
  ValidationReport rep;
  for (const auto& d : datasets) {
    const std::string tag = "season " + std::to_string(d.season);
    int expected_rounds = d.expected_rounds();
    std::map<int, std::map<std::string, int>> appearances;  // round -> team -> count
    for (const auto& g : d.games) {
      appearances[g.round][g.home_team]++;
      appearances[g.round][g.away_team]++;
      if (expected_rounds > 0 && g.round > expected_rounds)
        rep.error(0, tag + ": round " + std::to_string(g.round) + " exceeds the " +
                         std::to_string(expected_rounds) + " rounds implied by " +
                         std::to_string(d.teams.size()) + " teams");
    }
    bool complete = !d.games.empty();
    int max_round = d.max_round();
    for (int r = 1; r <= max_round; ++r) {
      auto it = appearances.find(r);
      if (it == appearances.end()) {
        rep.warn(0, tag + ": round " + std::to_string(r) + " is missing entirely; "
                                                           "incomplete season");
        complete = false;
        continue;
      }
      for (const auto& [team, count] : it->second) {
        if (count > 1) {
          rep.error(0, tag + ": team '" + team + "' appears " + std::to_string(count) +
                           " times in round " + std::to_string(r));
          complete = false;
        }
      }
      if (it->second.size() != d.teams.size()) {
        rep.warn(0, tag + ": round " + std::to_string(r) + " covers " +
                        std::to_string(it->second.size()) + " of " +
                        std::to_string(d.teams.size()) + " teams; incomplete season");
        complete = false;
      }
    }
    if (max_round < expected_rounds) {
      rep.warn(0, tag + ": only " + std::to_string(max_round) + " of " +
                      std::to_string(expected_rounds) + " rounds present; incomplete season");
      complete = false;
    }
    rep.is_complete_season[d.season] = complete;
  }
  return rep;
}

}  // namespace bball
