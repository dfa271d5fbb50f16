#include "bball/domain.hpp"

#include <algorithm>
#include <cstdio>

namespace bball {

Label label_from_int(int v) {
  if (v == 1) return Label::HomeWin;
  if (v == 2) return Label::AwayWin;
  throw Error("label must be 1 (home win) or 2 (away win), got " + std::to_string(v));
}

namespace {

int days_in_month(int year, int month) {
  static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return lengths[month - 1];
}

}  // namespace

Date parse_date(const std::string& iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
    throw Error("malformed date '" + iso + "', expected YYYY-MM-DD");
  for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (iso[i] < '0' || iso[i] > '9')
      throw Error("malformed date '" + iso + "', expected YYYY-MM-DD");
  Date d;
  d.year = std::stoi(iso.substr(0, 4));
  d.month = std::stoi(iso.substr(5, 2));
  d.day = std::stoi(iso.substr(8, 2));
  if (d.month < 1 || d.month > 12)
    throw Error("date '" + iso + "' has month out of range");
  if (d.day < 1 || d.day > days_in_month(d.year, d.month))
    throw Error("date '" + iso + "' has day out of range");
  return d;
}

std::string to_string(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

int SeasonDataset::max_round() const {
  int r = 0;
  for (const auto& g : games) r = std::max(r, g.round);
  return r;
}

Label derive_label(const GameRecord& g) {
  if (g.home_score == g.away_score)
    throw Error("tied score " + std::to_string(g.home_score) + "-" +
                std::to_string(g.away_score) + " for " + g.home_team + " vs " +
                g.away_team + ": basketball games cannot tie");
  return g.home_score > g.away_score ? Label::HomeWin : Label::AwayWin;
}

const SeasonDataset& find_season(const std::vector<SeasonDataset>& datasets, int season) {
  for (const auto& d : datasets)
    if (d.season == season) return d;
  throw Error("season " + std::to_string(season) + " not present in the loaded data");
}

bool has_season(const std::vector<SeasonDataset>& datasets, int season) {
  return std::any_of(datasets.begin(), datasets.end(),
                     [&](const SeasonDataset& d) { return d.season == season; });
}

}  // namespace bball
