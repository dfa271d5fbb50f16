#include "bball/features.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "bball/csv.hpp"
#include "bball/kernels.hpp"

namespace bball {

std::vector<StandingsRow> compute_standings(const SeasonDataset& d, int through_round) {
  if (through_round < 1) throw Error("standings need through_round >= 1");
  if (through_round > d.max_round())
    throw Error("standings through round " + std::to_string(through_round) +
                " requested but only " + std::to_string(d.max_round()) + " rounds played");
  std::map<std::string, StandingsRow> acc;
  for (const auto& team : d.teams) acc[team].team = team;
  for (const auto& g : d.games) {
    if (g.round > through_round) continue;
    StandingsRow& h = acc[g.home_team];
    StandingsRow& a = acc[g.away_team];
    h.points_for += g.home_score;
    h.points_against += g.away_score;
    a.points_for += g.away_score;
    a.points_against += g.home_score;
    if (derive_label(g) == Label::HomeWin) {
      h.wins++;
      a.losses++;
    } else {
      a.wins++;
      h.losses++;
    }
  }
  std::vector<StandingsRow> rows;
  rows.reserve(acc.size());
  for (auto& [team, row] : acc) {
    row.diff = row.points_for - row.points_against;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const StandingsRow& x, const StandingsRow& y) {
    if (x.wins != y.wins) return x.wins > y.wins;
    if (x.diff != y.diff) return x.diff > y.diff;
    if (x.points_for != y.points_for) return x.points_for > y.points_for;
    return x.team < y.team;
  });
  for (size_t i = 0; i < rows.size(); ++i) rows[i].position = static_cast<int>(i) + 1;
  return rows;
}

TeamState team_state(const SeasonDataset& d, const std::string& team, int before_round) {
  if (before_round < 2)
    throw Error("cold start: no features exist before round 2 (round 1 has no prior games)");
  if (!d.teams.count(team))
    throw Error("team '" + team + "' not in season " + std::to_string(d.season));

  TeamState st;
  st.f4 = d.f4_prev.count(team) ? 1 : 0;

  auto standings = compute_standings(d, before_round - 1);
  for (const auto& row : standings)
    if (row.team == team) st.position = row.position;

  double scored = 0, conceded = 0;
  std::vector<bool> won;  // chronological
  for (const auto& g : d.games) {
    if (g.round >= before_round) continue;
    bool home = g.home_team == team;
    bool away = g.away_team == team;
    if (!home && !away) continue;
    scored += home ? g.home_score : g.away_score;
    conceded += home ? g.away_score : g.home_score;
    Label l = derive_label(g);
    won.push_back(home == (l == Label::HomeWin));
  }
  st.games_played = static_cast<int>(won.size());
  if (st.games_played > 0) {
    st.avg_offense = scored / st.games_played;
    st.avg_defense = conceded / st.games_played;
    st.avg_diff = st.avg_offense - st.avg_defense;
    int window = std::min(5, st.games_played);
    int wins_in_window = 0;
    for (int i = 0; i < window; ++i)
      if (won[won.size() - 1 - i]) ++wins_in_window;
    st.form = static_cast<double>(wins_in_window) / window;
  }
  return st;
}

size_t FeatureMatrix::column_index(const std::string& name) const {
  for (size_t i = 0; i < column_names.size(); ++i)
    if (column_names[i] == name) return i;
  throw Error("no feature column named '" + name + "'");
}

const std::vector<std::string>& match_feature_names() {
  static const std::vector<std::string> names = {
      "Position Home", "Position Away", "Offence Home",    "Offence Away",
      "Defence Home",  "Defence Away",  "Form Home",       "Form Away",
      "Difference Home", "Difference Away", "Home F4",     "Away F4"};
  return names;
}

const std::vector<std::string>& team_feature_names() {
  static const std::vector<std::string> names = {
      "Home Flag", "Position", "Offence", "Defence", "Difference", "Form", "F4"};
  return names;
}

namespace {

// States are computed per season in isolation: teams change too much between
// seasons for cross-season carry-over to make sense.
void for_each_scored_game(const std::vector<SeasonDataset>& datasets,
                          const std::vector<int>& seasons,
                          const std::function<void(const SeasonDataset&, const GameRecord&,
                                                   const TeamState&, const TeamState&)>& fn) {
  for (int season : seasons) {
    const SeasonDataset& d = find_season(datasets, season);
    for (const auto& g : d.games) {
      if (g.round < 2) continue;
      TeamState home = team_state(d, g.home_team, g.round);
      TeamState away = team_state(d, g.away_team, g.round);
      fn(d, g, home, away);
    }
  }
}

}  // namespace

FeatureMatrix match_feature_matrix(const std::vector<SeasonDataset>& datasets,
                                   const std::vector<int>& seasons) {
  FeatureMatrix m;
  m.column_names = match_feature_names();
  m.n_cols = m.column_names.size();
  for_each_scored_game(datasets, seasons,
                       [&](const SeasonDataset&, const GameRecord& g, const TeamState& h,
                           const TeamState& a) {
                         m.values.insert(m.values.end(),
                                         {static_cast<double>(h.position),
                                          static_cast<double>(a.position), h.avg_offense,
                                          a.avg_offense, h.avg_defense, a.avg_defense, h.form,
                                          a.form, h.avg_diff, a.avg_diff,
                                          static_cast<double>(h.f4), static_cast<double>(a.f4)});
                         m.labels.push_back(derive_label(g));
                         m.row_keys.push_back(RowKey{id_of(g), ""});
                         ++m.n_rows;
                       });
  return m;
}

FeatureMatrix team_feature_matrix(const std::vector<SeasonDataset>& datasets,
                                  const std::vector<int>& seasons) {
  FeatureMatrix m;
  m.column_names = team_feature_names();
  m.n_cols = m.column_names.size();
  for_each_scored_game(
      datasets, seasons,
      [&](const SeasonDataset&, const GameRecord& g, const TeamState& h, const TeamState& a) {
        Label l = derive_label(g);
        m.values.insert(m.values.end(),
                        {1.0, static_cast<double>(h.position), h.avg_offense, h.avg_defense,
                         h.avg_diff, h.form, static_cast<double>(h.f4)});
        m.labels.push_back(l == Label::HomeWin ? Label::HomeWin : Label::AwayWin);
        m.row_keys.push_back(RowKey{id_of(g), g.home_team});
        m.values.insert(m.values.end(),
                        {0.0, static_cast<double>(a.position), a.avg_offense, a.avg_defense,
                         a.avg_diff, a.form, static_cast<double>(a.f4)});
        // labels encode "this row's team won": 1 when it did, 2 otherwise
        m.labels.push_back(l == Label::AwayWin ? Label::HomeWin : Label::AwayWin);
        m.row_keys.push_back(RowKey{id_of(g), g.away_team});
        m.n_rows += 2;
      });
  return m;
}

Scaler fit_scaler(const FeatureMatrix& m) {
  std::vector<size_t> all(m.n_rows);
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  return fit_scaler(m, all);
}

Scaler fit_scaler(const FeatureMatrix& m, std::span<const size_t> rows) {
  if (rows.empty()) throw Error("scaler fitted on zero rows");
  Scaler s;
  s.mins.resize(m.n_cols);
  s.maxs.resize(m.n_cols);
  std::vector<double> col(rows.size());
  for (size_t c = 0; c < m.n_cols; ++c) {
    for (size_t i = 0; i < rows.size(); ++i) col[i] = m.at(rows[i], c);
    kernels::minmax(col.data(), col.size(), &s.mins[c], &s.maxs[c]);
  }
  return s;
}

FeatureMatrix apply_scaler(const Scaler& s, const FeatureMatrix& m) {
  if (s.mins.size() != m.n_cols) throw Error("scaler/matrix column mismatch");
  FeatureMatrix out = m;
  std::vector<double> col(m.n_rows), scaled(m.n_rows);
  for (size_t c = 0; c < m.n_cols; ++c) {
    double range = s.maxs[c] - s.mins[c];
    double inv = range > 0 ? 1.0 / range : 0.0;  // constant columns map to 0
    for (size_t r = 0; r < m.n_rows; ++r) col[r] = m.at(r, c);
    kernels::scale01(col.data(), col.size(), s.mins[c], inv, scaled.data());
    for (size_t r = 0; r < m.n_rows; ++r) out.at(r, c) = scaled[r];
  }
  return out;
}

FeatureMatrix subset_rows(const FeatureMatrix& m, std::span<const size_t> rows) {
  FeatureMatrix out;
  out.column_names = m.column_names;
  out.n_cols = m.n_cols;
  out.n_rows = rows.size();
  out.values.reserve(rows.size() * m.n_cols);
  for (size_t r : rows) {
    out.values.insert(out.values.end(), m.row(r), m.row(r) + m.n_cols);
    out.labels.push_back(m.labels[r]);
    out.row_keys.push_back(m.row_keys[r]);
  }
  return out;
}

FeatureMatrix select_columns(const FeatureMatrix& m, const std::vector<size_t>& cols) {
  FeatureMatrix out;
  out.n_cols = cols.size();
  out.n_rows = m.n_rows;
  out.labels = m.labels;
  out.row_keys = m.row_keys;
  for (size_t c : cols) {
    if (c >= m.n_cols) throw Error("column index out of range");
    out.column_names.push_back(m.column_names[c]);
  }
  out.values.resize(m.n_rows * cols.size());
  for (size_t r = 0; r < m.n_rows; ++r)
    for (size_t j = 0; j < cols.size(); ++j) out.at(r, j) = m.at(r, cols[j]);
  return out;
}

FeatureMatrix select_columns(const FeatureMatrix& m, const std::vector<std::string>& names) {
  std::vector<size_t> cols;
  cols.reserve(names.size());
  for (const auto& n : names) cols.push_back(m.column_index(n));
  return select_columns(m, cols);
}

void write_feature_matrix_csv(const FeatureMatrix& m, const std::string& path) {
  CsvWriter w(path);
  std::vector<std::string> header = {"season", "round", "home_team", "away_team", "team"};
  header.insert(header.end(), m.column_names.begin(), m.column_names.end());
  header.push_back("label");
  w.write_row(header);
  for (size_t r = 0; r < m.n_rows; ++r) {
    const RowKey& k = m.row_keys[r];
    std::vector<std::string> row = {std::to_string(k.game.season), std::to_string(k.game.round),
                                    k.game.home_team, k.game.away_team, k.team};
    for (size_t c = 0; c < m.n_cols; ++c) row.push_back(format_double(m.at(r, c)));
    row.push_back(std::to_string(to_int(m.labels[r])));
    w.write_row(row);
  }
}

}  // namespace bball
