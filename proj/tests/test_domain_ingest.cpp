#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bball/domain.hpp"
#include "bball/ingest.hpp"
#include "bball/rng.hpp"
#include "synth.hpp"

using namespace bball;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / ("bball_test_" + std::to_string(::getpid()) + "_" +
                                       std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& content) const {
    fs::path p = dir / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

constexpr const char* kResultsHeader =
    "season,round,date,home_team,away_team,home_score,away_score\n";

}  // namespace

TEST_CASE("derive_label covers both outcomes and rejects ties") {
  GameRecord g{2019, 1, Date{2018, 10, 11}, "TeamA", "TeamB", 80, 77};
  CHECK(derive_label(g) == Label::HomeWin);
  g.home_score = 77;
  g.away_score = 80;
  CHECK(derive_label(g) == Label::AwayWin);
  g.away_score = 77;
  CHECK_THROWS_AS(derive_label(g), Error);
}

TEST_CASE("dates parse strictly") {
  Date d = parse_date("2018-10-11");
  CHECK(d.year == 2018);
  CHECK(d.month == 10);
  CHECK(d.day == 11);
  CHECK(to_string(d) == "2018-10-11");
  CHECK_THROWS(parse_date("2018/10/11"));
  CHECK_THROWS(parse_date("2018-13-01"));
  CHECK_THROWS(parse_date("2019-02-29"));
  CHECK_NOTHROW(parse_date("2020-02-29"));
}

TEST_CASE("single-row results file parses into one dataset") {
  TempDir tmp;
  auto path = tmp.file("r.csv", std::string(kResultsHeader) +
                                    "2019,1,2018-10-11,TeamA,TeamB,95,70\n");
  auto datasets = parse_results(path);
  REQUIRE(datasets.size() == 1);
  REQUIRE(datasets[0].games.size() == 1);
  const GameRecord& g = datasets[0].games[0];
  CHECK(g.season == 2019);
  CHECK(g.round == 1);
  CHECK(derive_label(g) == Label::HomeWin);
  CHECK(datasets[0].teams == std::set<std::string>{"TeamA", "TeamB"});
}

TEST_CASE("header-only file yields empty collection plus a warning") {
  TempDir tmp;
  auto path = tmp.file("r.csv", kResultsHeader);
  ResultsFile f = read_results(path);
  CHECK(f.datasets.empty());
  CHECK(f.report.ok());
  REQUIRE(f.report.warnings.size() == 1);
  CHECK(f.report.warnings[0].second.find("no games") != std::string::npos);
}

TEST_CASE("malformed, duplicate and tied rows fail with line numbers") {
  TempDir tmp;
  SUBCASE("malformed row") {
    auto path = tmp.file("r.csv", std::string(kResultsHeader) + "2019,1,bad-date,A,B,95,70\n");
    ResultsFile f = read_results(path);
    REQUIRE_FALSE(f.report.ok());
    CHECK(f.report.errors[0].first == 2);
  }
  SUBCASE("duplicate game identity") {
    auto path = tmp.file("r.csv", std::string(kResultsHeader) +
                                      "2019,1,2018-10-11,A,B,95,70\n"
                                      "2019,1,2018-10-12,A,B,90,80\n");
    ResultsFile f = read_results(path);
    REQUIRE_FALSE(f.report.ok());
    CHECK(f.report.errors[0].first == 3);
    CHECK(f.report.errors[0].second.find("duplicate") != std::string::npos);
  }
  SUBCASE("tied score") {
    auto path = tmp.file("r.csv", std::string(kResultsHeader) + "2019,1,2018-10-11,A,B,80,80\n");
    ResultsFile f = read_results(path);
    REQUIRE_FALSE(f.report.ok());
    CHECK(f.report.errors[0].second.find("tie") != std::string::npos);
  }
  SUBCASE("team playing itself") {
    auto path = tmp.file("r.csv", std::string(kResultsHeader) + "2019,1,2018-10-11,A,A,80,70\n");
    CHECK_FALSE(read_results(path).report.ok());
  }
}

TEST_CASE("a full 16-team season parses as complete") {
  synth::SeasonSpec spec;
  spec.n_teams = 16;
  SeasonDataset season = synth::make_season(spec);
  REQUIRE(season.games.size() == 240);  // 30 rounds x 8 games

  TempDir tmp;
  std::string path = (tmp.dir / "season.csv").string();
  write_results({season}, path);
  auto datasets = parse_results(path);
  REQUIRE(datasets.size() == 1);
  CHECK(datasets[0].games.size() == 240);

  ValidationReport rep = validate(datasets);
  CHECK(rep.ok());
  CHECK(rep.is_complete_season.at(spec.season));
}

TEST_CASE("round-trip: write then parse reproduces every record") {
  synth::SeasonSpec spec;
  spec.n_teams = 6;
  spec.season = 2018;
  SeasonDataset season = synth::make_season(spec);
  TempDir tmp;
  std::string path = (tmp.dir / "rt.csv").string();
  write_results({season}, path);
  auto parsed = parse_results(path);
  REQUIRE(parsed.size() == 1);
  REQUIRE(parsed[0].games.size() == season.games.size());
  for (size_t i = 0; i < season.games.size(); ++i) CHECK(parsed[0].games[i] == season.games[i]);
}

TEST_CASE("parsing is insensitive to input row order") {
  synth::SeasonSpec spec;
  spec.n_teams = 4;
  SeasonDataset season = synth::make_season(spec);
  TempDir tmp;
  std::string sorted_path = (tmp.dir / "sorted.csv").string();
  write_results({season}, sorted_path);

  SeasonDataset shuffled = season;
  Rng rng(5);
  rng.shuffle(shuffled.games);
  std::string shuffled_path = (tmp.dir / "shuffled.csv").string();
  write_results({shuffled}, shuffled_path);

  auto a = parse_results(sorted_path);
  auto b = parse_results(shuffled_path);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].games == b[i].games);
    CHECK(a[i].teams == b[i].teams);
  }
}

TEST_CASE("final-four metadata parses with tolerance for odd counts") {
  TempDir tmp;
  SUBCASE("four teams for one season") {
    auto path = tmp.file("f4.csv", "season,team\n2018,A\n2018,B\n2018,C\n2018,D\n");
    ValidationReport rep;
    F4Map f4 = read_f4(path, rep);
    CHECK(rep.ok());
    CHECK(rep.warnings.empty());
    CHECK(f4.at(2018) == std::set<std::string>{"A", "B", "C", "D"});
  }
  SUBCASE("missing season attaches an empty set with a warning") {
    auto path = tmp.file("f4.csv", "season,team\n2018,A\n2018,B\n2018,C\n2018,D\n");
    ValidationReport rep;
    F4Map f4 = read_f4(path, rep);
    std::vector<SeasonDataset> datasets(1);
    datasets[0].season = 2018;  // needs 2017 metadata, absent
    attach_f4(datasets, f4, rep);
    CHECK(datasets[0].f4_prev.empty());
    REQUIRE_FALSE(rep.warnings.empty());
  }
  SUBCASE("five teams parse with a warning") {
    auto path = tmp.file("f4.csv", "season,team\n2018,A\n2018,B\n2018,C\n2018,D\n2018,E\n");
    ValidationReport rep;
    F4Map f4 = read_f4(path, rep);
    CHECK(rep.ok());
    CHECK(f4.at(2018).size() == 5);
    REQUIRE(rep.warnings.size() == 1);
    CHECK(rep.warnings[0].second.find("expected 4") != std::string::npos);
  }
}

TEST_CASE("crowd parsing validates predictions and dedupes") {
  TempDir tmp;
  constexpr const char* header = "season,round,home_team,away_team,player_id,prediction\n";
  SUBCASE("one valid row") {
    auto path = tmp.file("c.csv", std::string(header) + "2019,2,TeamA,TeamB,player7,1\n");
    ValidationReport rep;
    auto votes = read_crowd(path, rep);
    CHECK(rep.ok());
    REQUIRE(votes.size() == 1);
    CHECK(votes[0].player_id == "player7");
    CHECK(votes[0].prediction == Label::HomeWin);
    CHECK(votes[0].game.round == 2);
  }
  SUBCASE("duplicate (game, player) keeps the last with a warning") {
    auto path = tmp.file("c.csv", std::string(header) +
                                      "2019,2,TeamA,TeamB,player7,1\n"
                                      "2019,2,TeamA,TeamB,player7,2\n");
    ValidationReport rep;
    auto votes = read_crowd(path, rep);
    CHECK(rep.ok());
    REQUIRE(votes.size() == 1);
    CHECK(votes[0].prediction == Label::AwayWin);
    CHECK(rep.warnings.size() == 1);
  }
  SUBCASE("prediction outside {1,2} is an error with the line number") {
    auto path = tmp.file("c.csv", std::string(header) + "2019,2,TeamA,TeamB,player7,3\n");
    ValidationReport rep;
    read_crowd(path, rep);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.errors[0].first == 2);
  }
}

TEST_CASE("validate flags double appearances and missing rounds") {
  synth::SeasonSpec spec;
  spec.n_teams = 4;
  SeasonDataset season = synth::make_season(spec);

  SUBCASE("team twice in one round") {
    SeasonDataset bad = season;
    GameRecord extra = bad.games[0];
    extra.round = 1;
    extra.home_team = bad.games[0].home_team;  // already plays in round 1
    extra.away_team = "TeamZZ";
    extra.home_score = 90;
    extra.away_score = 70;
    bad.teams.insert("TeamZZ");
    bad.games.push_back(extra);
    ValidationReport rep = validate({bad});
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (const auto& [line, msg] : rep.errors)
      if (msg.find("appears 2 times") != std::string::npos) found = true;
    CHECK(found);
  }
  SUBCASE("round beyond the schedule length is an error") {
    SeasonDataset bad = season;  // 4 teams -> 6 rounds maximum
    GameRecord late = bad.games[0];
    late.round = 7;
    bad.games.push_back(late);
    ValidationReport rep = validate({bad});
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.errors[0].second.find("exceeds") != std::string::npos);
  }
  SUBCASE("missing round warns incomplete") {
    SeasonDataset holey = season;
    std::erase_if(holey.games, [](const GameRecord& g) { return g.round == 3; });
    ValidationReport rep = validate({holey});
    CHECK(rep.ok());  // warnings only
    CHECK_FALSE(rep.is_complete_season.at(spec.season));
    bool found = false;
    for (const auto& [line, msg] : rep.warnings)
      if (msg.find("round 3 is missing") != std::string::npos) found = true;
    CHECK(found);
  }
}
