#include "bball/config.hpp"

#include <fstream>

#include <json.hpp>

namespace bball {

using nlohmann::json;

namespace {

std::vector<double> log_range(double lo, double hi) {
  std::vector<double> out;
  for (double v = lo; v <= hi * 1.0000001; v *= 10) out.push_back(v);
  return out;
}

std::vector<double> step_range(double lo, double hi, double step) {
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
  return out;
}

}  // namespace

Grid default_grid(Algorithm a) {
  switch (a) {
    case Algorithm::LR:
    case Algorithm::SVM_LINEAR: return {{"C", log_range(1e-3, 1e3)}};
    case Algorithm::SVM_RBF:
      return {{"C", log_range(1e-3, 1e3)}, {"gamma", log_range(1e-3, 1e1)}};
    case Algorithm::KNN: return {{"k", step_range(1, 25, 2)}};
    case Algorithm::RF:
    case Algorithm::GB:
    case Algorithm::ADA: return {{"n_estimators", step_range(10, 200, 10)}};
    case Algorithm::ADA2:
      return {{"n_estimators", step_range(10, 200, 10)},
              {"learning_rate", step_range(0.1, 1.0, 0.1)}};
    case Algorithm::DT:
    case Algorithm::NB:
    case Algorithm::DA: return {};
  }
  throw Error("unknown algorithm id");
}

RunConfig default_config() {
  RunConfig cfg;
  for (Algorithm a : all_algorithms()) {
    Grid g = default_grid(a);
    if (!g.empty()) cfg.grids[to_string(a)] = std::move(g);
  }
  // shipped models: the two wrapper-selected feature sets with their tuned
  // parameters, plus the all-features ensemble whose parameters come from the
  // calibration run (override via config)
  ModelDef m1;
  m1.algorithm = "ADA2";
  m1.features = {"Position Home", "Position Away", "Offence Home", "Offence Away",
                 "Defence Away", "Difference Away", "Away F4"};
  m1.params = {{"n_estimators", 141}, {"learning_rate", 0.7}};
  ModelDef m2;
  m2.algorithm = "ADA2";
  m2.features = {"Position Home", "Offence Home", "Offence Away", "Defence Away",
                 "Difference Away", "Home F4", "Away F4"};
  m2.params = {{"n_estimators", 115}, {"learning_rate", 0.7}};
  ModelDef m3;
  m3.algorithm = "ADA2";
  m3.features = {};  // all twelve
  m3.params = {{"n_estimators", 100}, {"learning_rate", 0.7}};
  cfg.models = {{"model1", m1}, {"model2", m2}, {"model3", m3}};
  return cfg;
}

namespace {

Grid grid_from_json(const json& j) {
  Grid g;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::vector<double> values;
    for (const auto& v : it.value()) values.push_back(v.get<double>());
    g.emplace_back(it.key(), std::move(values));
  }
  return g;  // nlohmann orders object keys, so axis order is deterministic
}

json grid_to_json(const Grid& g) {
  json j = json::object();
  for (const auto& [name, values] : g) j[name] = values;
  return j;
}

ModelDef model_from_json(const json& j) {
  ModelDef m;
  m.algorithm = j.value("algorithm", m.algorithm);
  if (j.contains("params")) m.params = j.at("params").get<Params>();
  if (j.contains("features")) m.features = j.at("features").get<std::vector<std::string>>();
  m.level = j.value("level", m.level);
  m.regrid = j.value("regrid", m.regrid);
  algorithm_from_string(m.algorithm);  // validate
  return m;
}

json model_to_json(const ModelDef& m) {
  return {{"algorithm", m.algorithm},
          {"params", m.params},
          {"features", m.features},
          {"level", m.level},
          {"regrid", m.regrid}};
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("config '" + path + "' is not valid JSON: " + std::string(e.what()));
  }

  RunConfig cfg = default_config();
  try {
    if (j.contains("data")) {
      const json& d = j.at("data");
      cfg.results_path = d.value("results", cfg.results_path);
      cfg.f4_path = d.value("f4", cfg.f4_path);
      cfg.crowd_path = d.value("crowd", cfg.crowd_path);
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.jobs = j.value("jobs", cfg.jobs);
    cfg.cv_folds = j.value("cv_folds", cfg.cv_folds);
    cfg.mi_bins = j.value("mi_bins", cfg.mi_bins);
    cfg.dump_features = j.value("dump_features", cfg.dump_features);
    cfg.level = j.value("level", cfg.level);
    cfg.test_season = j.value("test_season", cfg.test_season);
    if (j.contains("train_seasons"))
      cfg.train_seasons = j.at("train_seasons").get<std::vector<int>>();
    if (j.contains("excluded_rounds"))
      for (int r : j.at("excluded_rounds").get<std::vector<int>>()) cfg.excluded_rounds.insert(r);
    if (j.contains("algorithms"))
      cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
    if (j.contains("grids"))
      for (auto it = j.at("grids").begin(); it != j.at("grids").end(); ++it) {
        algorithm_from_string(it.key());  // validate
        cfg.grids[it.key()] = grid_from_json(it.value());
      }
    if (j.contains("wrapper")) {
      const json& w = j.at("wrapper");
      cfg.wrapper_algorithm = w.value("algorithm", cfg.wrapper_algorithm);
      if (w.contains("fixed_params")) cfg.wrapper_fixed = w.at("fixed_params").get<Params>();
      algorithm_from_string(cfg.wrapper_algorithm);
    }
    if (j.contains("models"))
      for (auto it = j.at("models").begin(); it != j.at("models").end(); ++it)
        cfg.models[it.key()] = model_from_json(it.value());
  } catch (const json::exception& e) {
    throw Error("config '" + path + "' has a malformed field: " + std::string(e.what()));
  }
  for (const auto& a : cfg.algorithms) algorithm_from_string(a);  // validate early
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["data"] = {{"results", cfg.results_path}, {"f4", cfg.f4_path}, {"crowd", cfg.crowd_path}};
  j["out_dir"] = cfg.out_dir;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  j["cv_folds"] = cfg.cv_folds;
  j["mi_bins"] = cfg.mi_bins;
  j["dump_features"] = cfg.dump_features;
  j["level"] = cfg.level;
  j["test_season"] = cfg.test_season;
  j["train_seasons"] = cfg.train_seasons;
  j["excluded_rounds"] = std::vector<int>(cfg.excluded_rounds.begin(), cfg.excluded_rounds.end());
  j["algorithms"] = cfg.algorithms;
  json grids = json::object();
  for (const auto& [name, grid] : cfg.grids) grids[name] = grid_to_json(grid);
  j["grids"] = grids;
  j["wrapper"] = {{"algorithm", cfg.wrapper_algorithm}, {"fixed_params", cfg.wrapper_fixed}};
  json models = json::object();
  for (const auto& [name, def] : cfg.models) models[name] = model_to_json(def);
  j["models"] = models;
  return j.dump(2) + "\n";
}

}  // namespace bball
