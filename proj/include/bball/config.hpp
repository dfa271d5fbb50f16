#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bball/model_selection.hpp"

namespace bball {

inline constexpr const char* kVersion = "0.1.0";

struct ModelDef {
  std::string algorithm = "ADA2";
  Params params;
  std::vector<std::string> features;  // empty = all canonical columns
  std::string level = "match";
  bool regrid = false;  // per-round re-tuning during walk-forward
};

struct RunConfig {
  std::string results_path;
  std::string f4_path;
  std::string crowd_path;
  std::string out_dir = "out";
  uint64_t seed = 42;
  int jobs = 1;
  int cv_folds = 5;
  int mi_bins = 8;
  bool dump_features = false;  // calibrate also writes the design matrix CSV
  std::string level = "match";
  int test_season = 0;              // 0 = latest season in the data
  std::vector<int> train_seasons;   // empty = every season before the test one
  std::set<int> excluded_rounds;
  std::vector<std::string> algorithms;       // calibrate scope; empty = all
  std::map<std::string, Grid> grids;         // per algorithm
  std::string wrapper_algorithm = "ADA2";
  Params wrapper_fixed;             // skip the step-one tuning when non-empty
  std::map<std::string, ModelDef> models;
};

/// Built-in defaults: the full algorithm roster, its search grids, and the
/// three shipped model definitions.
RunConfig default_config();

/// Defaults overlaid with the JSON config file.
RunConfig load_config(const std::string& path);

std::string config_to_json(const RunConfig& cfg);

/// The default search grid for one algorithm (empty for the parameter-free ones).
Grid default_grid(Algorithm a);

}  // namespace bball
