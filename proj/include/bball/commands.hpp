#pragma once

#include <string>

#include "bball/config.hpp"

namespace bball {

// Batch entry points behind the CLI. Each one loads data per the config,
// writes its report files plus resolved_config.json and run_manifest.json
// under cfg.out_dir, and returns the process exit code:
//   0 success, 1 data/validation failure, 2 usage error.

int cmd_validate(const RunConfig& cfg);
int cmd_describe(const RunConfig& cfg);
int cmd_calibrate(const RunConfig& cfg);
int cmd_select_features(const RunConfig& cfg, const std::string& method);
int cmd_backtest(const RunConfig& cfg, const std::string& model);

}  // namespace bball
