#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bball/model_selection.hpp"
#include "bball/pca.hpp"

namespace bball {

enum class FilterMethod { ANOVA, MI, CHI2 };
FilterMethod filter_method_from_string(const std::string& name);
std::string to_string(FilterMethod m);

/// One-way ANOVA F statistic per column: between-class mean square over
/// within-class mean square. Zero within-class variance with nonzero
/// between-class separation scores +infinity and ranks first.
std::vector<double> anova_f(const FeatureMatrix& data);

/// Plug-in mutual information (nats) between the quantile-binned feature and
/// the label. Expects features already scaled to [0,1].
std::vector<double> mutual_information(const FeatureMatrix& data, int bins = 8);

/// Chi-square statistic between per-class sums of a non-negative feature and
/// the class-frequency expectation (the scorer convention common in ML
/// feature selection, not the contingency-table test).
std::vector<double> chi2(const FeatureMatrix& data);

struct FeatureRanking {
  FilterMethod method = FilterMethod::ANOVA;
  std::vector<double> scores;  // per column
  std::vector<int> ranks;      // per column, 1 = most informative
};

FeatureRanking rank_features(FilterMethod method, const FeatureMatrix& data, int mi_bins = 8);

struct PrefixResult {
  std::vector<std::string> features;  // the top-j prefix
  MetricPair metrics;
};

/// CV metrics for the top-1, top-2, ... top-d features of a ranking.
std::vector<PrefixResult> incremental_filter_eval(const FeatureRanking& ranking,
                                                  const ModelSpec& spec,
                                                  const FeatureMatrix& data,
                                                  const CvOptions& opts);

/// Per component count c = 1..d: project, re-tune on the grid, record best.
std::vector<std::pair<int, GridResult>> pca_sweep(const ModelSpec& spec_template,
                                                  const Grid& grid, const FeatureMatrix& data,
                                                  const CvOptions& opts);

struct SubsetResult {
  uint32_t mask = 0;  // bit j set = column j included
  std::vector<std::string> features;
  MetricPair cv_metrics;
  Params params;
};

/// Exhaustive scan of all 2^d - 1 non-empty column subsets with fixed
/// hyper-parameters, sorted by accuracy (weighted accuracy, then lowest mask,
/// as tie-breaks). Guarded to d <= 20.
std::vector<SubsetResult> wrapper_search(const ModelSpec& spec_fixed, const FeatureMatrix& data,
                                         const CvOptions& opts);

/// Re-tunes hyper-parameters per subset with a full grid search.
std::vector<SubsetResult> wrapper_refine(const std::vector<SubsetResult>& top_subsets,
                                         const ModelSpec& spec_template, const Grid& grid,
                                         const FeatureMatrix& data, const CvOptions& opts);

}  // namespace bball
