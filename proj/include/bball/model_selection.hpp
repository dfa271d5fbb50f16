#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bball/classifiers.hpp"
#include "bball/features.hpp"

namespace bball {

struct MetricPair {
  double accuracy = 0;
  double weighted_accuracy = 0;
};

double accuracy(std::span<const Label> y_true, std::span<const Label> y_pred);

/// Balanced accuracy: mean of the two per-class recalls. Exactly 0.5 for any
/// constant predictor on a two-class sample. Throws when y_true is
/// single-class.
double weighted_accuracy(std::span<const Label> y_true, std::span<const Label> y_pred);

/// Disjoint index folds covering 0..n-1 with class proportions within one
/// sample of the global ones. Deterministic given the seed.
std::vector<std::vector<size_t>> stratified_kfold(std::span<const Label> y, int k,
                                                  uint64_t seed);

struct CvOptions {
  int k = 5;
  uint64_t seed = 0;
  int pca_components = 0;  // 0 disables projection
  int jobs = 1;
};

/// Per fold: scaler (and optional PCA) fitted on the k-1 training folds only,
/// model trained, held-out fold scored. Returns the means across folds.
MetricPair cross_validate(const ModelSpec& spec, const FeatureMatrix& data,
                          const CvOptions& opts);

struct GridPoint {
  Params params;
  MetricPair metrics;
};

struct GridResult {
  Params best_params;
  MetricPair best_metric;
  std::vector<GridPoint> all_points;
};

/// Ordered grid axes: the Cartesian product is enumerated with the last axis
/// varying fastest, which fixes the tie-break order.
using Grid = std::vector<std::pair<std::string, std::vector<double>>>;

/// Full Cartesian product; best by accuracy, ties by weighted accuracy then
/// grid order. Points evaluate in parallel without affecting results.
GridResult grid_search(const ModelSpec& spec_template, const Grid& grid,
                       const FeatureMatrix& data, const CvOptions& opts);

/// Grid-search driver used for the estimator-count family: a coarse pass in
/// steps of 10 followed by a unit-step pass within +-20 of the coarse
/// optimum. Other axes are re-searched in both passes.
GridResult grid_search_estimators_refined(const ModelSpec& spec_template, const Grid& coarse,
                                          const FeatureMatrix& data, const CvOptions& opts);

}  // namespace bball
