#pragma once

// Internal representation of fitted models. Everything here is
// implementation detail of the classifiers module; the public surface is
// bball/classifiers.hpp.

#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "bball/classifiers.hpp"
#include "bball/rng.hpp"

namespace bball::detail {

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

/// Column-major copy of the training rows, for split scans and column sorts.
struct Cols {
  size_t n = 0, d = 0;
  std::vector<double> data;  // d columns of n values

  explicit Cols(const FeatureMatrix& m) : n(m.n_rows), d(m.n_cols), data(m.n_rows * m.n_cols) {
    for (size_t c = 0; c < d; ++c)
      for (size_t r = 0; r < n; ++r) data[c * n + r] = m.at(r, c);
  }
  const double* col(size_t c) const { return data.data() + c * n; }
};

// LR, linear SVM and discriminant analysis all reduce to a separating
// hyperplane with a logistic squash on the decision value.
struct LinearModel {
  std::vector<double> w;
  double b = 0;
};

struct RbfSvmModel {
  double gamma = 1.0;
  double b = 0;
  std::vector<double> sv_coef;           // alpha_i * y_i for support vectors
  std::vector<std::vector<double>> sv;   // support vector rows
  // full dual state kept for feasibility diagnostics
  std::vector<double> alpha;
  std::vector<double> y;
  double c = 1.0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  int left = -1, right = -1;
  double value = 0;  // leaf payload: P(label 1) or regression value
};

struct TreeModel {
  std::vector<TreeNode> nodes;
};

double tree_eval(const TreeModel& t, std::span<const double> x);

struct ForestModel {
  std::vector<TreeModel> trees;
};

struct GbModel {
  double f0 = 0;
  double learning_rate = 0.1;
  std::vector<TreeModel> trees;
};

struct NbModel {
  double log_prior1 = 0, log_prior2 = 0;
  std::vector<double> mean1, mean2, var1, var2;
};

struct KnnModel {
  int k = 5;
  size_t n = 0, d = 0;
  std::vector<double> rows;  // row-major training points
  std::vector<uint8_t> y1;   // 1 where label == 1
};

struct Stump {
  int feature = 0;
  double threshold = 0;
  int polarity = 1;  // +1: predict class 1 when x >= threshold
  double alpha = 0;
};

struct AdaModel {
  std::vector<Stump> stumps;
  std::vector<double> stage_errors;
};

using ModelVariant = std::variant<LinearModel, RbfSvmModel, TreeModel, ForestModel, GbModel,
                                  NbModel, KnnModel, AdaModel>;

struct ModelImpl {
  ModelSpec spec;
  size_t n_features = 0;
  ModelVariant model;
};

/// Validated training view: hyper-parameters resolved against defaults,
/// labels mapped to {+1,-1} (label 1 positive) and {1,0}.
struct TrainInput {
  const FeatureMatrix& data;
  Params params;  // defaults overlaid with the spec's values
  uint64_t seed = 0;
  std::vector<double> y_pm;
  std::vector<uint8_t> y1;

  double param(const std::string& name) const { return params.at(name); }
  int iparam(const std::string& name) const { return static_cast<int>(params.at(name)); }
};

LinearModel fit_logistic_regression(const TrainInput& in);
LinearModel fit_linear_svm(const TrainInput& in);
LinearModel fit_discriminant(const TrainInput& in);
RbfSvmModel fit_rbf_svm(const TrainInput& in);
TreeModel fit_decision_tree(const TrainInput& in);
ForestModel fit_random_forest(const TrainInput& in);
GbModel fit_gradient_boosting(const TrainInput& in);
NbModel fit_naive_bayes(const TrainInput& in);
KnnModel fit_knn(const TrainInput& in);
AdaModel fit_adaboost(const TrainInput& in, double learning_rate);

/// Shared CART builder. For classification pass integer 0/1 targets via
/// `y1` (leaf = class-1 fraction, Gini splits); for regression pass
/// gradients/hessians (leaf = Newton step, variance splits).
struct TreeConfig {
  int max_depth = 0;  // 0 = unlimited
  int min_samples_split = 2;
  size_t mtry = 0;  // 0 = all features
  Rng* rng = nullptr;
};

TreeModel build_classification_tree(const Cols& x, const std::vector<uint8_t>& y1,
                                    std::vector<size_t> sample, const TreeConfig& cfg);
TreeModel build_regression_tree(const Cols& x, const std::vector<double>& grad,
                                const std::vector<double>& hess, std::vector<size_t> sample,
                                const TreeConfig& cfg);

}  // namespace bball::detail
