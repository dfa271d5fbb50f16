#include <cmath>
#include <numeric>

#include "classifiers_impl.hpp"

namespace bball::detail {

ForestModel fit_random_forest(const TrainInput& in) {
  size_t n = in.data.n_rows;
  size_t d = in.data.n_cols;
  int n_estimators = in.iparam("n_estimators");
  if (n_estimators < 1) throw Error("random forest needs n_estimators >= 1");
  bool bootstrap = in.param("bootstrap") != 0;
  double mf = in.param("max_features");
  size_t mtry;
  if (mf <= 0)
    mtry = std::max<size_t>(1, static_cast<size_t>(std::floor(std::sqrt(static_cast<double>(d)))));
  else
    mtry = std::min<size_t>(d, static_cast<size_t>(mf));

  Cols cols(in.data);
  ForestModel forest;
  forest.trees.resize(n_estimators);
  for (int t = 0; t < n_estimators; ++t) {
    // one generator per estimator: trees are reproducible independent of
    // training order
    Rng rng(in.seed, static_cast<uint64_t>(t) + 1);
    std::vector<size_t> sample(n);
    if (bootstrap)
      for (size_t i = 0; i < n; ++i) sample[i] = static_cast<size_t>(rng.next_below(n));
    else
      std::iota(sample.begin(), sample.end(), 0);
    TreeConfig cfg;
    cfg.max_depth = in.iparam("max_depth");
    cfg.min_samples_split = in.iparam("min_samples_split");
    cfg.mtry = mtry == d ? 0 : mtry;
    cfg.rng = &rng;
    forest.trees[t] = build_classification_tree(cols, in.y1, std::move(sample), cfg);
  }
  return forest;
}

GbModel fit_gradient_boosting(const TrainInput& in) {
  size_t n = in.data.n_rows;
  int n_estimators = in.iparam("n_estimators");
  if (n_estimators < 1) throw Error("gradient boosting needs n_estimators >= 1");

  GbModel model;
  model.learning_rate = in.param("learning_rate");
  size_t ones = 0;
  for (uint8_t y : in.y1) ones += y;
  double p = static_cast<double>(ones) / static_cast<double>(n);
  model.f0 = std::log(p / (1.0 - p));

  Cols cols(in.data);
  std::vector<double> f(n, model.f0), grad(n), hess(n);
  TreeConfig cfg;
  cfg.max_depth = in.iparam("max_depth");
  cfg.min_samples_split = in.iparam("min_samples_split");

  model.trees.reserve(n_estimators);
  for (int t = 0; t < n_estimators; ++t) {
    for (size_t i = 0; i < n; ++i) {
      double pi = sigmoid(f[i]);
      grad[i] = (in.y1[i] ? 1.0 : 0.0) - pi;  // negative gradient of log loss
      hess[i] = pi * (1.0 - pi);
    }
    std::vector<size_t> sample(n);
    std::iota(sample.begin(), sample.end(), 0);
    TreeModel tree = build_regression_tree(cols, grad, hess, std::move(sample), cfg);
    for (size_t i = 0; i < n; ++i)
      f[i] += model.learning_rate * tree_eval(tree, {in.data.row(i), in.data.n_cols});
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace bball::detail
