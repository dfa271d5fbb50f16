#include "bball/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bball/parallel.hpp"
#include "bball/pca.hpp"
#include "bball/rng.hpp"

namespace bball {

double accuracy(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) throw Error("accuracy: length mismatch");
  if (y_true.empty()) throw Error("accuracy of an empty sample");
  size_t hits = 0;
  for (size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

double weighted_accuracy(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) throw Error("weighted accuracy: length mismatch");
  size_t n1 = 0, n2 = 0, hit1 = 0, hit2 = 0;
  for (size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == Label::HomeWin) {
      ++n1;
      hit1 += y_pred[i] == Label::HomeWin;
    } else {
      ++n2;
      hit2 += y_pred[i] == Label::AwayWin;
    }
  }
  if (n1 == 0 || n2 == 0)
    throw Error("weighted accuracy undefined: y_true contains a single class");
  double recall1 = static_cast<double>(hit1) / static_cast<double>(n1);
  double recall2 = static_cast<double>(hit2) / static_cast<double>(n2);
  return 0.5 * (recall1 + recall2);
}

std::vector<std::vector<size_t>> stratified_kfold(std::span<const Label> y, int k,
                                                  uint64_t seed) {
  if (k < 2) throw Error("stratified k-fold needs k >= 2");
  std::vector<size_t> class1, class2;
  for (size_t i = 0; i < y.size(); ++i)
    (y[i] == Label::HomeWin ? class1 : class2).push_back(i);
  for (const auto* cls : {&class1, &class2}) {
    if (cls->size() < static_cast<size_t>(k))
      throw Error("class with " + std::to_string(cls->size()) +
                  " samples cannot be split into " + std::to_string(k) + " folds");
  }

  std::vector<std::vector<size_t>> folds(k);
  uint64_t stream = 1;
  for (auto* cls : {&class1, &class2}) {
    Rng rng(seed, stream++);
    rng.shuffle(*cls);
    // chunk sizes n/k, the first n%k folds get one extra
    size_t base = cls->size() / k;
    size_t extra = cls->size() % k;
    size_t pos = 0;
    for (int f = 0; f < k; ++f) {
      size_t take = base + (static_cast<size_t>(f) < extra ? 1 : 0);
      for (size_t i = 0; i < take; ++i) folds[f].push_back((*cls)[pos++]);
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

namespace {

MetricPair evaluate_fold(const ModelSpec& spec, const FeatureMatrix& data,
                         const std::vector<std::vector<size_t>>& folds, size_t test_fold,
                         int pca_components) {
  std::vector<size_t> train_idx;
  for (size_t f = 0; f < folds.size(); ++f)
    if (f != test_fold) train_idx.insert(train_idx.end(), folds[f].begin(), folds[f].end());

  FeatureMatrix train_set = subset_rows(data, train_idx);
  FeatureMatrix test_set = subset_rows(data, folds[test_fold]);

  // all preprocessing is fitted on the training folds only
  Scaler scaler = fit_scaler(train_set);
  train_set = apply_scaler(scaler, train_set);
  test_set = apply_scaler(scaler, test_set);
  if (pca_components > 0) {
    PcaProjection proj = pca_fit(train_set, static_cast<size_t>(pca_components));
    train_set = pca_transform(proj, train_set);
    test_set = pca_transform(proj, test_set);
  }

  TrainedModel model = train(spec, train_set);
  std::vector<Label> pred(test_set.n_rows);
  for (size_t i = 0; i < test_set.n_rows; ++i)
    pred[i] = model.predict_label(std::span<const double>(test_set.row(i), test_set.n_cols));
  return MetricPair{accuracy(test_set.labels, pred), weighted_accuracy(test_set.labels, pred)};
}

}  // namespace

MetricPair cross_validate(const ModelSpec& spec, const FeatureMatrix& data,
                          const CvOptions& opts) {
  auto folds = stratified_kfold(data.labels, opts.k, opts.seed);
  std::vector<MetricPair> results(folds.size());
  parallel_for(folds.size(), opts.jobs, [&](size_t f) {
    results[f] = evaluate_fold(spec, data, folds, f, opts.pca_components);
  });
  MetricPair mean;
  for (const auto& r : results) {
    mean.accuracy += r.accuracy;
    mean.weighted_accuracy += r.weighted_accuracy;
  }
  mean.accuracy /= static_cast<double>(results.size());
  mean.weighted_accuracy /= static_cast<double>(results.size());
  return mean;
}

namespace {

std::vector<Params> expand_grid(const Grid& grid) {
  std::vector<Params> points{Params{}};
  for (const auto& [name, values] : grid) {
    if (values.empty()) throw Error("grid axis '" + name + "' has no values");
    std::vector<Params> next;
    next.reserve(points.size() * values.size());
    for (const auto& p : points) {
      for (double v : values) {
        Params q = p;
        q[name] = v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

GridResult search_points(const ModelSpec& spec_template, const std::vector<Params>& points,
                         const FeatureMatrix& data, const CvOptions& opts) {
  std::vector<GridPoint> all(points.size());
  CvOptions inner = opts;
  inner.jobs = 1;  // parallelism lives at the grid-point level
  parallel_for(points.size(), opts.jobs, [&](size_t i) {
    ModelSpec spec = spec_template;
    for (const auto& [k, v] : points[i]) spec.hyper_params[k] = v;
    all[i] = GridPoint{points[i], cross_validate(spec, data, inner)};
  });

  GridResult out;
  out.all_points = std::move(all);
  size_t best = 0;
  for (size_t i = 1; i < out.all_points.size(); ++i) {
    const MetricPair& cand = out.all_points[i].metrics;
    const MetricPair& cur = out.all_points[best].metrics;
    if (cand.accuracy > cur.accuracy ||
        (cand.accuracy == cur.accuracy && cand.weighted_accuracy > cur.weighted_accuracy))
      best = i;
  }
  out.best_params = out.all_points[best].params;
  out.best_metric = out.all_points[best].metrics;
  return out;
}

}  // namespace

GridResult grid_search(const ModelSpec& spec_template, const Grid& grid,
                       const FeatureMatrix& data, const CvOptions& opts) {
  if (grid.empty()) throw Error("grid search needs a non-empty grid");
  return search_points(spec_template, expand_grid(grid), data, opts);
}

GridResult grid_search_estimators_refined(const ModelSpec& spec_template, const Grid& coarse,
                                          const FeatureMatrix& data, const CvOptions& opts) {
  GridResult first = grid_search(spec_template, coarse, data, opts);
  auto it = first.best_params.find("n_estimators");
  if (it == first.best_params.end()) return first;

  int opt = static_cast<int>(it->second);
  Grid fine;
  for (const auto& [name, values] : coarse) {
    if (name == "n_estimators") {
      std::vector<double> range;
      for (int v = std::max(1, opt - 20); v <= opt + 20; ++v) range.push_back(v);
      fine.emplace_back(name, std::move(range));
    } else {
      fine.emplace_back(name, values);
    }
  }
  GridResult second = grid_search(spec_template, fine, data, opts);

  GridResult merged;
  merged.all_points = first.all_points;
  merged.all_points.insert(merged.all_points.end(), second.all_points.begin(),
                           second.all_points.end());
  bool second_wins =
      second.best_metric.accuracy > first.best_metric.accuracy ||
      (second.best_metric.accuracy == first.best_metric.accuracy &&
       second.best_metric.weighted_accuracy > first.best_metric.weighted_accuracy);
  merged.best_params = second_wins ? second.best_params : first.best_params;
  merged.best_metric = second_wins ? second.best_metric : first.best_metric;
  return merged;
}

}  // namespace bball
