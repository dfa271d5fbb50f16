#include "bball/feature_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bball/parallel.hpp"
#include "bball/stats.hpp"

namespace bball {

FilterMethod filter_method_from_string(const std::string& name) {
  if (name == "ANOVA" || name == "anova") return FilterMethod::ANOVA;
  if (name == "MI" || name == "mi") return FilterMethod::MI;
  if (name == "CHI2" || name == "chi2") return FilterMethod::CHI2;
  throw Error("unknown filter method '" + name + "' (expected anova, mi or chi2)");
}

std::string to_string(FilterMethod m) {
  switch (m) {
    case FilterMethod::ANOVA: return "anova";
    case FilterMethod::MI: return "mi";
    case FilterMethod::CHI2: return "chi2";
  }
  throw Error("unknown filter method id");
}

namespace {

void require_both_classes(const FeatureMatrix& data) {
  size_t ones = 0;
  for (Label l : data.labels) ones += l == Label::HomeWin;
  if (ones == 0 || ones == data.n_rows)
    throw Error("filter scores need both classes present");
}

}  // namespace

std::vector<double> anova_f(const FeatureMatrix& data) {
  require_both_classes(data);
  size_t n = data.n_rows, d = data.n_cols;
  std::vector<double> out(d);
  for (size_t j = 0; j < d; ++j) {
    double sum1 = 0, sum2 = 0;
    size_t n1 = 0, n2 = 0;
    for (size_t i = 0; i < n; ++i) {
      if (data.labels[i] == Label::HomeWin) {
        sum1 += data.at(i, j);
        ++n1;
      } else {
        sum2 += data.at(i, j);
        ++n2;
      }
    }
    double mu1 = sum1 / n1, mu2 = sum2 / n2;
    double mu = (sum1 + sum2) / static_cast<double>(n);
    double ssb = n1 * (mu1 - mu) * (mu1 - mu) + n2 * (mu2 - mu) * (mu2 - mu);
    double ssw = 0;
    for (size_t i = 0; i < n; ++i) {
      double mc = data.labels[i] == Label::HomeWin ? mu1 : mu2;
      ssw += (data.at(i, j) - mc) * (data.at(i, j) - mc);
    }
    double msb = ssb;                                // k-1 = 1
    double msw = ssw / static_cast<double>(n - 2);   // n-k
    if (msw == 0)
      out[j] = msb == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    else
      out[j] = msb / msw;
  }
  return out;
}

std::vector<double> mutual_information(const FeatureMatrix& data, int bins) {
  require_both_classes(data);
  if (bins < 2) throw Error("mutual information needs at least 2 bins");
  size_t n = data.n_rows, d = data.n_cols;
  std::vector<double> out(d);
  std::vector<double> col(n);
  for (size_t j = 0; j < d; ++j) {
    for (size_t i = 0; i < n; ++i) col[i] = data.at(i, j);
    std::vector<double> sorted = col;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> edges;
    for (int b = 1; b < bins; ++b) {
      double e = quantile_sorted(sorted, static_cast<double>(b) / bins);
      if (edges.empty() || e > edges.back()) edges.push_back(e);
    }
    size_t n_bins = edges.size() + 1;
    // joint counts: bin x class
    std::vector<double> joint(n_bins * 2, 0.0);
    for (size_t i = 0; i < n; ++i) {
      size_t b = static_cast<size_t>(
          std::upper_bound(edges.begin(), edges.end(), col[i]) - edges.begin());
      joint[b * 2 + (data.labels[i] == Label::HomeWin ? 0 : 1)] += 1.0;
    }
    double mi = 0;
    double total = static_cast<double>(n);
    for (size_t b = 0; b < n_bins; ++b) {
      double pb = (joint[b * 2] + joint[b * 2 + 1]) / total;
      if (pb == 0) continue;
      for (int c = 0; c < 2; ++c) {
        double pbc = joint[b * 2 + c] / total;
        if (pbc == 0) continue;
        double pc = 0;
        for (size_t bb = 0; bb < n_bins; ++bb) pc += joint[bb * 2 + c];
        pc /= total;
        mi += pbc * std::log(pbc / (pb * pc));
      }
    }
    out[j] = std::max(mi, 0.0);
  }
  return out;
}

std::vector<double> chi2(const FeatureMatrix& data) {
  require_both_classes(data);
  size_t n = data.n_rows, d = data.n_cols;
  size_t n1 = 0;
  for (Label l : data.labels) n1 += l == Label::HomeWin;
  double p1 = static_cast<double>(n1) / static_cast<double>(n);
  std::vector<double> out(d);
  for (size_t j = 0; j < d; ++j) {
    double obs1 = 0, obs2 = 0;
    for (size_t i = 0; i < n; ++i) {
      double v = data.at(i, j);
      if (v < 0) throw Error("chi-square scores need non-negative features");
      (data.labels[i] == Label::HomeWin ? obs1 : obs2) += v;
    }
    double total = obs1 + obs2;
    if (total == 0) {
      out[j] = 0;
      continue;
    }
    double exp1 = total * p1;
    double exp2 = total - exp1;
    out[j] = (obs1 - exp1) * (obs1 - exp1) / exp1 + (obs2 - exp2) * (obs2 - exp2) / exp2;
  }
  return out;
}

FeatureRanking rank_features(FilterMethod method, const FeatureMatrix& data, int mi_bins) {
  FeatureRanking r;
  r.method = method;
  switch (method) {
    case FilterMethod::ANOVA: r.scores = anova_f(data); break;
    case FilterMethod::MI: r.scores = mutual_information(data, mi_bins); break;
    case FilterMethod::CHI2: r.scores = chi2(data); break;
  }
  std::vector<size_t> idx(r.scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  // descending score; infinities first; ties keep canonical column order
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return r.scores[a] > r.scores[b]; });
  r.ranks.assign(r.scores.size(), 0);
  for (size_t pos = 0; pos < idx.size(); ++pos) r.ranks[idx[pos]] = static_cast<int>(pos) + 1;
  return r;
}

std::vector<PrefixResult> incremental_filter_eval(const FeatureRanking& ranking,
                                                  const ModelSpec& spec,
                                                  const FeatureMatrix& data,
                                                  const CvOptions& opts) {
  size_t d = data.n_cols;
  if (ranking.ranks.size() != d) throw Error("ranking does not match the matrix columns");
  std::vector<size_t> by_rank(d);
  for (size_t j = 0; j < d; ++j) by_rank[static_cast<size_t>(ranking.ranks[j]) - 1] = j;

  std::vector<PrefixResult> out(d);
  CvOptions inner = opts;
  inner.jobs = 1;
  parallel_for(d, opts.jobs, [&](size_t j) {
    std::vector<size_t> cols(by_rank.begin(), by_rank.begin() + j + 1);
    std::sort(cols.begin(), cols.end());  // canonical column order within the prefix
    FeatureMatrix sub = select_columns(data, cols);
    out[j] = PrefixResult{sub.column_names, cross_validate(spec, sub, inner)};
  });
  return out;
}

std::vector<std::pair<int, GridResult>> pca_sweep(const ModelSpec& spec_template,
                                                  const Grid& grid, const FeatureMatrix& data,
                                                  const CvOptions& opts) {
  std::vector<std::pair<int, GridResult>> out;
  for (size_t c = 1; c <= data.n_cols; ++c) {
    CvOptions cv = opts;
    cv.pca_components = static_cast<int>(c);
    out.emplace_back(static_cast<int>(c), grid_search(spec_template, grid, data, cv));
  }
  return out;
}

std::vector<SubsetResult> wrapper_search(const ModelSpec& spec_fixed, const FeatureMatrix& data,
                                         const CvOptions& opts) {
  size_t d = data.n_cols;
  if (d > 20)
    throw Error("exhaustive subset scan guarded to 20 features (got " + std::to_string(d) +
                "); reduce with a filter method first");
  uint32_t n_subsets = (1u << d) - 1;
  std::vector<SubsetResult> results(n_subsets);
  CvOptions inner = opts;
  inner.jobs = 1;
  parallel_for(n_subsets, opts.jobs, [&](size_t i) {
    uint32_t mask = static_cast<uint32_t>(i) + 1;
    std::vector<size_t> cols;
    for (size_t j = 0; j < d; ++j)
      if (mask & (1u << j)) cols.push_back(j);
    FeatureMatrix sub = select_columns(data, cols);
    SubsetResult r;
    r.mask = mask;
    r.features = sub.column_names;
    r.cv_metrics = cross_validate(spec_fixed, sub, inner);
    r.params = spec_fixed.hyper_params;
    results[i] = std::move(r);
  });
  std::stable_sort(results.begin(), results.end(), [](const SubsetResult& a,
                                                      const SubsetResult& b) {
    if (a.cv_metrics.accuracy != b.cv_metrics.accuracy)
      return a.cv_metrics.accuracy > b.cv_metrics.accuracy;
    if (a.cv_metrics.weighted_accuracy != b.cv_metrics.weighted_accuracy)
      return a.cv_metrics.weighted_accuracy > b.cv_metrics.weighted_accuracy;
    return a.mask < b.mask;
  });
  return results;
}

std::vector<SubsetResult> wrapper_refine(const std::vector<SubsetResult>& top_subsets,
                                         const ModelSpec& spec_template, const Grid& grid,
                                         const FeatureMatrix& data, const CvOptions& opts) {
  if (top_subsets.empty()) throw Error("no subsets to refine");
  std::vector<SubsetResult> out(top_subsets.size());
  for (size_t i = 0; i < top_subsets.size(); ++i) {
    FeatureMatrix sub = select_columns(data, top_subsets[i].features);
    GridResult tuned = grid_search_estimators_refined(spec_template, grid, sub, opts);
    SubsetResult r = top_subsets[i];
    r.cv_metrics = tuned.best_metric;
    r.params = tuned.best_params;
    out[i] = std::move(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const SubsetResult& a, const SubsetResult& b) {
    if (a.cv_metrics.accuracy != b.cv_metrics.accuracy)
      return a.cv_metrics.accuracy > b.cv_metrics.accuracy;
    if (a.cv_metrics.weighted_accuracy != b.cv_metrics.weighted_accuracy)
      return a.cv_metrics.weighted_accuracy > b.cv_metrics.weighted_accuracy;
    return a.mask < b.mask;
  });
  return out;
}

}  // namespace bball
