#include <algorithm>
#include <cmath>
#include <numeric>

#include "bball/kernels.hpp"
#include "classifiers_impl.hpp"

namespace bball::detail {

namespace {

struct StumpFit {
  bool found = false;
  Stump stump;
  double error = 0.5;  // weighted misclassification under current weights
};

// Optimal decision stump under sample weights. Columns are scanned in sorted
// order once per feature: with M(t) = sum of w_i*y_i over x_i < t, the error
// of "predict +1 at or above t" is W_neg + M(t), and the flipped polarity is
// its complement. Candidate thresholds are midpoints between consecutive
// distinct values.
StumpFit best_stump(const Cols& x, const std::vector<std::vector<uint32_t>>& order,
                    const std::vector<double>& wy, double w_neg, double w_total) {
  StumpFit best;
  size_t n = x.n;
  for (size_t f = 0; f < x.d; ++f) {
    const double* col = x.col(f);
    const uint32_t* idx = order[f].data();
    double m = 0;
    for (size_t pos = 0; pos + 1 < n; ++pos) {
      m += wy[idx[pos]];
      double v = col[idx[pos]];
      double v_next = col[idx[pos + 1]];
      if (v_next <= v) continue;
      double err_above = w_neg + m;  // predict +1 when x >= threshold
      double err_below = w_total - err_above;
      double err = std::min(err_above, err_below);
      if (!best.found || err < best.error) {
        best.found = true;
        best.error = err;
        best.stump.feature = static_cast<int>(f);
        best.stump.threshold = v + 0.5 * (v_next - v);
        best.stump.polarity = err_above <= err_below ? 1 : -1;
      }
    }
  }
  return best;
}

}  // namespace

AdaModel fit_adaboost(const TrainInput& in, double learning_rate) {
  size_t n = in.data.n_rows;
  int n_estimators = in.iparam("n_estimators");
  if (n_estimators < 1) throw Error("adaboost needs n_estimators >= 1");
  if (learning_rate <= 0) throw Error("adaboost needs learning_rate > 0");

  Cols cols(in.data);
  std::vector<std::vector<uint32_t>> order(cols.d);
  for (size_t f = 0; f < cols.d; ++f) {
    order[f].resize(n);
    std::iota(order[f].begin(), order[f].end(), 0u);
    const double* col = cols.col(f);
    std::stable_sort(order[f].begin(), order[f].end(),
                     [col](uint32_t a, uint32_t b) { return col[a] < col[b]; });
  }

  AdaModel model;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<double> wy(n);
  std::vector<uint8_t> correct(n), negative(n);
  for (size_t i = 0; i < n; ++i) negative[i] = in.y_pm[i] < 0 ? 1 : 0;

  for (int t = 0; t < n_estimators; ++t) {
    for (size_t i = 0; i < n; ++i) wy[i] = w[i] * in.y_pm[i];
    double w_neg = kernels::masked_sum(w.data(), negative.data(), n);
    double w_total = kernels::sum(w.data(), n);

    StumpFit fit = best_stump(cols, order, wy, w_neg, w_total);
    if (!fit.found) break;  // all columns constant
    double eps = fit.error / w_total;
    if (eps >= 0.5 - 1e-12) break;  // no stump better than chance left

    double eps_eff = std::max(eps, 1e-12);
    double alpha = learning_rate * 0.5 * std::log((1.0 - eps_eff) / eps_eff);
    fit.stump.alpha = alpha;

    const double* col = cols.col(fit.stump.feature);
    double pol = fit.stump.polarity;
    for (size_t i = 0; i < n; ++i) {
      double h = (col[i] >= fit.stump.threshold ? pol : -pol);
      correct[i] = h == in.y_pm[i] ? 1 : 0;
    }
    // exp(alpha) takes only two values per round, so the update is two
    // constant multiplies plus renormalisation
    double f_correct = std::exp(-alpha);
    double f_wrong = std::exp(alpha);
    kernels::reweight(w.data(), correct.data(), f_correct, f_wrong, n);
    double z = kernels::sum(w.data(), n);
    for (size_t i = 0; i < n; ++i) w[i] /= z;

    model.stumps.push_back(fit.stump);
    model.stage_errors.push_back(eps);
    if (eps <= 1e-12) break;  // perfect stump, nothing more to learn
  }
  return model;
}

}  // namespace bball::detail
