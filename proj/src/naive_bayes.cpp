#include <algorithm>
#include <cmath>

#include "classifiers_impl.hpp"

namespace bball::detail {

NbModel fit_naive_bayes(const TrainInput& in) {
  size_t d = in.data.n_cols;
  size_t n = in.data.n_rows;
  NbModel m;
  m.mean1.assign(d, 0.0);
  m.mean2.assign(d, 0.0);
  m.var1.assign(d, 0.0);
  m.var2.assign(d, 0.0);
  size_t n1 = 0, n2 = 0;
  for (size_t i = 0; i < n; ++i) {
    const double* row = in.data.row(i);
    if (in.y1[i]) {
      ++n1;
      for (size_t j = 0; j < d; ++j) m.mean1[j] += row[j];
    } else {
      ++n2;
      for (size_t j = 0; j < d; ++j) m.mean2[j] += row[j];
    }
  }
  for (size_t j = 0; j < d; ++j) {
    m.mean1[j] /= static_cast<double>(n1);
    m.mean2[j] /= static_cast<double>(n2);
  }
  for (size_t i = 0; i < n; ++i) {
    const double* row = in.data.row(i);
    if (in.y1[i])
      for (size_t j = 0; j < d; ++j) m.var1[j] += (row[j] - m.mean1[j]) * (row[j] - m.mean1[j]);
    else
      for (size_t j = 0; j < d; ++j) m.var2[j] += (row[j] - m.mean2[j]) * (row[j] - m.mean2[j]);
  }
  for (size_t j = 0; j < d; ++j) {
    m.var1[j] /= static_cast<double>(n1);
    m.var2[j] /= static_cast<double>(n2);
  }
  // Variance smoothing: a fixed fraction of the largest pooled feature
  // variance keeps near-constant features from collapsing the likelihood.
  double max_var = 0;
  for (size_t j = 0; j < d; ++j) {
    double mu = 0;
    for (size_t i = 0; i < n; ++i) mu += in.data.at(i, j);
    mu /= static_cast<double>(n);
    double v = 0;
    for (size_t i = 0; i < n; ++i) v += (in.data.at(i, j) - mu) * (in.data.at(i, j) - mu);
    max_var = std::max(max_var, v / static_cast<double>(n));
  }
  double eps = in.param("var_smoothing") * std::max(max_var, 1e-300);
  if (eps <= 0) eps = 1e-300;
  for (size_t j = 0; j < d; ++j) {
    m.var1[j] += eps;
    m.var2[j] += eps;
  }
  m.log_prior1 = std::log(static_cast<double>(n1) / static_cast<double>(n));
  m.log_prior2 = std::log(static_cast<double>(n2) / static_cast<double>(n));
  return m;
}

}  // namespace bball::detail
