#include <algorithm>
#include <cmath>

#include "bball/kernels.hpp"
#include "classifiers_impl.hpp"

namespace bball {

namespace {

// Stable ln(1 + e^u).
double softplus(double u) {
  if (u > 0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

}  // namespace

// Mean logistic loss over rows plus (l2/2)*||w||^2; the intercept is not
// penalised. l2 = 1/(C*n) so C behaves as the usual inverse regularisation
// strength on the summed loss.
double logistic_objective(const FeatureMatrix& data, std::span<const double> params,
                          double l2_strength) {
  size_t d = data.n_cols, n = data.n_rows;
  double loss = 0;
  for (size_t i = 0; i < n; ++i) {
    double z = kernels::dot(data.row(i), params.data(), d) + params[d];
    double y = data.labels[i] == Label::HomeWin ? 1.0 : -1.0;
    loss += softplus(-y * z);
  }
  loss /= static_cast<double>(n);
  double penalty = 0;
  for (size_t j = 0; j < d; ++j) penalty += params[j] * params[j];
  return loss + 0.5 * l2_strength * penalty;
}

void logistic_gradient(const FeatureMatrix& data, std::span<const double> params,
                       double l2_strength, std::span<double> grad_out) {
  size_t d = data.n_cols, n = data.n_rows;
  std::fill(grad_out.begin(), grad_out.end(), 0.0);
  for (size_t i = 0; i < n; ++i) {
    double z = kernels::dot(data.row(i), params.data(), d) + params[d];
    double y = data.labels[i] == Label::HomeWin ? 1.0 : -1.0;
    double coef = -y * detail::sigmoid(-y * z);  // d softplus(-yz) / dz
    kernels::axpy(coef, data.row(i), grad_out.data(), d);
    grad_out[d] += coef;
  }
  double inv_n = 1.0 / static_cast<double>(n);
  for (size_t j = 0; j <= d; ++j) grad_out[j] *= inv_n;
  for (size_t j = 0; j < d; ++j) grad_out[j] += l2_strength * params[j];
}

namespace detail {

LinearModel fit_logistic_regression(const TrainInput& in) {
  size_t d = in.data.n_cols;
  size_t n = in.data.n_rows;
  double l2 = 1.0 / (in.param("C") * static_cast<double>(n));
  double tol = in.param("tol");
  int max_iter = in.iparam("max_iter");

  std::vector<double> params(d + 1, 0.0), grad(d + 1), trial(d + 1);
  double obj = logistic_objective(in.data, params, l2);
  for (int iter = 0; iter < max_iter; ++iter) {
    logistic_gradient(in.data, params, l2, grad);
    double gnorm = 0, gsq = 0;
    for (double g : grad) {
      gnorm = std::max(gnorm, std::abs(g));
      gsq += g * g;
    }
    if (gnorm <= tol) break;
    // Armijo backtracking keeps the fixed-step scheme robust without tuning.
    double step = 1.0;
    for (int bt = 0; bt < 60; ++bt) {
      for (size_t j = 0; j <= d; ++j) trial[j] = params[j] - step * grad[j];
      double trial_obj = logistic_objective(in.data, trial, l2);
      if (trial_obj <= obj - 0.5 * step * gsq) {
        params.swap(trial);
        obj = trial_obj;
        break;
      }
      step *= 0.5;
    }
  }
  LinearModel m;
  m.w.assign(params.begin(), params.begin() + d);
  m.b = params[d];
  return m;
}

// Full-batch subgradient descent on the hinge loss, Pegasos-style step decay,
// fixed epoch count.
LinearModel fit_linear_svm(const TrainInput& in) {
  size_t d = in.data.n_cols;
  size_t n = in.data.n_rows;
  double lambda = 1.0 / (in.param("C") * static_cast<double>(n));
  int epochs = in.iparam("epochs");

  std::vector<double> w(d, 0.0);
  double b = 0;
  std::vector<double> gw(d);
  for (int t = 1; t <= epochs; ++t) {
    double eta = 1.0 / (lambda * static_cast<double>(t));
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0;
    for (size_t i = 0; i < n; ++i) {
      double y = in.y_pm[i];
      double z = kernels::dot(in.data.row(i), w.data(), d) + b;
      if (y * z < 1.0) {
        kernels::axpy(y, in.data.row(i), gw.data(), d);
        gb += y;
      }
    }
    double inv_n = 1.0 / static_cast<double>(n);
    double shrink = 1.0 - eta * lambda;
    for (size_t j = 0; j < d; ++j) w[j] = shrink * w[j] + eta * inv_n * gw[j];
    b += eta * inv_n * gb;
  }
  LinearModel m;
  m.w = std::move(w);
  m.b = b;
  return m;
}

namespace {

// Cholesky solve of S x = rhs; returns false when S is not positive definite.
bool cholesky_solve(std::vector<double> s, size_t d, std::vector<double> rhs,
                    std::vector<double>& out) {
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j <= i; ++j) {
      double acc = s[i * d + j];
      for (size_t k = 0; k < j; ++k) acc -= s[i * d + k] * s[j * d + k];
      if (i == j) {
        if (acc <= 0) return false;
        s[i * d + j] = std::sqrt(acc);
      } else {
        s[i * d + j] = acc / s[j * d + j];
      }
    }
  }
  for (size_t i = 0; i < d; ++i) {
    double acc = rhs[i];
    for (size_t k = 0; k < i; ++k) acc -= s[i * d + k] * rhs[k];
    rhs[i] = acc / s[i * d + i];
  }
  out.assign(d, 0.0);
  for (size_t ii = d; ii-- > 0;) {
    double acc = rhs[ii];
    for (size_t k = ii + 1; k < d; ++k) acc -= s[k * d + ii] * out[k];
    out[ii] = acc / s[ii * d + ii];
  }
  return true;
}

}  // namespace

// Two-class LDA: pooled covariance, Gaussian posterior through a sigmoid.
LinearModel fit_discriminant(const TrainInput& in) {
  size_t d = in.data.n_cols;
  size_t n = in.data.n_rows;
  std::vector<double> mu1(d, 0.0), mu2(d, 0.0);
  size_t n1 = 0, n2 = 0;
  for (size_t i = 0; i < n; ++i) {
    const double* row = in.data.row(i);
    if (in.y1[i]) {
      ++n1;
      for (size_t j = 0; j < d; ++j) mu1[j] += row[j];
    } else {
      ++n2;
      for (size_t j = 0; j < d; ++j) mu2[j] += row[j];
    }
  }
  for (size_t j = 0; j < d; ++j) {
    mu1[j] /= static_cast<double>(n1);
    mu2[j] /= static_cast<double>(n2);
  }
  std::vector<double> cov(d * d, 0.0);
  std::vector<double> centered(d);
  for (size_t i = 0; i < n; ++i) {
    const double* row = in.data.row(i);
    const std::vector<double>& mu = in.y1[i] ? mu1 : mu2;
    for (size_t j = 0; j < d; ++j) centered[j] = row[j] - mu[j];
    for (size_t j = 0; j < d; ++j)
      for (size_t k = 0; k <= j; ++k) cov[j * d + k] += centered[j] * centered[k];
  }
  double denom = static_cast<double>(n >= d + 2 ? n - 2 : n);
  for (size_t j = 0; j < d; ++j)
    for (size_t k = 0; k <= j; ++k) {
      cov[j * d + k] /= denom;
      cov[k * d + j] = cov[j * d + k];
    }

  std::vector<double> delta(d), w;
  for (size_t j = 0; j < d; ++j) delta[j] = mu1[j] - mu2[j];
  double jitter = 0;
  for (size_t j = 0; j < d; ++j) jitter += cov[j * d + j];
  jitter = std::max(jitter / static_cast<double>(d), 1.0) * 1e-10;
  for (int attempt = 0; attempt < 12; ++attempt) {
    if (cholesky_solve(cov, d, delta, w)) break;
    for (size_t j = 0; j < d; ++j) cov[j * d + j] += jitter;
    jitter *= 10;
    w.clear();
  }
  if (w.empty()) throw Error("discriminant analysis: covariance not invertible");

  double mid = 0;
  for (size_t j = 0; j < d; ++j) mid += w[j] * 0.5 * (mu1[j] + mu2[j]);
  LinearModel m;
  m.w = std::move(w);
  m.b = -mid + std::log(static_cast<double>(n1) / static_cast<double>(n2));
  return m;
}

}  // namespace detail
}  // namespace bball
