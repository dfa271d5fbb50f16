#include "bball/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bball {

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. `a` is destroyed;
// eigenvectors come back as columns of `v`.
void jacobi_eigen(std::vector<double>& a, size_t d, std::vector<double>& eigenvalues,
                  std::vector<double>& v) {
  v.assign(d * d, 0.0);
  for (size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (size_t p = 0; p < d; ++p)
      for (size_t q = p + 1; q < d; ++q) off += a[p * d + q] * a[p * d + q];
    if (off < 1e-24) break;

    for (size_t p = 0; p < d; ++p) {
      for (size_t q = p + 1; q < d; ++q) {
        double apq = a[p * d + q];
        if (apq == 0.0) continue;
        double app = a[p * d + p], aqq = a[q * d + q];
        double theta = (aqq - app) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (size_t k = 0; k < d; ++k) {
          double akp = a[k * d + p], akq = a[k * d + q];
          a[k * d + p] = c * akp - s * akq;
          a[k * d + q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < d; ++k) {
          double apk = a[p * d + k], aqk = a[q * d + k];
          a[p * d + k] = c * apk - s * aqk;
          a[q * d + k] = s * apk + c * aqk;
        }
        for (size_t k = 0; k < d; ++k) {
          double vkp = v[k * d + p], vkq = v[k * d + q];
          v[k * d + p] = c * vkp - s * vkq;
          v[k * d + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  eigenvalues.resize(d);
  for (size_t i = 0; i < d; ++i) eigenvalues[i] = a[i * d + i];
}

}  // namespace

PcaProjection pca_fit(const FeatureMatrix& m, size_t c) {
  size_t d = m.n_cols, n = m.n_rows;
  if (c < 1 || c > d)
    throw Error("component count " + std::to_string(c) + " outside [1, " + std::to_string(d) +
                "]");
  if (n < 2) throw Error("principal components need at least 2 rows");

  PcaProjection p;
  p.d = d;
  p.c = c;
  p.mean.assign(d, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < d; ++j) p.mean[j] += m.at(i, j);
  for (size_t j = 0; j < d; ++j) p.mean[j] /= static_cast<double>(n);

  std::vector<double> cov(d * d, 0.0);
  std::vector<double> centered(d);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < d; ++j) centered[j] = m.at(i, j) - p.mean[j];
    for (size_t j = 0; j < d; ++j)
      for (size_t k = 0; k <= j; ++k) cov[j * d + k] += centered[j] * centered[k];
  }
  double denom = static_cast<double>(n - 1);
  for (size_t j = 0; j < d; ++j)
    for (size_t k = 0; k <= j; ++k) {
      cov[j * d + k] /= denom;
      cov[k * d + j] = cov[j * d + k];
    }

  std::vector<double> eigenvalues, v;
  jacobi_eigen(cov, d, eigenvalues, v);

  std::vector<size_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return eigenvalues[a] > eigenvalues[b]; });

  p.components.resize(c * d);
  p.explained_variance.resize(c);
  for (size_t r = 0; r < c; ++r) {
    size_t col = idx[r];
    p.explained_variance[r] = eigenvalues[col];
    size_t peak = 0;
    for (size_t j = 1; j < d; ++j)
      if (std::abs(v[j * d + col]) > std::abs(v[peak * d + col])) peak = j;
    double sign = v[peak * d + col] < 0 ? -1.0 : 1.0;
    for (size_t j = 0; j < d; ++j) p.components[r * d + j] = sign * v[j * d + col];
  }
  return p;
}

FeatureMatrix pca_transform(const PcaProjection& p, const FeatureMatrix& m) {
  if (m.n_cols != p.d) throw Error("projection/matrix dimension mismatch");
  FeatureMatrix out;
  out.n_rows = m.n_rows;
  out.n_cols = p.c;
  out.labels = m.labels;
  out.row_keys = m.row_keys;
  for (size_t r = 0; r < p.c; ++r) out.column_names.push_back("PC" + std::to_string(r + 1));
  out.values.resize(m.n_rows * p.c);
  std::vector<double> centered(p.d);
  for (size_t i = 0; i < m.n_rows; ++i) {
    for (size_t j = 0; j < p.d; ++j) centered[j] = m.at(i, j) - p.mean[j];
    for (size_t r = 0; r < p.c; ++r) {
      double acc = 0;
      for (size_t j = 0; j < p.d; ++j) acc += p.components[r * p.d + j] * centered[j];
      out.at(i, r) = acc;
    }
  }
  return out;
}

}  // namespace bball
