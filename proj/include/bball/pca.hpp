#pragma once

#include <vector>

#include "bball/features.hpp"

namespace bball {

/// Principal component projection: the top-c right singular vectors of the
/// centered data, via a Jacobi eigendecomposition of the covariance.
/// Sign convention: each direction's largest-magnitude entry is positive.
struct PcaProjection {
  size_t d = 0;  // input dimension
  size_t c = 0;  // components kept
  std::vector<double> mean;                // d
  std::vector<double> components;          // c x d, row-major
  std::vector<double> explained_variance;  // c eigenvalues, descending
};

PcaProjection pca_fit(const FeatureMatrix& m, size_t c);

/// Projects rows; output columns are named PC1..PCc. Labels and keys carry over.
FeatureMatrix pca_transform(const PcaProjection& p, const FeatureMatrix& m);

}  // namespace bball
