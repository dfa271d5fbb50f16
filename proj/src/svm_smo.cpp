#include <algorithm>
#include <cmath>
#include <vector>

#include "bball/kernels.hpp"
#include "classifiers_impl.hpp"

namespace bball::detail {

namespace {

// Platt-style SMO with an error cache and a full kernel matrix (training sets
// here are a few hundred rows). All heuristics break ties by lowest index so
// the solver is fully deterministic.
class SmoSolver {
 public:
  SmoSolver(const FeatureMatrix& data, const std::vector<double>& y, double c, double gamma,
            double tol)
      : x_(data), y_(y), n_(data.n_rows), c_(c), gamma_(gamma), tol_(tol) {
    kernel_.resize(n_ * n_);
    for (size_t i = 0; i < n_; ++i) {
      kernel_[i * n_ + i] = 1.0;
      for (size_t j = i + 1; j < n_; ++j) {
        double k = std::exp(-gamma_ * kernels::l2sqr(x_.row(i), x_.row(j), x_.n_cols));
        kernel_[i * n_ + j] = k;
        kernel_[j * n_ + i] = k;
      }
    }
    alpha_.assign(n_, 0.0);
    errors_.resize(n_);
    for (size_t i = 0; i < n_; ++i) errors_[i] = -y_[i];  // f(x)=0 initially
  }

  void solve() {
    size_t updates = 0;
    const size_t max_updates = 200000;
    bool examine_all = true;
    while (updates < max_updates) {
      size_t changed = 0;
      if (examine_all) {
        for (size_t i = 0; i < n_; ++i) changed += examine(i);
      } else {
        for (size_t i = 0; i < n_; ++i)
          if (is_free(i)) changed += examine(i);
      }
      updates += changed;
      if (examine_all) {
        if (changed == 0) break;
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
  }

  double bias() const { return b_; }
  const std::vector<double>& alpha() const { return alpha_; }

 private:
  bool is_free(size_t i) const { return alpha_[i] > 0 && alpha_[i] < c_; }

  size_t examine(size_t i2) {
    double y2 = y_[i2];
    double a2 = alpha_[i2];
    double e2 = errors_[i2];
    double r2 = e2 * y2;
    bool violates = (r2 < -tol_ && a2 < c_) || (r2 > tol_ && a2 > 0);
    if (!violates) return 0;

    // second-choice heuristic: maximise |E1 - E2| over free multipliers
    size_t best = n_;
    double best_gap = -1;
    for (size_t i = 0; i < n_; ++i) {
      if (i == i2 || !is_free(i)) continue;
      double gap = std::abs(errors_[i] - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n_ && take_step(best, i2)) return 1;
    for (size_t i = 0; i < n_; ++i)
      if (i != i2 && is_free(i) && take_step(i, i2)) return 1;
    for (size_t i = 0; i < n_; ++i)
      if (i != i2 && !is_free(i) && take_step(i, i2)) return 1;
    return 0;
  }

  bool take_step(size_t i1, size_t i2) {
    double a1 = alpha_[i1], a2 = alpha_[i2];
    double y1 = y_[i1], y2 = y_[i2];
    double e1 = errors_[i1], e2 = errors_[i2];
    double s = y1 * y2;
    double lo, hi;
    if (s < 0) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c_, c_ + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c_);
      hi = std::min(c_, a1 + a2);
    }
    if (lo >= hi) return false;
    double k11 = kernel_[i1 * n_ + i1];
    double k12 = kernel_[i1 * n_ + i2];
    double k22 = kernel_[i2 * n_ + i2];
    double eta = k11 + k22 - 2 * k12;
    if (eta <= 0) return false;  // flat direction, skip

    double a2_new = a2 + y2 * (e1 - e2) / eta;
    a2_new = std::clamp(a2_new, lo, hi);
    if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;
    double a1_new = a1 + s * (a2 - a2_new);

    double b1 = b_ - e1 - y1 * (a1_new - a1) * k11 - y2 * (a2_new - a2) * k12;
    double b2 = b_ - e2 - y1 * (a1_new - a1) * k12 - y2 * (a2_new - a2) * k22;
    double b_new;
    if (a1_new > 0 && a1_new < c_)
      b_new = b1;
    else if (a2_new > 0 && a2_new < c_)
      b_new = b2;
    else
      b_new = 0.5 * (b1 + b2);

    double d1 = y1 * (a1_new - a1);
    double d2 = y2 * (a2_new - a2);
    double db = b_new - b_;
    for (size_t i = 0; i < n_; ++i)
      errors_[i] += d1 * kernel_[i1 * n_ + i] + d2 * kernel_[i2 * n_ + i] + db;

    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    b_ = b_new;
    return true;
  }

  const FeatureMatrix& x_;
  const std::vector<double>& y_;
  size_t n_;
  double c_, gamma_, tol_;
  double b_ = 0;
  std::vector<double> kernel_;
  std::vector<double> alpha_;
  std::vector<double> errors_;  // f(x_i) - y_i
};

}  // namespace

RbfSvmModel fit_rbf_svm(const TrainInput& in) {
  double c = in.param("C");
  double gamma = in.param("gamma");
  double tol = in.param("tol");
  if (c <= 0 || gamma <= 0) throw Error("rbf svm needs C > 0 and gamma > 0");

  SmoSolver solver(in.data, in.y_pm, c, gamma, tol);
  solver.solve();

  RbfSvmModel m;
  m.gamma = gamma;
  m.c = c;
  m.b = solver.bias();
  m.alpha = solver.alpha();
  m.y = in.y_pm;
  for (size_t i = 0; i < in.data.n_rows; ++i) {
    if (m.alpha[i] > 1e-12) {
      m.sv_coef.push_back(m.alpha[i] * in.y_pm[i]);
      m.sv.push_back(in.data.row_vec(i));
    }
  }
  return m;
}

}  // namespace bball::detail
