#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bball/domain.hpp"
#include "bball/features.hpp"

namespace bball {

enum class Algorithm {
  LR,          // logistic regression, batch gradient descent
  SVM_LINEAR,  // hinge loss + L2, deterministic subgradient descent
  SVM_RBF,     // soft-margin dual via SMO
  DT,          // CART with Gini impurity
  RF,          // bagged CART with feature subsampling
  NB,          // Gaussian naive Bayes
  GB,          // gradient boosting on logistic loss
  KNN,         // k nearest neighbours, Euclidean
  DA,          // linear discriminant analysis
  ADA,         // discrete AdaBoost on stumps, unit learning rate
  ADA2,        // AdaBoost with tunable learning rate
};

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm a);
const std::vector<Algorithm>& all_algorithms();

using Params = std::map<std::string, double>;

struct ModelSpec {
  Algorithm algorithm = Algorithm::LR;
  Params hyper_params;  // keys restricted to the algorithm's declared set
  uint64_t seed = 0;
};

/// Declared hyper-parameter names and defaults for one algorithm. Anything
/// not overridden in ModelSpec::hyper_params uses the default.
const Params& default_params(Algorithm a);

namespace detail {
struct ModelImpl;
}

struct AdaBoostStages;
struct SvmDual;

/// An immutable fitted model. Prediction is read-only and safe to share
/// across threads.
class TrainedModel {
 public:
  double predict_proba(std::span<const double> x) const;  // P(label 1)
  Label predict_label(std::span<const double> x) const;
  double predict_proba(const std::vector<double>& x) const {
    return predict_proba(std::span<const double>(x));
  }
  Label predict_label(const std::vector<double>& x) const {
    return predict_label(std::span<const double>(x));
  }

  size_t n_features() const;
  const ModelSpec& spec() const;

  void save(const std::string& path) const;
  static TrainedModel load(const std::string& path);

 private:
  friend TrainedModel train(const ModelSpec&, const FeatureMatrix&);
  friend AdaBoostStages adaboost_stages(const TrainedModel&);
  friend SvmDual svm_dual(const TrainedModel&);
  explicit TrainedModel(std::shared_ptr<const detail::ModelImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::ModelImpl> impl_;
};

/// Fits `spec` on the matrix rows and labels. Deterministic given
/// (spec.seed, X, y). Throws on single-class labels, non-finite entries, or
/// unknown hyper-parameter keys.
TrainedModel train(const ModelSpec& spec, const FeatureMatrix& data);

/// Game outcome from the two team-level win probabilities; ties go home.
inline Label combine_team_predictions(double p_home, double p_away) {
  return p_home >= p_away ? Label::HomeWin : Label::AwayWin;
}

/// Logistic loss + L2 penalty used by the LR trainer, exposed so its gradient
/// can be cross-checked against finite differences of the same objective.
/// Parameter layout: params[0..d-1] = weights, params[d] = intercept.
double logistic_objective(const FeatureMatrix& data, std::span<const double> params,
                          double l2_strength);
void logistic_gradient(const FeatureMatrix& data, std::span<const double> params,
                       double l2_strength, std::span<double> grad_out);

/// AdaBoost fit diagnostics for one model, for bound/feasibility checks.
struct AdaBoostStages {
  std::vector<double> errors;  // weighted error of each accepted stump
  std::vector<double> alphas;
};
AdaBoostStages adaboost_stages(const TrainedModel& m);

/// SMO dual variables (alpha_i) and labels (+-1) for feasibility checks.
struct SvmDual {
  std::vector<double> alpha;
  std::vector<double> y;
  double c = 0;
};
SvmDual svm_dual(const TrainedModel& m);

}  // namespace bball
