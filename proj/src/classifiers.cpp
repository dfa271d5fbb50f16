#include "bball/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "bball/kernels.hpp"
#include "classifiers_impl.hpp"

namespace bball {

using detail::ModelImpl;
using nlohmann::json;

namespace {

const std::vector<std::pair<Algorithm, std::string>>& name_table() {
  static const std::vector<std::pair<Algorithm, std::string>> table = {
      {Algorithm::LR, "LR"},   {Algorithm::SVM_LINEAR, "SVM_LINEAR"},
      {Algorithm::SVM_RBF, "SVM_RBF"}, {Algorithm::DT, "DT"},
      {Algorithm::RF, "RF"},   {Algorithm::NB, "NB"},
      {Algorithm::GB, "GB"},   {Algorithm::KNN, "KNN"},
      {Algorithm::DA, "DA"},   {Algorithm::ADA, "ADA"},
      {Algorithm::ADA2, "ADA2"}};
  return table;
}

}  // namespace

Algorithm algorithm_from_string(const std::string& name) {
  for (const auto& [algo, n] : name_table())
    if (n == name) return algo;
  throw Error("unknown algorithm '" + name + "'");
}

std::string to_string(Algorithm a) {
  for (const auto& [algo, n] : name_table())
    if (algo == a) return n;
  throw Error("unknown algorithm id");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = [] {
    std::vector<Algorithm> v;
    for (const auto& [algo, n] : name_table()) v.push_back(algo);
    return v;
  }();
  return all;
}

const Params& default_params(Algorithm a) {
  static const std::map<Algorithm, Params> defaults = {
      {Algorithm::LR, {{"C", 1.0}, {"tol", 1e-6}, {"max_iter", 5000}}},
      {Algorithm::SVM_LINEAR, {{"C", 1.0}, {"epochs", 1000}}},
      {Algorithm::SVM_RBF, {{"C", 1.0}, {"gamma", 1.0}, {"tol", 1e-3}}},
      {Algorithm::DT, {{"max_depth", 0}, {"min_samples_split", 2}}},
      {Algorithm::RF,
       {{"n_estimators", 100},
        {"max_depth", 0},
        {"min_samples_split", 2},
        {"bootstrap", 1},
        {"max_features", 0}}},
      {Algorithm::NB, {{"var_smoothing", 1e-9}}},
      {Algorithm::GB,
       {{"n_estimators", 100}, {"learning_rate", 0.1}, {"max_depth", 3},
        {"min_samples_split", 2}}},
      {Algorithm::KNN, {{"k", 5}}},
      {Algorithm::DA, {}},
      {Algorithm::ADA, {{"n_estimators", 50}}},
      {Algorithm::ADA2, {{"n_estimators", 50}, {"learning_rate", 1.0}}},
  };
  return defaults.at(a);
}

TrainedModel train(const ModelSpec& spec, const FeatureMatrix& data) {
  if (data.n_rows < 2) throw Error("training needs at least 2 rows");
  if (data.labels.size() != data.n_rows) throw Error("label count does not match rows");

  detail::TrainInput in{data, default_params(spec.algorithm), spec.seed, {}, {}};
  for (const auto& [key, value] : spec.hyper_params) {
    if (!in.params.count(key))
      throw Error("algorithm " + to_string(spec.algorithm) + " has no hyper-parameter '" + key +
                  "'");
    in.params[key] = value;
  }

  for (double v : data.values)
    if (!std::isfinite(v)) throw Error("training matrix contains non-finite values");

  in.y_pm.resize(data.n_rows);
  in.y1.resize(data.n_rows);
  size_t ones = 0;
  for (size_t i = 0; i < data.n_rows; ++i) {
    bool one = data.labels[i] == Label::HomeWin;
    in.y_pm[i] = one ? 1.0 : -1.0;
    in.y1[i] = one ? 1 : 0;
    ones += one;
  }
  if (ones == 0 || ones == data.n_rows)
    throw Error("training labels contain a single class; need both outcomes");

  auto impl = std::make_shared<ModelImpl>();
  impl->spec = spec;
  impl->spec.hyper_params = in.params;  // resolved values, for provenance
  impl->n_features = data.n_cols;
  switch (spec.algorithm) {
    case Algorithm::LR: impl->model = detail::fit_logistic_regression(in); break;
    case Algorithm::SVM_LINEAR: impl->model = detail::fit_linear_svm(in); break;
    case Algorithm::SVM_RBF: impl->model = detail::fit_rbf_svm(in); break;
    case Algorithm::DT: impl->model = detail::fit_decision_tree(in); break;
    case Algorithm::RF: impl->model = detail::fit_random_forest(in); break;
    case Algorithm::NB: impl->model = detail::fit_naive_bayes(in); break;
    case Algorithm::GB: impl->model = detail::fit_gradient_boosting(in); break;
    case Algorithm::KNN: impl->model = detail::fit_knn(in); break;
    case Algorithm::DA: impl->model = detail::fit_discriminant(in); break;
    case Algorithm::ADA: impl->model = detail::fit_adaboost(in, 1.0); break;
    case Algorithm::ADA2: impl->model = detail::fit_adaboost(in, in.param("learning_rate")); break;
  }
  return TrainedModel(std::move(impl));
}

namespace {

double eval_proba(const ModelImpl& impl, std::span<const double> x) {
  using namespace detail;
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          return sigmoid(kernels::dot(m.w.data(), x.data(), x.size()) + m.b);
        } else if constexpr (std::is_same_v<T, RbfSvmModel>) {
          double f = m.b;
          for (size_t i = 0; i < m.sv.size(); ++i)
            f += m.sv_coef[i] *
                 std::exp(-m.gamma * kernels::l2sqr(m.sv[i].data(), x.data(), x.size()));
          return sigmoid(f);
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          return tree_eval(m, x);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          double acc = 0;
          for (const auto& t : m.trees) acc += tree_eval(t, x);
          return acc / static_cast<double>(m.trees.size());
        } else if constexpr (std::is_same_v<T, GbModel>) {
          double f = m.f0;
          for (const auto& t : m.trees) f += m.learning_rate * tree_eval(t, x);
          return sigmoid(f);
        } else if constexpr (std::is_same_v<T, NbModel>) {
          double l1 = m.log_prior1, l2 = m.log_prior2;
          for (size_t j = 0; j < x.size(); ++j) {
            l1 += -0.5 * std::log(2 * M_PI * m.var1[j]) -
                  (x[j] - m.mean1[j]) * (x[j] - m.mean1[j]) / (2 * m.var1[j]);
            l2 += -0.5 * std::log(2 * M_PI * m.var2[j]) -
                  (x[j] - m.mean2[j]) * (x[j] - m.mean2[j]) / (2 * m.var2[j]);
          }
          double hi = std::max(l1, l2);
          double e1 = std::exp(l1 - hi), e2 = std::exp(l2 - hi);
          return e1 / (e1 + e2);
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          std::vector<std::pair<double, size_t>> dist(m.n);
          for (size_t i = 0; i < m.n; ++i)
            dist[i] = {kernels::l2sqr(m.rows.data() + i * m.d, x.data(), m.d), i};
          size_t k = static_cast<size_t>(m.k);
          std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
          size_t ones = 0;
          for (size_t i = 0; i < k; ++i) ones += m.y1[dist[i].second];
          return static_cast<double>(ones) / static_cast<double>(k);
        } else if constexpr (std::is_same_v<T, AdaModel>) {
          double score = 0;
          for (const auto& s : m.stumps) {
            double h = x[s.feature] >= s.threshold ? s.polarity : -s.polarity;
            score += s.alpha * h;
          }
          return sigmoid(score);
        }
      },
      impl.model);
}

}  // namespace

double TrainedModel::predict_proba(std::span<const double> x) const {
  if (x.size() != impl_->n_features)
    throw Error("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                std::to_string(impl_->n_features));
  return eval_proba(*impl_, x);
}

Label TrainedModel::predict_label(std::span<const double> x) const {
  return label_from_probability(predict_proba(x));
}

size_t TrainedModel::n_features() const { return impl_->n_features; }
const ModelSpec& TrainedModel::spec() const { return impl_->spec; }

AdaBoostStages adaboost_stages(const TrainedModel& m) {
  const auto* ada = std::get_if<detail::AdaModel>(&m.impl_->model);
  if (!ada) throw Error("model is not an AdaBoost ensemble");
  AdaBoostStages out;
  out.errors = ada->stage_errors;
  for (const auto& s : ada->stumps) out.alphas.push_back(s.alpha);
  return out;
}

SvmDual svm_dual(const TrainedModel& m) {
  const auto* svm = std::get_if<detail::RbfSvmModel>(&m.impl_->model);
  if (!svm) throw Error("model is not an RBF SVM");
  return SvmDual{svm->alpha, svm->y, svm->c};
}

// ---------------------------------------------------------------------------
// serialization

namespace {

using detail::AdaModel;
using detail::ForestModel;
using detail::GbModel;
using detail::KnnModel;
using detail::LinearModel;
using detail::NbModel;
using detail::RbfSvmModel;
using detail::TreeModel;

json tree_to_json(const TreeModel& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right},
                     {"v", n.value}});
  return {{"nodes", nodes}};
}

TreeModel tree_from_json(const json& j) {
  TreeModel t;
  for (const auto& n : j.at("nodes"))
    t.nodes.push_back(detail::TreeNode{n.at("f"), n.at("t"), n.at("l"), n.at("r"), n.at("v")});
  return t;
}

json model_to_json(const detail::ModelVariant& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          return {{"w", m.w}, {"b", m.b}};
        } else if constexpr (std::is_same_v<T, RbfSvmModel>) {
          return {{"gamma", m.gamma}, {"b", m.b},       {"sv_coef", m.sv_coef},
                  {"sv", m.sv},       {"alpha", m.alpha}, {"y", m.y},
                  {"c", m.c}};
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          return tree_to_json(m);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          json trees = json::array();
          for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
          return {{"trees", trees}};
        } else if constexpr (std::is_same_v<T, GbModel>) {
          json trees = json::array();
          for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
          return {{"f0", m.f0}, {"learning_rate", m.learning_rate}, {"trees", trees}};
        } else if constexpr (std::is_same_v<T, NbModel>) {
          return {{"log_prior1", m.log_prior1}, {"log_prior2", m.log_prior2},
                  {"mean1", m.mean1},           {"mean2", m.mean2},
                  {"var1", m.var1},             {"var2", m.var2}};
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          return {{"k", m.k}, {"n", m.n}, {"d", m.d}, {"rows", m.rows}, {"y1", m.y1}};
        } else if constexpr (std::is_same_v<T, AdaModel>) {
          json stumps = json::array();
          for (const auto& s : m.stumps)
            stumps.push_back(
                {{"f", s.feature}, {"t", s.threshold}, {"p", s.polarity}, {"a", s.alpha}});
          return {{"stumps", stumps}, {"stage_errors", m.stage_errors}};
        }
      },
      model);
}

detail::ModelVariant model_from_json(Algorithm algo, const json& j) {
  switch (algo) {
    case Algorithm::LR:
    case Algorithm::SVM_LINEAR:
    case Algorithm::DA: {
      LinearModel m;
      m.w = j.at("w").get<std::vector<double>>();
      m.b = j.at("b");
      return m;
    }
    case Algorithm::SVM_RBF: {
      RbfSvmModel m;
      m.gamma = j.at("gamma");
      m.b = j.at("b");
      m.sv_coef = j.at("sv_coef").get<std::vector<double>>();
      m.sv = j.at("sv").get<std::vector<std::vector<double>>>();
      m.alpha = j.at("alpha").get<std::vector<double>>();
      m.y = j.at("y").get<std::vector<double>>();
      m.c = j.at("c");
      return m;
    }
    case Algorithm::DT: return tree_from_json(j);
    case Algorithm::RF: {
      ForestModel m;
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
      return m;
    }
    case Algorithm::GB: {
      GbModel m;
      m.f0 = j.at("f0");
      m.learning_rate = j.at("learning_rate");
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
      return m;
    }
    case Algorithm::NB: {
      NbModel m;
      m.log_prior1 = j.at("log_prior1");
      m.log_prior2 = j.at("log_prior2");
      m.mean1 = j.at("mean1").get<std::vector<double>>();
      m.mean2 = j.at("mean2").get<std::vector<double>>();
      m.var1 = j.at("var1").get<std::vector<double>>();
      m.var2 = j.at("var2").get<std::vector<double>>();
      return m;
    }
    case Algorithm::KNN: {
      KnnModel m;
      m.k = j.at("k");
      m.n = j.at("n");
      m.d = j.at("d");
      m.rows = j.at("rows").get<std::vector<double>>();
      m.y1 = j.at("y1").get<std::vector<uint8_t>>();
      return m;
    }
    case Algorithm::ADA:
    case Algorithm::ADA2: {
      AdaModel m;
      for (const auto& s : j.at("stumps"))
        m.stumps.push_back(detail::Stump{s.at("f"), s.at("t"), s.at("p"), s.at("a")});
      m.stage_errors = j.at("stage_errors").get<std::vector<double>>();
      return m;
    }
  }
  throw Error("unknown algorithm id in model file");
}

constexpr const char* kModelFormat = "bball-model/1";

}  // namespace

void TrainedModel::save(const std::string& path) const {
  json j;
  j["format"] = kModelFormat;
  j["algorithm"] = to_string(impl_->spec.algorithm);
  j["seed"] = impl_->spec.seed;
  j["hyper_params"] = impl_->spec.hyper_params;
  j["n_features"] = impl_->n_features;
  j["model"] = model_to_json(impl_->model);
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

TrainedModel TrainedModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("model file '" + path + "' is not valid JSON: " + e.what());
  }
  if (j.value("format", "") != kModelFormat)
    throw Error("model file '" + path + "' has unsupported format '" +
                j.value("format", "<missing>") + "'");
  auto impl = std::make_shared<ModelImpl>();
  impl->spec.algorithm = algorithm_from_string(j.at("algorithm"));
  impl->spec.seed = j.at("seed");
  impl->spec.hyper_params = j.at("hyper_params").get<Params>();
  impl->n_features = j.at("n_features");
  impl->model = model_from_json(impl->spec.algorithm, j.at("model"));
  return TrainedModel(std::move(impl));
}

}  // namespace bball
