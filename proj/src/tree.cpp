#include <algorithm>
#include <cmath>
#include <numeric>

#include "classifiers_impl.hpp"

namespace bball::detail {

double tree_eval(const TreeModel& t, std::span<const double> x) {
  int node = 0;
  while (t.nodes[node].feature >= 0) {
    const TreeNode& nd = t.nodes[node];
    node = x[nd.feature] < nd.threshold ? nd.left : nd.right;
  }
  return t.nodes[node].value;
}

namespace {

struct SplitChoice {
  bool found = false;
  size_t feature = 0;
  double threshold = 0;
  double score = -1;  // larger is better
};

// Candidate features for one node: all of them, or `mtry` sampled without
// replacement from the node's generator, returned in ascending order so the
// scan order stays canonical.
std::vector<size_t> candidate_features(size_t d, const TreeConfig& cfg) {
  if (cfg.mtry == 0 || cfg.mtry >= d || cfg.rng == nullptr) {
    std::vector<size_t> all(d);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<size_t> pool(d);
  std::iota(pool.begin(), pool.end(), 0);
  for (size_t i = 0; i < cfg.mtry; ++i) {
    size_t j = i + static_cast<size_t>(cfg.rng->next_below(d - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(cfg.mtry);
  std::sort(pool.begin(), pool.end());
  return pool;
}

template <typename LeafFn, typename ScoreFn, typename PureFn>
int grow(const Cols& x, std::vector<size_t>& sample, size_t begin, size_t end, int depth,
         const TreeConfig& cfg, std::vector<TreeNode>& nodes, const LeafFn& make_leaf,
         const ScoreFn& best_split_for_feature, const PureFn& is_pure) {
  size_t count = end - begin;
  bool depth_stop = cfg.max_depth > 0 && depth >= cfg.max_depth;
  int node_id = static_cast<int>(nodes.size());
  nodes.push_back(TreeNode{});

  SplitChoice best;
  if (!depth_stop && count >= static_cast<size_t>(cfg.min_samples_split) &&
      !is_pure(begin, end)) {
    for (size_t f : candidate_features(x.d, cfg)) {
      SplitChoice cand = best_split_for_feature(f, begin, end);
      if (cand.found && (!best.found || cand.score > best.score)) best = cand;
    }
  }
  if (!best.found) {
    nodes[node_id].value = make_leaf(begin, end);
    return node_id;
  }

  const double* col = x.col(best.feature);
  auto mid = std::stable_partition(sample.begin() + begin, sample.begin() + end,
                                   [&](size_t i) { return col[i] < best.threshold; });
  size_t split_at = static_cast<size_t>(mid - sample.begin());

  nodes[node_id].feature = static_cast<int>(best.feature);
  nodes[node_id].threshold = best.threshold;
  int left = grow(x, sample, begin, split_at, depth + 1, cfg, nodes, make_leaf,
                  best_split_for_feature, is_pure);
  int right = grow(x, sample, split_at, end, depth + 1, cfg, nodes, make_leaf,
                   best_split_for_feature, is_pure);
  nodes[node_id].left = left;
  nodes[node_id].right = right;
  return node_id;
}

}  // namespace

TreeModel build_classification_tree(const Cols& x, const std::vector<uint8_t>& y1,
                                    std::vector<size_t> sample, const TreeConfig& cfg) {
  TreeModel tree;
  if (sample.empty()) throw Error("tree fitted on zero rows");

  std::vector<std::pair<double, uint8_t>> scratch;

  auto make_leaf = [&](size_t begin, size_t end) {
    size_t ones = 0;
    for (size_t i = begin; i < end; ++i) ones += y1[sample[i]];
    return static_cast<double>(ones) / static_cast<double>(end - begin);
  };

  // Maximising sum over children of (c1^2 + c0^2) / n_child is equivalent to
  // minimising weighted Gini; counts keep it exact in doubles.
  auto best_split = [&](size_t f, size_t begin, size_t end) {
    SplitChoice choice;
    const double* col = x.col(f);
    size_t count = end - begin;
    scratch.clear();
    scratch.reserve(count);
    for (size_t i = begin; i < end; ++i) scratch.emplace_back(col[sample[i]], y1[sample[i]]);
    std::sort(scratch.begin(), scratch.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double total_ones = 0;
    for (const auto& [v, y] : scratch) total_ones += y;
    double left_n = 0, left_ones = 0;
    for (size_t i = 0; i + 1 < count; ++i) {
      left_n += 1;
      left_ones += scratch[i].second;
      if (scratch[i].first == scratch[i + 1].first) continue;
      double right_n = static_cast<double>(count) - left_n;
      double right_ones = total_ones - left_ones;
      double left_zeros = left_n - left_ones;
      double right_zeros = right_n - right_ones;
      double score = (left_ones * left_ones + left_zeros * left_zeros) / left_n +
                     (right_ones * right_ones + right_zeros * right_zeros) / right_n;
      if (!choice.found || score > choice.score) {
        choice.found = true;
        choice.feature = f;
        choice.threshold = scratch[i].first + 0.5 * (scratch[i + 1].first - scratch[i].first);
        choice.score = score;
      }
    }
    return choice;
  };

  auto is_pure = [&](size_t begin, size_t end) {
    size_t ones = 0;
    for (size_t i = begin; i < end; ++i) ones += y1[sample[i]];
    return ones == 0 || ones == end - begin;
  };
  grow(x, sample, 0, sample.size(), 0, cfg, tree.nodes, make_leaf, best_split, is_pure);
  return tree;
}

TreeModel build_regression_tree(const Cols& x, const std::vector<double>& grad,
                                const std::vector<double>& hess, std::vector<size_t> sample,
                                const TreeConfig& cfg) {
  TreeModel tree;
  if (sample.empty()) throw Error("tree fitted on zero rows");

  std::vector<std::pair<double, double>> scratch;  // (feature value, gradient)

  auto make_leaf = [&](size_t begin, size_t end) {
    double g = 0, h = 0;
    for (size_t i = begin; i < end; ++i) {
      g += grad[sample[i]];
      h += hess[sample[i]];
    }
    return g / std::max(h, 1e-12);
  };

  // Variance-reduction split on the gradients: maximise sum_l^2/n_l + sum_r^2/n_r.
  auto best_split = [&](size_t f, size_t begin, size_t end) {
    SplitChoice choice;
    const double* col = x.col(f);
    size_t count = end - begin;
    scratch.clear();
    scratch.reserve(count);
    for (size_t i = begin; i < end; ++i) scratch.emplace_back(col[sample[i]], grad[sample[i]]);
    std::sort(scratch.begin(), scratch.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double total = 0;
    for (const auto& [v, g] : scratch) total += g;
    double left_n = 0, left_sum = 0;
    for (size_t i = 0; i + 1 < count; ++i) {
      left_n += 1;
      left_sum += scratch[i].second;
      if (scratch[i].first == scratch[i + 1].first) continue;
      double right_n = static_cast<double>(count) - left_n;
      double right_sum = total - left_sum;
      double score = left_sum * left_sum / left_n + right_sum * right_sum / right_n;
      if (!choice.found || score > choice.score) {
        choice.found = true;
        choice.feature = f;
        choice.threshold = scratch[i].first + 0.5 * (scratch[i + 1].first - scratch[i].first);
        choice.score = score;
      }
    }
    return choice;
  };

  // A regression node is "pure" when all gradients coincide.
  auto is_pure = [&](size_t begin, size_t end) {
    double first = grad[sample[begin]];
    for (size_t i = begin + 1; i < end; ++i)
      if (grad[sample[i]] != first) return false;
    return true;
  };
  grow(x, sample, 0, sample.size(), 0, cfg, tree.nodes, make_leaf, best_split, is_pure);
  return tree;
}

TreeModel fit_decision_tree(const TrainInput& in) {
  Cols cols(in.data);
  TreeConfig cfg;
  cfg.max_depth = in.iparam("max_depth");
  cfg.min_samples_split = in.iparam("min_samples_split");
  std::vector<size_t> sample(in.data.n_rows);
  std::iota(sample.begin(), sample.end(), 0);
  return build_classification_tree(cols, in.y1, std::move(sample), cfg);
}

}  // namespace bball::detail
