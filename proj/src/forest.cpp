#include "ipd/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "ipd/errors.hpp"
#include "ipd/rng.hpp"

namespace ipd {

namespace {

using Matrix = std::vector<std::vector<double>>;

double gini(const std::vector<double>& counts, double total) {
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : counts) s += (c / total) * (c / total);
  return 1.0 - s;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<std::size_t>& y, std::size_t classes,
              std::size_t max_features, std::size_t min_leaf, Rng& rng)
      : x_(x), y_(y), classes_(classes), max_features_(max_features), min_leaf_(min_leaf), rng_(rng) {}

  DecisionTree build(std::vector<std::size_t> rows) {
    tree_.importance.assign(x_.front().size(), 0.0);
    tree_.bootstrap = rows;
    total_ = static_cast<double>(rows.size());
    grow(rows);
    const double sum = std::accumulate(tree_.importance.begin(), tree_.importance.end(), 0.0);
    if (sum > 0.0) {
      for (auto& v : tree_.importance) v /= sum;
    }
    return std::move(tree_);
  }

 private:
  std::size_t grow(std::vector<std::size_t>& rows) {
    const std::size_t id = tree_.nodes.size();
    tree_.nodes.emplace_back();
    std::vector<double> counts(classes_, 0.0);
    for (auto r : rows) counts[y_[r]] += 1.0;
    const double n = static_cast<double>(rows.size());
    const double impurity = gini(counts, n);
    tree_.nodes[id].class_counts = counts;
    if (impurity <= 0.0 || rows.size() < 2 * min_leaf_) return id;

    const Split split = best_split(rows, counts, impurity);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows) (x_[r][split.feature] <= split.threshold ? left : right).push_back(r);
    tree_.importance[static_cast<std::size_t>(split.feature)] += (n / total_) * split.gain;
    rows.clear();
    rows.shrink_to_fit();
    const std::size_t l = grow(left);
    const std::size_t rt = grow(right);
    TreeNode& node = tree_.nodes[id];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = rt;
    node.class_counts = {};
    return id;
  }

  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
  };

  // Draws features without replacement; keeps drawing past max_features
  // only while no valid split has been found.
  Split best_split(const std::vector<std::size_t>& rows, const std::vector<double>& counts, double impurity) {
    const std::size_t p = x_.front().size();
    std::vector<std::size_t> feats(p);
    std::iota(feats.begin(), feats.end(), 0);
    Split best;
    std::vector<std::pair<double, std::size_t>> vals(rows.size());
    std::vector<double> left(classes_);
    const double n = static_cast<double>(rows.size());
    for (std::size_t i = 0; i < p; ++i) {
      if (i >= max_features_ && best.feature >= 0) break;
      const auto j = static_cast<std::size_t>(rng_.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(p) - 1));
      std::swap(feats[i], feats[j]);
      const std::size_t f = feats[i];
      for (std::size_t r = 0; r < rows.size(); ++r) vals[r] = {x_[rows[r]][f], y_[rows[r]]};
      std::sort(vals.begin(), vals.end());
      if (vals.front().first == vals.back().first) continue;
      std::fill(left.begin(), left.end(), 0.0);
      std::vector<double> right = counts;
      for (std::size_t r = 0; r + 1 < vals.size(); ++r) {
        left[vals[r].second] += 1.0;
        right[vals[r].second] -= 1.0;
        if (vals[r].first == vals[r + 1].first) continue;
        const double nl = static_cast<double>(r + 1), nr = n - nl;
        if (nl < static_cast<double>(min_leaf_) || nr < static_cast<double>(min_leaf_)) continue;
        const double gain = impurity - (nl / n) * gini(left, nl) - (nr / n) * gini(right, nr);
        if (gain > best.gain + 1e-15 || best.feature < 0) {
          best.feature = static_cast<int>(f);
          best.threshold = vals[r].first + (vals[r + 1].first - vals[r].first) / 2.0;
          if (!(best.threshold < vals[r + 1].first)) best.threshold = vals[r].first;
          best.gain = gain;
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  const std::vector<std::size_t>& y_;
  std::size_t classes_, max_features_, min_leaf_;
  Rng& rng_;
  DecisionTree tree_;
  double total_ = 1.0;
};

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

const TreeNode& DecisionTree::leaf(const std::vector<double>& x) const {
  const TreeNode* node = &nodes.front();
  while (node->feature >= 0) {
    node = &nodes[x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right];
  }
  return *node;
}

std::size_t ForestModel::predict(const std::vector<double>& x) const {
  std::vector<double> votes(classes, 0.0);
  for (const auto& t : trees) {
    const auto& counts = t.leaf(x).class_counts;
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    for (std::size_t c = 0; c < classes; ++c) votes[c] += counts[c] / total;
  }
  return argmax(votes);
}

double ForestModel::score(const Matrix& x, const std::vector<std::size_t>& y) const {
  if (x.empty()) throw InsufficientData("scoring needs rows", 1);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < x.size(); ++i) hits += predict(x[i]) == y[i];
  return static_cast<double>(hits) / static_cast<double>(x.size());
}

ForestModel forest_fit(const Matrix& x, const std::vector<std::size_t>& y, const ForestParams& params) {
  if (x.empty() || x.size() != y.size()) throw InsufficientData("forest needs labelled rows", 2);
  ForestModel model;
  model.features = x.front().size();
  model.classes = *std::max_element(y.begin(), y.end()) + 1;
  std::vector<bool> present(model.classes, false);
  for (auto c : y) present[c] = true;
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw InsufficientData("forest needs at least two classes", 2);
  }
  const std::size_t mtry = params.max_features
                               ? std::min(params.max_features, model.features)
                               : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(model.features))));
  const std::size_t rows = x.size();
  model.trees.resize(params.trees);

  auto fit_tree = [&](std::size_t t) {
    Rng rng(mix_seed({params.seed, t}));
    std::vector<std::size_t> sample(rows);
    for (auto& s : sample) s = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(rows) - 1));
    TreeBuilder builder(x, y, model.classes, mtry, std::max<std::size_t>(params.min_leaf, 1), rng);
    model.trees[t] = builder.build(std::move(sample));
  };
  const std::size_t workers = std::clamp<std::size_t>(params.workers, 1, std::max<std::size_t>(params.trees, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < params.trees; t += workers) fit_tree(t);
      });
    }
  }

  model.importances.assign(model.features, 0.0);
  for (const auto& t : model.trees) {
    for (std::size_t f = 0; f < model.features; ++f) model.importances[f] += t.importance[f];
  }
  const double sum = std::accumulate(model.importances.begin(), model.importances.end(), 0.0);
  for (auto& v : model.importances) v = sum > 0.0 ? v / sum : 1.0 / static_cast<double>(model.features);

  std::vector<std::vector<double>> votes(rows, std::vector<double>(model.classes, 0.0));
  std::vector<bool> voted(rows, false);
  for (const auto& t : model.trees) {
    std::vector<bool> in_bag(rows, false);
    for (auto s : t.bootstrap) in_bag[s] = true;
    for (std::size_t i = 0; i < rows; ++i) {
      if (in_bag[i]) continue;
      const auto& counts = t.leaf(x[i]).class_counts;
      const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
      for (std::size_t c = 0; c < model.classes; ++c) votes[i][c] += counts[c] / total;
      voted[i] = true;
    }
  }
  std::size_t hits = 0, seen = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!voted[i]) continue;
    ++seen;
    hits += argmax(votes[i]) == y[i];
  }
  model.oob_score = seen ? static_cast<double>(hits) / static_cast<double>(seen) : 0.0;
  return model;
}

SplitIndices train_test_split(std::size_t rows, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed({seed, 0x73706c6974ULL}));
  for (std::size_t i = rows; i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
  }
  const auto cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(rows)));
  SplitIndices s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
  return s;
}

ForestEvaluation evaluate_forest(const Matrix& x, const std::vector<std::size_t>& y, const ForestParams& params,
                                 double train_fraction) {
  if (x.size() < 10) throw InsufficientData("forest evaluation needs rows", 10);
  const SplitIndices split = train_test_split(x.size(), train_fraction, params.seed);
  Matrix xtr, xte;
  std::vector<std::size_t> ytr, yte;
  for (auto i : split.train) {
    xtr.push_back(x[i]);
    ytr.push_back(y[i]);
  }
  for (auto i : split.test) {
    xte.push_back(x[i]);
    yte.push_back(y[i]);
  }
  ForestEvaluation ev;
  ev.model = forest_fit(xtr, ytr, params);
  ev.holdout_score = ev.model.score(xte, yte);
  ev.train_rows = xtr.size();
  ev.test_rows = xte.size();
  return ev;
}

}  // namespace ipd
