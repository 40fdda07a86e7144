#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ipd {

struct ForestParams {
  std::size_t trees = 100;
  std::size_t min_leaf = 1;
  // 0 means ceil(sqrt(feature count)).
  std::size_t max_features = 0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

// CART classification tree stored as flat nodes.
struct TreeNode {
  // Leaf when feature < 0.
  int feature = -1;
  double threshold = 0.0;
  std::size_t left = 0, right = 0;
  std::vector<double> class_counts;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
  std::vector<std::size_t> bootstrap;  // sampled row indices
  std::vector<double> importance;      // impurity decrease per feature, normalized

  const TreeNode& leaf(const std::vector<double>& x) const;
};

struct ForestModel {
  std::size_t classes = 0;
  std::size_t features = 0;
  std::vector<DecisionTree> trees;
  std::vector<double> importances;  // sum to 1
  double oob_score = 0.0;           // accuracy of out-of-bag majority votes

  std::size_t predict(const std::vector<double>& x) const;
  double score(const std::vector<std::vector<double>>& x, const std::vector<std::size_t>& y) const;
};

// Random forest on bootstrap samples with Gini splits and max_features
// candidates per split. Labels are 0..C-1. Throws InsufficientData with
// fewer than 2 classes.
ForestModel forest_fit(const std::vector<std::vector<double>>& x, const std::vector<std::size_t>& y,
                       const ForestParams& params = {});

struct SplitIndices {
  std::vector<std::size_t> train, test;
};

// Deterministic shuffled split; `train_fraction` of rows go to training.
SplitIndices train_test_split(std::size_t rows, double train_fraction, std::uint64_t seed);

struct ForestEvaluation {
  ForestModel model;
  double holdout_score = 0.0;
  std::size_t train_rows = 0, test_rows = 0;
};

// Fits on a 70/30 (by default) split and scores the holdout.
ForestEvaluation evaluate_forest(const std::vector<std::vector<double>>& x, const std::vector<std::size_t>& y,
                                 const ForestParams& params = {}, double train_fraction = 0.7);

}  // namespace ipd
