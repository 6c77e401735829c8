#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace fingergeo::classify {

/// Weighted k-NN reference set; immutable after construction.
struct KnnModel {
  Eigen::MatrixXd references;
  std::vector<int> labels;
  Eigen::VectorXd weights;  // per active column, sums to 1
  int k = 3;

  void validate() const;
};

/// sqrt(sum_i w_i * (a_i - b_i)^2).
double wknn_distance(const Eigen::VectorXd& tr_row, const Eigen::VectorXd& ts_row,
                     const Eigen::VectorXd& weights);

/// 1 - Pearson correlation; zero-variance vectors give distance 1.
double correlation_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Majority vote among the k nearest by weighted distance; vote ties go to
/// the nearest neighbor's label.
int wknn_classify(const KnnModel& model, const Eigen::VectorXd& probe);

// --- random forest ---------------------------------------------------------

struct TreeNode {
  int feature = -1;
  double threshold = 0;
  int left = -1, right = -1;
  Eigen::VectorXd distribution;  // leaf only: class probabilities
  bool is_leaf() const { return left < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  const Eigen::VectorXd& leaf_distribution(const Eigen::VectorXd& row) const;
};

struct ForestModel {
  std::vector<Tree> trees;
  std::vector<std::vector<int>> bootstraps;  // row indices drawn per tree
  int n_classes = 0;
  std::uint64_t seed = 0;

  /// Rows absent from the tree's bootstrap sample.
  std::vector<std::vector<int>> oob_rows(int n_rows) const;
};

/// Bagged Gini trees: bootstrap resample per tree, sqrt(n_features) random
/// candidate columns per node, grown until pure (min leaf 1).
ForestModel forest_train(const Eigen::MatrixXd& values, const std::vector<int>& labels,
                         int n_trees = 150, std::uint64_t seed = 0);

struct ForestPrediction {
  int label = 0;
  Eigen::VectorXd scores;  // mean of per-tree leaf distributions, sums to 1
};

ForestPrediction forest_predict(const ForestModel& model, const Eigen::VectorXd& probe);

/// Out-of-bag error curve: error(t) classifies each row with the oob trees
/// among the first t; rows oob for no tree are skipped and counted.
struct OobReport {
  std::vector<double> errors;  // per tree count 1..n_trees
  double mean = 0;             // over the curve (Table 9 style)
  double minimum = 0;
  int never_oob = 0;  // rows in every bootstrap of the full forest
};

OobReport oob_error(const ForestModel& model, const Eigen::MatrixXd& values,
                    const std::vector<int>& labels);

// --- cross validation --------------------------------------------------------

enum class CvClassifier { WeightedKnn, CorrelationKnn, Forest };

struct CvConfig {
  CvClassifier classifier = CvClassifier::WeightedKnn;
  int k = 3;
  Eigen::VectorXd weights;  // empty -> uniform
  int n_trees = 150;
  std::uint64_t seed = 0;
};

struct CvReport {
  std::vector<double> fold_errors;
  double mean_error = 0;
  std::vector<int> fold_of_row;  // fold assignment per row
};

/// Stratified k-fold cross validation.
CvReport kfold_cv(const Eigen::MatrixXd& values, const std::vector<int>& labels,
                  int folds = 10, const CvConfig& config = {});

}  // namespace fingergeo::classify
