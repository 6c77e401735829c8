#include "fingergeo/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "fingergeo/errors.hpp"

namespace fingergeo::classify {

void KnnModel::validate() const {
  if (k < 1 || k > references.rows())
    throw ParamsOutOfRange("k must be in [1, reference rows]");
  if (references.rows() != static_cast<Eigen::Index>(labels.size()))
    throw LengthMismatch("reference/label count mismatch");
  if (weights.size() != references.cols())
    throw LengthMismatch("weight length must equal the active column count");
}

double wknn_distance(const Eigen::VectorXd& tr_row, const Eigen::VectorXd& ts_row,
                     const Eigen::VectorXd& weights) {
  if (tr_row.size() != ts_row.size() || tr_row.size() != weights.size())
    throw LengthMismatch("rows and weights must share a length");
  return std::sqrt(
      (weights.array() * (tr_row - ts_row).array().square()).sum());
}

double correlation_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw LengthMismatch("vectors must share a length");
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double denom = std::sqrt(da.square().sum() * db.square().sum());
  if (denom <= 0) return 1.0;
  return 1.0 - (da * db).sum() / denom;
}

namespace {

/// k nearest (distance, row) pairs; ties by distance resolved toward the
/// lower row index. Vote ties go to the label seen earliest in the ordering.
int vote(const std::vector<std::pair<double, int>>& dist, const std::vector<int>& labels,
         int k) {
  std::vector<int> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  const int kk = std::min<int>(k, static_cast<int>(dist.size()));
  std::partial_sort(order.begin(), order.begin() + kk, order.end(),
                    [&](int a, int b) { return dist[a] < dist[b]; });
  std::map<int, int> counts;
  for (int i = 0; i < kk; ++i) ++counts[labels[dist[order[i]].second]];
  int best = -1, best_count = -1;
  for (int i = 0; i < kk; ++i) {
    const int label = labels[dist[order[i]].second];
    if (counts[label] > best_count) {
      best = label;
      best_count = counts[label];
    }
  }
  return best;
}

}  // namespace

int wknn_classify(const KnnModel& model, const Eigen::VectorXd& probe) {
  model.validate();
  if (probe.size() != model.references.cols())
    throw LengthMismatch("probe length mismatch");
  std::vector<std::pair<double, int>> dist;
  dist.reserve(static_cast<std::size_t>(model.references.rows()));
  for (Eigen::Index i = 0; i < model.references.rows(); ++i)
    dist.emplace_back(
        wknn_distance(model.references.row(i), probe, model.weights),
        static_cast<int>(i));
  return vote(dist, model.labels, model.k);
}

// --- random forest -----------------------------------------------------------

namespace {

double gini(const std::vector<int>& counts, int total) {
  if (total == 0) return 0;
  double g = 1.0;
  for (const int c : counts) {
    const double p = static_cast<double>(c) / total;
    g -= p * p;
  }
  return g;
}

struct SplitCandidate {
  int feature = -1;
  double threshold = 0;
  double impurity = std::numeric_limits<double>::infinity();
};

int grow_node(Tree& tree, const Eigen::MatrixXd& values, const std::vector<int>& labels,
              std::vector<int> rows, int n_classes, std::mt19937_64& rng) {
  std::vector<int> counts(n_classes, 0);
  for (const int r : rows) ++counts[labels[r]];
  const int total = static_cast<int>(rows.size());

  const bool pure =
      std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;

  auto make_leaf = [&]() {
    TreeNode node;
    node.distribution = Eigen::VectorXd::Zero(n_classes);
    for (int c = 0; c < n_classes; ++c)
      node.distribution(c) = static_cast<double>(counts[c]) / total;
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  if (pure || total < 2) return make_leaf();

  // sqrt(d) random candidate features, sampled without replacement
  const int d = static_cast<int>(values.cols());
  const int m = std::max(1, static_cast<int>(std::floor(std::sqrt(d))));
  std::vector<int> features(d);
  std::iota(features.begin(), features.end(), 0);
  for (int i = 0; i < m; ++i) {
    const int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(d - i));
    std::swap(features[i], features[j]);
  }

  SplitCandidate best;
  std::vector<std::pair<double, int>> ordered(rows.size());
  for (int fi = 0; fi < m; ++fi) {
    const int f = features[fi];
    for (std::size_t i = 0; i < rows.size(); ++i)
      ordered[i] = {values(rows[i], f), rows[i]};
    std::sort(ordered.begin(), ordered.end());
    std::vector<int> left_counts(n_classes, 0);
    int left_total = 0;
    for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
      ++left_counts[labels[ordered[i].second]];
      ++left_total;
      if (ordered[i].first == ordered[i + 1].first) continue;
      std::vector<int> right_counts(n_classes, 0);
      for (int c = 0; c < n_classes; ++c)
        right_counts[c] = counts[c] - left_counts[c];
      const int right_total = total - left_total;
      const double impurity =
          (left_total * gini(left_counts, left_total) +
           right_total * gini(right_counts, right_total)) /
          total;
      if (impurity < best.impurity) {
        best.impurity = impurity;
        best.feature = f;
        best.threshold = 0.5 * (ordered[i].first + ordered[i + 1].first);
      }
    }
  }
  if (best.feature < 0) return make_leaf();  // all candidates constant

  std::vector<int> left_rows, right_rows;
  for (const int r : rows) {
    if (values(r, best.feature) <= best.threshold)
      left_rows.push_back(r);
    else
      right_rows.push_back(r);
  }
  if (left_rows.empty() || right_rows.empty()) return make_leaf();

  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  tree.nodes[index].feature = best.feature;
  tree.nodes[index].threshold = best.threshold;
  rows.clear();
  rows.shrink_to_fit();
  const int left = grow_node(tree, values, labels, std::move(left_rows), n_classes, rng);
  const int right = grow_node(tree, values, labels, std::move(right_rows), n_classes, rng);
  tree.nodes[index].left = left;
  tree.nodes[index].right = right;
  return index;
}

}  // namespace

const Eigen::VectorXd& Tree::leaf_distribution(const Eigen::VectorXd& row) const {
  int node = 0;
  while (!nodes[node].is_leaf())
    node = row(nodes[node].feature) <= nodes[node].threshold ? nodes[node].left
                                                             : nodes[node].right;
  return nodes[node].distribution;
}

std::vector<std::vector<int>> ForestModel::oob_rows(int n_rows) const {
  std::vector<std::vector<int>> oob(trees.size());
  for (std::size_t t = 0; t < trees.size(); ++t) {
    std::vector<char> in_bag(n_rows, 0);
    for (const int r : bootstraps[t]) in_bag[r] = 1;
    for (int r = 0; r < n_rows; ++r)
      if (!in_bag[r]) oob[t].push_back(r);
  }
  return oob;
}

ForestModel forest_train(const Eigen::MatrixXd& values, const std::vector<int>& labels,
                         int n_trees, std::uint64_t seed) {
  if (n_trees < 1) throw ParamsOutOfRange("n_trees must be >= 1");
  if (values.rows() != static_cast<Eigen::Index>(labels.size()))
    throw LengthMismatch("row/label count mismatch");
  const std::set<int> classes(labels.begin(), labels.end());
  if (classes.empty() || *classes.begin() < 0)
    throw DegenerateLabels("labels must be dense non-negative class ids");
  const int n_classes = *classes.rbegin() + 1;
  if (classes.size() < 2)
    throw DegenerateLabels("need at least 2 classes, got " +
                           std::to_string(classes.size()));

  const int n = static_cast<int>(values.rows());
  ForestModel model;
  model.n_classes = n_classes;
  model.seed = seed;
  model.trees.resize(n_trees);
  model.bootstraps.resize(n_trees);
  for (int t = 0; t < n_trees; ++t) {
    // per-tree engine so the forest is reproducible tree by tree
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(t) + 1);
    std::vector<int>& bag = model.bootstraps[t];
    bag.resize(n);
    for (int i = 0; i < n; ++i)
      bag[i] = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    grow_node(model.trees[t], values, labels, bag, n_classes, rng);
  }
  return model;
}

ForestPrediction forest_predict(const ForestModel& model, const Eigen::VectorXd& probe) {
  ForestPrediction pred;
  pred.scores = Eigen::VectorXd::Zero(model.n_classes);
  for (const Tree& tree : model.trees) pred.scores += tree.leaf_distribution(probe);
  pred.scores /= static_cast<double>(model.trees.size());
  pred.label = 0;
  for (int c = 1; c < model.n_classes; ++c)
    if (pred.scores(c) > pred.scores(pred.label)) pred.label = c;  // tie: smaller id
  return pred;
}

OobReport oob_error(const ForestModel& model, const Eigen::MatrixXd& values,
                    const std::vector<int>& labels) {
  const int n = static_cast<int>(values.rows());
  const int n_trees = static_cast<int>(model.trees.size());
  const auto oob = model.oob_rows(n);

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, model.n_classes);
  std::vector<int> votes(n, 0);
  OobReport report;
  report.errors.reserve(n_trees);
  for (int t = 0; t < n_trees; ++t) {
    for (const int r : oob[t]) {
      acc.row(r) += model.trees[t].leaf_distribution(values.row(r));
      ++votes[r];
    }
    int wrong = 0, counted = 0;
    for (int r = 0; r < n; ++r) {
      if (votes[r] == 0) continue;
      ++counted;
      int best = 0;
      for (int c = 1; c < model.n_classes; ++c)
        if (acc(r, c) > acc(r, best)) best = c;
      if (best != labels[r]) ++wrong;
    }
    report.errors.push_back(counted > 0 ? static_cast<double>(wrong) / counted : 0.0);
  }
  report.never_oob = static_cast<int>(std::count(votes.begin(), votes.end(), 0));
  report.mean = std::accumulate(report.errors.begin(), report.errors.end(), 0.0) /
                static_cast<double>(report.errors.size());
  report.minimum = *std::min_element(report.errors.begin(), report.errors.end());
  return report;
}

// --- cross validation ----------------------------------------------------------

CvReport kfold_cv(const Eigen::MatrixXd& values, const std::vector<int>& labels,
                  int folds, const CvConfig& config) {
  const int n = static_cast<int>(values.rows());
  if (folds < 2 || n < folds)
    throw TooFewRows("need at least " + std::to_string(folds) + " rows for " +
                     std::to_string(folds) + "-fold CV");

  // stratified: shuffle within each class, deal round-robin across folds
  std::map<int, std::vector<int>> by_class;
  for (int r = 0; r < n; ++r) by_class[labels[r]].push_back(r);
  std::mt19937_64 rng(config.seed);
  CvReport report;
  report.fold_of_row.assign(n, 0);
  int deal = 0;
  for (auto& [label, rows] : by_class) {
    for (std::size_t i = rows.size(); i > 1; --i) {
      const std::size_t j = rng() % i;
      std::swap(rows[i - 1], rows[j]);
    }
    for (const int r : rows) report.fold_of_row[r] = deal++ % folds;
  }

  Eigen::VectorXd weights = config.weights;
  if (weights.size() == 0)
    weights = Eigen::VectorXd::Constant(values.cols(), 1.0 / values.cols());

  for (int fold = 0; fold < folds; ++fold) {
    std::vector<int> train_rows, test_rows;
    for (int r = 0; r < n; ++r)
      (report.fold_of_row[r] == fold ? test_rows : train_rows).push_back(r);

    Eigen::MatrixXd train(train_rows.size(), values.cols());
    std::vector<int> train_labels(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      train.row(i) = values.row(train_rows[i]);
      train_labels[i] = labels[train_rows[i]];
    }

    int wrong = 0;
    if (config.classifier == CvClassifier::Forest) {
      const ForestModel forest =
          forest_train(train, train_labels, config.n_trees, config.seed + fold);
      for (const int r : test_rows)
        if (forest_predict(forest, values.row(r)).label != labels[r]) ++wrong;
    } else {
      for (const int r : test_rows) {
        std::vector<std::pair<double, int>> dist;
        dist.reserve(train_rows.size());
        for (Eigen::Index i = 0; i < train.rows(); ++i) {
          const double d =
              config.classifier == CvClassifier::CorrelationKnn
                  ? correlation_distance(train.row(i), values.row(r))
                  : wknn_distance(train.row(i), values.row(r), weights);
          dist.emplace_back(d, static_cast<int>(i));
        }
        if (vote(dist, train_labels, config.k) != labels[r]) ++wrong;
      }
    }
    report.fold_errors.push_back(static_cast<double>(wrong) / test_rows.size());
  }
  report.mean_error =
      std::accumulate(report.fold_errors.begin(), report.fold_errors.end(), 0.0) /
      folds;
  return report;
}

}  // namespace fingergeo::classify
