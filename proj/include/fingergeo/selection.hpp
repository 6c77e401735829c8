#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fingergeo::selection {

enum class Granularity { Global, Local };
enum class Ordering { Random, Rank };

const char* to_string(Granularity g);
const char* to_string(Ordering o);

/// Accuracy function psi: subset of column indices -> training accuracy in
/// [0, 1]. psi of the empty subset is 0 by convention.
using Evaluator = std::function<double(const Eigen::MatrixXd&,
                                       const std::vector<int>&,
                                       const std::vector<int>&)>;

struct SelectionConfig {
  double delta = 0.003;  // relevance threshold, 0 < delta < 1
  double epsilon = 0.0;  // redundancy threshold, 0 <= epsilon < delta
  Granularity granularity = Granularity::Local;
  Ordering ordering = Ordering::Rank;
  std::uint64_t seed = 0;  // shuffle seed for random ordering
  int group_size = 4;      // fingers per global group
  int knn_k = 3;           // k of the default leave-one-out evaluator
  Evaluator evaluator;     // empty -> leave-one-out k-NN

  void validate() const;
};

/// Training accuracies per candidate unit plus the derived ranks
/// (1 = most relevant).
struct FeatureRanking {
  std::vector<double> accuracies;
  std::vector<int> ranks;
};

struct ForwardPick {
  std::vector<int> columns;  // the accepted unit
  double gain = 0;
  double accuracy = 0;  // psi after acceptance
};

struct BackwardRemoval {
  std::vector<int> columns;  // the removed unit
  double change = 0;         // psi(after) - psi(before)
  double accuracy = 0;       // psi after removal
};

struct SelectionResult {
  double delta = 0;
  double epsilon = 0;
  Granularity granularity = Granularity::Local;
  Ordering ordering = Ordering::Rank;
  std::uint64_t seed = 0;

  std::vector<int> selected;          // column indices, acceptance order
  std::vector<double> accuracy_trace; // psi after each accept/remove step
  std::vector<ForwardPick> picks;
  std::vector<BackwardRemoval> removals;
  std::vector<double> unit_accuracies;  // singleton psi per candidate unit
  std::vector<int> unit_ranks;
  std::vector<double> unit_weights;     // Eq. 14 over the units

  int cardinality() const { return static_cast<int>(selected.size()); }
};

/// Leave-one-out k-NN accuracy over the given columns (plain Euclidean).
double loo_knn_accuracy(const Eigen::MatrixXd& values,
                        const std::vector<int>& labels,
                        const std::vector<int>& columns,
                        int k = 3);

/// Leave-one-out k-NN (k = 3) accuracy of every single feature column.
std::vector<double> per_feature_relevance(const Eigen::MatrixXd& values,
                                          const std::vector<int>& labels,
                                          int k = 3);

/// Rank 1 to the highest accuracy; ties go to the higher feature index.
FeatureRanking rank_features(const std::vector<double>& accuracies);

/// w_i = acc_i / sum(acc), so the weights sum to 1.
Eigen::VectorXd compute_weights(const std::vector<double>& accuracies);

/// Indices whose score >= threshold. Defaults to the mean of the scores when
/// threshold is NaN.
std::vector<int> threshold_filter(const std::vector<double>& scores,
                                  double threshold = std::numeric_limits<double>::quiet_NaN());

/// Finger-major columns regrouped feature-major: group i holds the same
/// feature across the group_size fingers.
std::vector<std::vector<int>> group_features(int n_columns, int group_size = 4);

SelectionResult forward_select(const Eigen::MatrixXd& values,
                               const std::vector<int>& labels,
                               const SelectionConfig& config);

SelectionResult backward_eliminate(const SelectionResult& forward,
                                   const Eigen::MatrixXd& values,
                                   const std::vector<int>& labels,
                                   const SelectionConfig& config);

/// forward_select then backward_eliminate: FoBa under random ordering,
/// R-FoBa under rank ordering.
SelectionResult foba(const Eigen::MatrixXd& values,
                     const std::vector<int>& labels,
                     const SelectionConfig& config);

}  // namespace fingergeo::selection
