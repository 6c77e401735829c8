#include "fingergeo/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "fingergeo/errors.hpp"

namespace fingergeo::selection {

const char* to_string(Granularity g) {
  return g == Granularity::Global ? "global" : "local";
}
const char* to_string(Ordering o) { return o == Ordering::Rank ? "rank" : "random"; }

void SelectionConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0))
    throw ParamsOutOfRange("delta out of range: must satisfy 0 < delta < 1");
  if (epsilon < 0.0 || epsilon >= delta)
    throw ParamsOutOfRange("epsilon out of range: must satisfy 0 <= epsilon < delta");
  if (group_size < 1) throw ParamsOutOfRange("group_size must be >= 1");
}

namespace {

void check_labels(const std::vector<int>& labels) {
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  if (counts.size() < 2)
    throw DegenerateLabels("need at least 2 classes, got " +
                           std::to_string(counts.size()));
  for (const auto& [label, n] : counts)
    if (n < 2)
      throw DegenerateLabels("class " + std::to_string(label) +
                             " has fewer than 2 samples");
}

/// Majority vote among the k nearest rows (ties by distance broken toward the
/// lower row index; vote ties toward the nearest neighbor's label).
int vote_nearest(const std::vector<std::pair<double, int>>& sorted_neighbors,
                 const std::vector<int>& labels, int k) {
  const int kk = std::min<int>(k, static_cast<int>(sorted_neighbors.size()));
  std::map<int, int> counts;
  for (int i = 0; i < kk; ++i) ++counts[labels[sorted_neighbors[i].second]];
  int best = -1, best_count = -1;
  for (int i = 0; i < kk; ++i) {
    const int label = labels[sorted_neighbors[i].second];
    if (counts[label] > best_count) {
      best = label;
      best_count = counts[label];
    }
  }
  return best;
}

}  // namespace

double loo_knn_accuracy(const Eigen::MatrixXd& values,
                        const std::vector<int>& labels,
                        const std::vector<int>& columns,
                        int k) {
  if (columns.empty()) return 0.0;  // psi of the empty subset
  const Eigen::Index n = values.rows();
  Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j)
    sub.col(static_cast<Eigen::Index>(j)) = values.col(columns[j]);

  int correct = 0;
  std::vector<std::pair<double, int>> neighbors;
  for (Eigen::Index i = 0; i < n; ++i) {
    neighbors.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      neighbors.emplace_back((sub.row(i) - sub.row(j)).squaredNorm(),
                             static_cast<int>(j));
    }
    std::sort(neighbors.begin(), neighbors.end());
    if (vote_nearest(neighbors, labels, k) == labels[static_cast<int>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

std::vector<double> per_feature_relevance(const Eigen::MatrixXd& values,
                                          const std::vector<int>& labels,
                                          int k) {
  if (values.rows() != static_cast<Eigen::Index>(labels.size()))
    throw LengthMismatch("row/label count mismatch");
  check_labels(labels);
  std::vector<double> acc(static_cast<std::size_t>(values.cols()));
  for (Eigen::Index c = 0; c < values.cols(); ++c)
    acc[static_cast<std::size_t>(c)] =
        loo_knn_accuracy(values, labels, {static_cast<int>(c)}, k);
  return acc;
}

FeatureRanking rank_features(const std::vector<double>& accuracies) {
  const int n = static_cast<int>(accuracies.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // descending accuracy; ties go to the higher feature index
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (accuracies[a] != accuracies[b]) return accuracies[a] > accuracies[b];
    return a > b;
  });
  FeatureRanking ranking;
  ranking.accuracies = accuracies;
  ranking.ranks.assign(n, 0);
  for (int pos = 0; pos < n; ++pos) ranking.ranks[order[pos]] = pos + 1;
  return ranking;
}

Eigen::VectorXd compute_weights(const std::vector<double>& accuracies) {
  const double sum = std::accumulate(accuracies.begin(), accuracies.end(), 0.0);
  if (sum <= 0) throw AllZeroRelevance();
  Eigen::VectorXd w(static_cast<Eigen::Index>(accuracies.size()));
  for (std::size_t i = 0; i < accuracies.size(); ++i)
    w(static_cast<Eigen::Index>(i)) = accuracies[i] / sum;
  return w;
}

std::vector<int> threshold_filter(const std::vector<double>& scores, double threshold) {
  double th = threshold;
  if (std::isnan(th)) {
    th = std::accumulate(scores.begin(), scores.end(), 0.0) /
         static_cast<double>(scores.size());
  }
  if (!std::isfinite(th)) throw ParamsOutOfRange("threshold must be finite");
  std::vector<int> kept;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] >= th) kept.push_back(static_cast<int>(i));
  return kept;
}

std::vector<std::vector<int>> group_features(int n_columns, int group_size) {
  if (group_size < 1 || n_columns % group_size != 0)
    throw BadLayout(std::to_string(n_columns) + " columns cannot form groups of " +
                    std::to_string(group_size));
  const int per_finger = n_columns / group_size;
  std::vector<std::vector<int>> groups(per_finger);
  for (int feature = 0; feature < per_finger; ++feature)
    for (int finger = 0; finger < group_size; ++finger)
      groups[feature].push_back(feature + finger * per_finger);
  return groups;
}

namespace {

struct Units {
  std::vector<std::vector<int>> candidates;
  std::vector<double> accuracies;  // singleton psi per unit, candidate order
  std::vector<int> ranks;
  std::vector<double> weights;
  std::vector<int> visit_order;  // indices into candidates
};

Evaluator make_evaluator(const SelectionConfig& config) {
  if (config.evaluator) return config.evaluator;
  const int k = config.knn_k;
  return [k](const Eigen::MatrixXd& v, const std::vector<int>& l,
             const std::vector<int>& cols) { return loo_knn_accuracy(v, l, cols, k); };
}

Units build_units(const Eigen::MatrixXd& values, const std::vector<int>& labels,
                  const SelectionConfig& config, const Evaluator& psi) {
  Units u;
  if (config.granularity == Granularity::Global) {
    u.candidates = group_features(static_cast<int>(values.cols()), config.group_size);
  } else {
    for (int c = 0; c < values.cols(); ++c) u.candidates.push_back({c});
  }
  for (const auto& unit : u.candidates)
    u.accuracies.push_back(psi(values, labels, unit));
  const FeatureRanking ranking = rank_features(u.accuracies);
  u.ranks = ranking.ranks;
  {
    const Eigen::VectorXd w = compute_weights(u.accuracies);
    u.weights.assign(w.data(), w.data() + w.size());
  }

  const int n = static_cast<int>(u.candidates.size());
  u.visit_order.resize(n);
  std::iota(u.visit_order.begin(), u.visit_order.end(), 0);
  if (config.ordering == Ordering::Rank) {
    std::sort(u.visit_order.begin(), u.visit_order.end(),
              [&](int a, int b) { return u.ranks[a] < u.ranks[b]; });
  } else {
    // seeded Fisher-Yates so runs reproduce across platforms
    std::mt19937_64 rng(config.seed);
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(u.visit_order[i], u.visit_order[j]);
    }
  }
  return u;
}

}  // namespace

SelectionResult forward_select(const Eigen::MatrixXd& values,
                               const std::vector<int>& labels,
                               const SelectionConfig& config) {
  config.validate();
  if (values.rows() == 0 || values.cols() == 0)
    throw EmptyInput("empty feature matrix");
  if (values.rows() != static_cast<Eigen::Index>(labels.size()))
    throw LengthMismatch("row/label count mismatch");

  const Evaluator psi = make_evaluator(config);
  const Units units = build_units(values, labels, config, psi);

  SelectionResult result;
  result.delta = config.delta;
  result.epsilon = config.epsilon;
  result.granularity = config.granularity;
  result.ordering = config.ordering;
  result.seed = config.seed;
  result.unit_accuracies = units.accuracies;
  result.unit_ranks = units.ranks;
  result.unit_weights = units.weights;

  // the most pertinent unit seeds the subset; ties toward the earlier visit
  int first = units.visit_order.front();
  for (const int idx : units.visit_order)
    if (units.accuracies[idx] > units.accuracies[first]) first = idx;

  std::vector<int> selected = units.candidates[first];
  double current = units.accuracies[first];
  result.picks.push_back({units.candidates[first], current, current});
  result.accuracy_trace.push_back(current);

  for (const int idx : units.visit_order) {
    if (idx == first) continue;
    std::vector<int> trial = selected;
    trial.insert(trial.end(), units.candidates[idx].begin(), units.candidates[idx].end());
    const double accuracy = psi(values, labels, trial);
    const double gain = accuracy - current;
    if (gain >= config.delta) {
      selected = std::move(trial);
      current = accuracy;
      result.picks.push_back({units.candidates[idx], gain, accuracy});
      result.accuracy_trace.push_back(accuracy);
    }
  }
  result.selected = std::move(selected);
  return result;
}

SelectionResult backward_eliminate(const SelectionResult& forward,
                                   const Eigen::MatrixXd& values,
                                   const std::vector<int>& labels,
                                   const SelectionConfig& config) {
  config.validate();
  if (forward.selected.empty()) throw EmptyInput("forward subset is empty");

  const Evaluator psi = make_evaluator(config);
  SelectionResult result = forward;

  std::vector<std::vector<int>> units;
  for (const ForwardPick& pick : result.picks) units.push_back(pick.columns);

  std::vector<bool> removed(units.size(), false);
  double current = psi(values, labels, result.selected);

  // single pass in acceptance order (Algorithm 2's loop)
  for (std::size_t i = 0; i < units.size(); ++i) {
    std::vector<int> trial;
    for (std::size_t j = 0; j < units.size(); ++j) {
      if (removed[j] || j == i) continue;
      trial.insert(trial.end(), units[j].begin(), units[j].end());
    }
    const double accuracy = psi(values, labels, trial);
    const double change = accuracy - current;
    const bool helps = change >= config.delta;              // removal raises psi
    const bool redundant = std::abs(change) <= config.epsilon;
    if (helps || redundant) {
      removed[i] = true;
      current = accuracy;
      result.removals.push_back({units[i], change, accuracy});
      result.accuracy_trace.push_back(accuracy);
    }
  }

  std::vector<int> kept;
  for (std::size_t j = 0; j < units.size(); ++j)
    if (!removed[j]) kept.insert(kept.end(), units[j].begin(), units[j].end());
  result.selected = std::move(kept);
  return result;
}

SelectionResult foba(const Eigen::MatrixXd& values,
                     const std::vector<int>& labels,
                     const SelectionConfig& config) {
  const SelectionResult forward = forward_select(values, labels, config);
  return backward_eliminate(forward, values, labels, config);
}

}  // namespace fingergeo::selection
