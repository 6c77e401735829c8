#include "fingergeo/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fingergeo/errors.hpp"

namespace fingergeo::eval {

std::pair<features::FeatureMatrix, features::FeatureMatrix> split_enroll_probe(
    const features::FeatureMatrix& matrix, int enrolled_per_subject,
    int probes_per_subject) {
  std::map<std::string, std::vector<int>> rows_of;
  for (Eigen::Index r = 0; r < matrix.rows(); ++r)
    rows_of[matrix.subjects[static_cast<std::size_t>(r)]].push_back(
        static_cast<int>(r));

  std::vector<int> enroll_rows, probe_rows;
  for (auto& [subject, rows] : rows_of) {
    std::sort(rows.begin(), rows.end(), [&](int a, int b) {
      return matrix.samples[a] < matrix.samples[b];
    });
    if (static_cast<int>(rows.size()) < enrolled_per_subject + probes_per_subject)
      throw TooFewRows("subject '" + subject + "' has " +
                       std::to_string(rows.size()) + " samples, protocol needs " +
                       std::to_string(enrolled_per_subject + probes_per_subject));
    for (int i = 0; i < enrolled_per_subject; ++i) enroll_rows.push_back(rows[i]);
    for (int i = 0; i < probes_per_subject; ++i)
      probe_rows.push_back(rows[enrolled_per_subject + i]);
  }

  auto take = [&](const std::vector<int>& idx) {
    features::FeatureMatrix out;
    out.column_names = matrix.column_names;
    out.values.resize(static_cast<Eigen::Index>(idx.size()), matrix.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out.values.row(static_cast<Eigen::Index>(i)) = matrix.values.row(idx[i]);
      out.subjects.push_back(matrix.subjects[idx[i]]);
      out.samples.push_back(matrix.samples[idx[i]]);
    }
    return out;
  };
  return {take(enroll_rows), take(probe_rows)};
}

double identify(const features::FeatureMatrix& enrolled,
                const features::FeatureMatrix& probes,
                const Eigen::VectorXd& weights,
                const IdentificationProtocol& protocol) {
  if (enrolled.cols() != probes.cols())
    throw LengthMismatch("enrolled and probe matrices have different columns");
  if (probes.rows() == 0) throw TooFewRows("no probe rows");

  std::map<std::string, int> class_of;
  for (const std::string& s : enrolled.subjects)
    class_of.emplace(s, static_cast<int>(class_of.size()));
  for (const std::string& s : probes.subjects)
    if (!class_of.contains(s)) throw UnknownSubject(s);

  std::vector<int> labels;
  labels.reserve(enrolled.subjects.size());
  for (const std::string& s : enrolled.subjects) labels.push_back(class_of[s]);

  int correct = 0;
  if (protocol.classifier == ClassifierKind::Forest) {
    const classify::ForestModel forest =
        classify::forest_train(enrolled.values, labels, protocol.n_trees, protocol.seed);
    for (Eigen::Index r = 0; r < probes.rows(); ++r) {
      const int predicted = classify::forest_predict(forest, probes.values.row(r)).label;
      if (predicted == class_of[probes.subjects[static_cast<std::size_t>(r)]]) ++correct;
    }
  } else {
    classify::KnnModel model{enrolled.values, labels, weights,
                             std::min<int>(protocol.k,
                                           static_cast<int>(enrolled.rows()))};
    for (Eigen::Index r = 0; r < probes.rows(); ++r) {
      const int predicted = classify::wknn_classify(model, probes.values.row(r));
      if (predicted == class_of[probes.subjects[static_cast<std::size_t>(r)]]) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(probes.rows());
}

double verification_score(const Eigen::VectorXd& enrolled_row,
                          const Eigen::VectorXd& probe_row,
                          const Eigen::VectorXd& weights,
                          const Eigen::VectorXd& feature_means,
                          bool per_term_mean) {
  const Eigen::Index n = enrolled_row.size();
  if (probe_row.size() != n || weights.size() != n || feature_means.size() != n)
    throw LengthMismatch("verification inputs must share a length");
  for (Eigen::Index q = 0; q < n; ++q)
    if (feature_means(q) == 0) throw ZeroMean(static_cast<int>(q));

  const Eigen::ArrayXd diff = (enrolled_row - probe_row).array().abs();
  if (per_term_mean)
    return (diff * weights.array() / feature_means.array()).sum();
  return (diff * weights.array()).sum() / feature_means.mean();
}

ScoreSets build_score_sets(const features::FeatureMatrix& enrolled,
                           const features::FeatureMatrix& probes,
                           const Eigen::VectorXd& weights,
                           const Eigen::VectorXd& feature_means,
                           bool per_term_mean) {
  if (enrolled.cols() != probes.cols())
    throw LengthMismatch("enrolled and probe matrices have different columns");
  ScoreSets sets;
  for (Eigen::Index p = 0; p < probes.rows(); ++p) {
    for (Eigen::Index e = 0; e < enrolled.rows(); ++e) {
      const double score =
          verification_score(enrolled.values.row(e), probes.values.row(p), weights,
                             feature_means, per_term_mean);
      if (enrolled.subjects[static_cast<std::size_t>(e)] ==
          probes.subjects[static_cast<std::size_t>(p)])
        sets.genuine.push_back(score);
      else
        sets.imposter.push_back(score);
    }
  }
  return sets;
}

RocCurve roc_and_eer(const ScoreSets& scores, int n_thresholds) {
  if (scores.genuine.empty() || scores.imposter.empty()) throw EmptyScores();

  std::vector<double> genuine = scores.genuine;
  std::vector<double> imposter = scores.imposter;
  std::sort(genuine.begin(), genuine.end());
  std::sort(imposter.begin(), imposter.end());

  const double lo = std::min(genuine.front(), imposter.front());
  const double hi = std::max(genuine.back(), imposter.back());

  std::set<double> grid;
  grid.insert(std::nextafter(lo, -std::numeric_limits<double>::infinity()));
  for (int i = 0; i < n_thresholds; ++i)
    grid.insert(lo + (hi - lo) * i / std::max(1, n_thresholds - 1));
  if (static_cast<int>(genuine.size() + imposter.size()) < n_thresholds) {
    grid.insert(genuine.begin(), genuine.end());
    grid.insert(imposter.begin(), imposter.end());
  }
  // set extremes always included so perfect separation yields EER 0 exactly
  grid.insert(genuine.back());
  grid.insert(imposter.front());
  grid.insert(hi);

  RocCurve curve;
  auto rate_leq = [](const std::vector<double>& sorted, double t) {
    return static_cast<double>(
               std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin()) /
           static_cast<double>(sorted.size());
  };
  for (const double t : grid) {
    RocPoint p;
    p.threshold = t;
    p.far = rate_leq(imposter, t);   // accept iff score <= t
    p.frr = 1.0 - rate_leq(genuine, t);
    p.gar = 1.0 - p.frr;
    curve.points.push_back(p);
  }

  // FAR - FRR is non-decreasing along the sweep; locate the sign change.
  curve.eer = 0.5;
  curve.eer_threshold = curve.points.front().threshold;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const RocPoint& b = curve.points[i];
    const double gb = b.far - b.frr;
    if (gb < 0) continue;
    if (gb == 0 || i == 0) {
      curve.eer = (b.far + b.frr) / 2.0;
      curve.eer_threshold = b.threshold;
    } else {
      const RocPoint& a = curve.points[i - 1];
      const double ga = a.far - a.frr;  // < 0 here
      const double lambda = -ga / (gb - ga);
      curve.eer = a.far + lambda * (b.far - a.far);
      curve.eer_threshold = a.threshold + lambda * (b.threshold - a.threshold);
    }
    break;
  }
  return curve;
}

}  // namespace fingergeo::eval
