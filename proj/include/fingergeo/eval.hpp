#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fingergeo/classify.hpp"
#include "fingergeo/features.hpp"

namespace fingergeo::eval {

enum class ClassifierKind { WeightedKnn, Forest };

struct IdentificationProtocol {
  int enrolled_per_subject = 2;
  int probes_per_subject = 1;
  ClassifierKind classifier = ClassifierKind::WeightedKnn;
  int k = 3;
  int n_trees = 150;
  std::uint64_t seed = 0;
};

/// Split a matrix into enrolled and probe rows per subject, samples ordered
/// by session index. Throws when a subject has too few samples.
std::pair<features::FeatureMatrix, features::FeatureMatrix> split_enroll_probe(
    const features::FeatureMatrix& matrix, int enrolled_per_subject,
    int probes_per_subject);

/// Closed-set identification accuracy: every probe classified against the
/// enrolled gallery.
double identify(const features::FeatureMatrix& enrolled,
                const features::FeatureMatrix& probes,
                const Eigen::VectorXd& weights,
                const IdentificationProtocol& protocol);

/// Eq. 17 dissimilarity: sum_q |alpha_q - beta_q| * w_q / mean_q by default;
/// per_term_mean = false divides the whole sum by the grand mean instead.
double verification_score(const Eigen::VectorXd& enrolled_row,
                          const Eigen::VectorXd& probe_row,
                          const Eigen::VectorXd& weights,
                          const Eigen::VectorXd& feature_means,
                          bool per_term_mean = true);

struct ScoreSets {
  std::vector<double> genuine;
  std::vector<double> imposter;
};

/// Every probe scored against every enrolled template: same subject ->
/// genuine, otherwise imposter.
ScoreSets build_score_sets(const features::FeatureMatrix& enrolled,
                           const features::FeatureMatrix& probes,
                           const Eigen::VectorXd& weights,
                           const Eigen::VectorXd& feature_means,
                           bool per_term_mean = true);

struct RocPoint {
  double threshold = 0;
  double far = 0;  // accepted imposters / imposters
  double frr = 0;  // rejected genuines / genuines
  double gar = 0;  // 1 - frr
};

struct RocCurve {
  std::vector<RocPoint> points;
  double eer = 0;
  double eer_threshold = 0;
};

/// Threshold sweep (accept iff score <= threshold) over evenly spaced points
/// plus the distinct score values; EER linearly interpolated at the
/// FAR = FRR crossing.
RocCurve roc_and_eer(const ScoreSets& scores, int n_thresholds = 2000);

}  // namespace fingergeo::eval
