#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fingergeo/imaging.hpp"

namespace fingergeo::features {

inline constexpr int kFeaturesPerFinger = 13;
inline constexpr int kFingers = 4;
inline constexpr int kFeatureCount = kFeaturesPerFinger * kFingers;  // 52

/// The 13 geometric measurements of one finger, in the fixed order
/// area, solidity, equivalent diameter, major axis, minor axis,
/// three phalanx widths, five centroid distances.
using FingerFeatures = std::array<double, kFeaturesPerFinger>;

/// Rows of 52-dimensional vectors with subject/sample labels.
struct FeatureMatrix {
  std::vector<std::string> subjects;
  std::vector<int> samples;
  Eigen::MatrixXd values;  // rows x 52
  std::vector<std::string> column_names;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

/// Per-column min/max fitted on the training split (Eq. 6 parameters).
struct NormalizationParams {
  Eigen::VectorXd min;
  Eigen::VectorXd max;
};

/// area (pixel count), solidity (area / convex-hull area), equivalent
/// diameter sqrt(4*area/pi). The hull is taken over the pixel-square
/// corners so a filled rectangle has solidity exactly 1.
std::array<double, 3> shape_scalars(const imaging::FingerShape& finger);

/// Major/minor axis lengths of the moment-equivalent ellipse:
/// 4*sqrt(eigenvalues) of the normalized central second-moment matrix with
/// the 1/12 pixel-square correction on the diagonal.
std::array<double, 2> ellipse_axes(const imaging::FingerShape& finger);

/// Horizontal extents at 1/6, 1/2 and 5/6 of the finger height from the tip.
std::array<double, 3> phalanx_widths(const imaging::FingerShape& finger);

/// Distances from the mask centroid to five contour pixels equally spaced
/// along the traced contour, starting at the topmost (tie: leftmost) pixel.
std::array<double, 5> centroid_distances(const imaging::FingerShape& finger);

FingerFeatures finger_features(const imaging::FingerShape& finger);

/// Concatenate the four fingers' features, finger-major, index -> little.
/// Input order does not matter; fingers are sorted by label.
Eigen::VectorXd build_feature_vector(const std::vector<imaging::FingerShape>& fingers);

/// Canonical column names f1_index .. f13_little, finger-major.
std::vector<std::string> feature_column_names();

NormalizationParams fit_minmax(const FeatureMatrix& training);

/// (v - min) / (max - min) per column, clamped to [0, 1]; constant columns
/// map to 0.
FeatureMatrix apply_minmax(const FeatureMatrix& matrix, const NormalizationParams& params);

/// Convex-hull area of the pixel squares of a mask (shoelace over the hull
/// of per-row extreme corners).
double convex_hull_area(const BinaryImage& mask);

}  // namespace fingergeo::features
