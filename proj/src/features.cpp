#include "fingergeo/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fingergeo/errors.hpp"

namespace fingergeo::features {

namespace {

struct Point {
  double x, y;
};

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Andrew monotone chain; returns the hull polygon (counterclockwise).
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Point> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(const std::vector<Point>& poly) {
  if (poly.size() < 3) return 0;
  double acc = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % poly.size()];
    acc += a.x * b.y - b.x * a.y;
  }
  return std::abs(acc) / 2.0;
}

void require_nonempty(const imaging::FingerShape& finger) {
  if (finger.mask.size() == 0 || !finger.mask.any()) throw EmptyShape();
}

}  // namespace

double convex_hull_area(const BinaryImage& mask) {
  // Per-row extreme pixel corners span the same hull as all pixel corners.
  std::vector<Point> corners;
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    int min_c = -1, max_c = -1;
    for (Eigen::Index c = 0; c < mask.cols(); ++c)
      if (mask(r, c)) {
        if (min_c < 0) min_c = static_cast<int>(c);
        max_c = static_cast<int>(c);
      }
    if (min_c < 0) continue;
    const double y = static_cast<double>(r);
    corners.push_back({static_cast<double>(min_c), y});
    corners.push_back({static_cast<double>(min_c), y + 1});
    corners.push_back({static_cast<double>(max_c) + 1, y});
    corners.push_back({static_cast<double>(max_c) + 1, y + 1});
  }
  return polygon_area(convex_hull(std::move(corners)));
}

std::array<double, 3> shape_scalars(const imaging::FingerShape& finger) {
  require_nonempty(finger);
  const double area = static_cast<double>(finger.mask.count());
  const double hull = convex_hull_area(finger.mask);
  const double solidity = hull > 0 ? area / hull : 1.0;
  const double eq_diameter = std::sqrt(4.0 * area / std::numbers::pi);
  return {area, solidity, eq_diameter};
}

std::array<double, 2> ellipse_axes(const imaging::FingerShape& finger) {
  require_nonempty(finger);
  const imaging::MomentSet m = imaging::hand_moments(finger.mask);
  const double mu20 = (m.m20 - m.centroid_x * m.m10) / m.m00 + 1.0 / 12.0;
  const double mu02 = (m.m02 - m.centroid_y * m.m01) / m.m00 + 1.0 / 12.0;
  const double mu11 = (m.m11 - m.centroid_x * m.m01) / m.m00;
  Eigen::Matrix2d cov;
  cov << mu20, mu11, mu11, mu02;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(cov);
  const Eigen::Vector2d lambda = solver.eigenvalues();  // ascending
  return {4.0 * std::sqrt(std::max(0.0, lambda(1))),
          4.0 * std::sqrt(std::max(0.0, lambda(0)))};
}

std::array<double, 3> phalanx_widths(const imaging::FingerShape& finger) {
  require_nonempty(finger);
  const BoundingBox box = bounding_box(finger.mask);
  std::array<double, 3> widths{};
  const double fractions[3] = {1.0 / 6.0, 0.5, 5.0 / 6.0};
  for (int i = 0; i < 3; ++i) {
    const int r = box.min_y +
                  static_cast<int>(std::lround(fractions[i] * (box.height() - 1)));
    int min_c = -1, max_c = -1;
    for (Eigen::Index c = 0; c < finger.mask.cols(); ++c)
      if (finger.mask(r, c)) {
        if (min_c < 0) min_c = static_cast<int>(c);
        max_c = static_cast<int>(c);
      }
    widths[i] = min_c < 0 ? 0.0 : static_cast<double>(max_c - min_c + 1);
  }
  return widths;
}

std::array<double, 5> centroid_distances(const imaging::FingerShape& finger) {
  require_nonempty(finger);
  if (finger.contour.empty()) throw EmptyShape();
  const imaging::MomentSet m = imaging::hand_moments(finger.mask);

  std::size_t start = 0;
  for (std::size_t i = 1; i < finger.contour.size(); ++i) {
    const Pixel& p = finger.contour[i];
    const Pixel& s = finger.contour[start];
    if (p.y < s.y || (p.y == s.y && p.x < s.x)) start = i;
  }
  const std::size_t length = finger.contour.size();
  std::array<double, 5> distances{};
  for (int k = 0; k < 5; ++k) {
    const std::size_t idx = (start + k * length / 5) % length;
    const Pixel& p = finger.contour[idx];
    distances[k] = std::hypot(p.x - m.centroid_x, p.y - m.centroid_y);
  }
  return distances;
}

FingerFeatures finger_features(const imaging::FingerShape& finger) {
  FingerFeatures f{};
  const auto scalars = shape_scalars(finger);
  const auto axes = ellipse_axes(finger);
  const auto widths = phalanx_widths(finger);
  const auto dists = centroid_distances(finger);
  f[0] = scalars[0];
  f[1] = scalars[1];
  f[2] = scalars[2];
  f[3] = axes[0];
  f[4] = axes[1];
  for (int i = 0; i < 3; ++i) f[5 + i] = widths[i];
  for (int i = 0; i < 5; ++i) f[8 + i] = dists[i];
  return f;
}

Eigen::VectorXd build_feature_vector(const std::vector<imaging::FingerShape>& fingers) {
  if (fingers.size() != kFingers)
    throw MissingFinger("expected four fingers, got " + std::to_string(fingers.size()));
  std::array<const imaging::FingerShape*, 5> by_label{};
  for (const auto& f : fingers) {
    auto& slot = by_label[static_cast<int>(f.label)];
    if (slot != nullptr || f.label == imaging::FingerLabel::Thumb)
      throw MissingFinger("feature vector needs index..little exactly once");
    slot = &f;
  }
  Eigen::VectorXd row(kFeatureCount);
  for (int i = 1; i <= 4; ++i) {
    if (by_label[i] == nullptr)
      throw MissingFinger(std::string("missing finger '") +
                          imaging::to_string(static_cast<imaging::FingerLabel>(i)) + "'");
    const FingerFeatures f = finger_features(*by_label[i]);
    for (int j = 0; j < kFeaturesPerFinger; ++j)
      row((i - 1) * kFeaturesPerFinger + j) = f[j];
  }
  return row;
}

std::vector<std::string> feature_column_names() {
  std::vector<std::string> names;
  names.reserve(kFeatureCount);
  for (int finger = 1; finger <= 4; ++finger)
    for (int j = 1; j <= kFeaturesPerFinger; ++j)
      names.push_back("f" + std::to_string(j) + "_" +
                      imaging::to_string(static_cast<imaging::FingerLabel>(finger)));
  return names;
}

NormalizationParams fit_minmax(const FeatureMatrix& training) {
  if (training.rows() < 2)
    throw TooFewRows("min-max fit needs at least 2 rows, got " +
                     std::to_string(training.rows()));
  NormalizationParams p;
  p.min = training.values.colwise().minCoeff();
  p.max = training.values.colwise().maxCoeff();
  return p;
}

FeatureMatrix apply_minmax(const FeatureMatrix& matrix, const NormalizationParams& params) {
  if (matrix.cols() != params.min.size())
    throw LengthMismatch("matrix has " + std::to_string(matrix.cols()) +
                         " columns, params have " + std::to_string(params.min.size()));
  FeatureMatrix out = matrix;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double lo = params.min(c), hi = params.max(c);
    const double range = hi - lo;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      double v = range > 0 ? (out.values(r, c) - lo) / range : 0.0;
      out.values(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace fingergeo::features
