#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace fingergeo {

/// Row-major dense raster. Element (r, c) is the pixel at row r (y) and
/// column c (x); width() == cols(), height() == rows().
template <typename Scalar>
using ImageT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using GrayImage = ImageT<std::uint8_t>;
using BinaryImage = ImageT<bool>;

/// Integer pixel coordinate, x = column, y = row.
struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

using Contour = std::vector<Pixel>;

/// Inclusive bounding box of the true pixels; undefined for an empty mask.
struct BoundingBox {
  int min_x = 0, min_y = 0, max_x = -1, max_y = -1;
  int width() const { return max_x - min_x + 1; }
  int height() const { return max_y - min_y + 1; }
  bool empty() const { return max_x < min_x; }
};

inline BoundingBox bounding_box(const BinaryImage& mask) {
  BoundingBox box{static_cast<int>(mask.cols()), static_cast<int>(mask.rows()), -1, -1};
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c)
      if (mask(r, c)) {
        box.min_x = std::min(box.min_x, static_cast<int>(c));
        box.max_x = std::max(box.max_x, static_cast<int>(c));
        box.min_y = std::min(box.min_y, static_cast<int>(r));
        box.max_y = std::max(box.max_y, static_cast<int>(r));
      }
  return box;
}

inline std::int64_t count_foreground(const BinaryImage& mask) {
  return mask.count();
}

}  // namespace fingergeo
