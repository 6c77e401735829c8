#include "fingergeo/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fingergeo/errors.hpp"

namespace fingergeo::imaging {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

// Clockwise 8-neighborhood starting at West (y grows downward).
constexpr int kNeighbor[8][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1},
                                 {1, 0},  {1, 1},   {0, 1},  {-1, 1}};

bool in_bounds(const BinaryImage& m, int x, int y) {
  return x >= 0 && y >= 0 && x < m.cols() && y < m.rows();
}

BinaryImage paint(const std::vector<Pixel>& pixels, Eigen::Index rows, Eigen::Index cols) {
  BinaryImage out = BinaryImage::Constant(rows, cols, false);
  for (const Pixel& p : pixels) out(p.y, p.x) = true;
  return out;
}

}  // namespace

const char* to_string(FingerLabel label) {
  switch (label) {
    case FingerLabel::Thumb: return "thumb";
    case FingerLabel::Index: return "index";
    case FingerLabel::Middle: return "middle";
    case FingerLabel::Ring: return "ring";
    case FingerLabel::Little: return "little";
  }
  return "?";
}

GrayImage median_filter(const GrayImage& image, int window) {
  if (window < 1 || window % 2 == 0)
    throw ParamsOutOfRange("median window must be odd and >= 1");
  if (window == 1) return image;
  const int h = window / 2;
  const int rows = static_cast<int>(image.rows());
  const int cols = static_cast<int>(image.cols());
  GrayImage out(rows, cols);
  std::vector<std::uint8_t> buf;
  buf.reserve(static_cast<std::size_t>(window) * window);
  for (int r = 0; r < rows; ++r) {
    const int r0 = std::max(0, r - h), r1 = std::min(rows - 1, r + h);
    for (int c = 0; c < cols; ++c) {
      const int c0 = std::max(0, c - h), c1 = std::min(cols - 1, c + h);
      buf.clear();
      for (int rr = r0; rr <= r1; ++rr)
        for (int cc = c0; cc <= c1; ++cc) buf.push_back(image(rr, cc));
      auto mid = buf.begin() + buf.size() / 2;
      std::nth_element(buf.begin(), mid, buf.end());
      out(r, c) = *mid;
    }
  }
  return out;
}

int otsu_threshold(const std::array<std::int64_t, 256>& histogram) {
  std::int64_t total = 0;
  double weighted_sum = 0;
  for (int v = 0; v < 256; ++v) {
    total += histogram[v];
    weighted_sum += static_cast<double>(v) * histogram[v];
  }
  int best_t = 0;
  double best_var = -1.0;
  std::int64_t n0 = 0;
  double sum0 = 0;
  for (int t = 0; t < 255; ++t) {
    n0 += histogram[t];
    sum0 += static_cast<double>(t) * histogram[t];
    const std::int64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const double mu0 = sum0 / n0;
    const double mu1 = (weighted_sum - sum0) / n1;
    const double var = static_cast<double>(n0) * static_cast<double>(n1) *
                       (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  return best_t;
}

BinaryImage binarize_hand(const GrayImage& image, int median_window) {
  if (image.size() == 0) throw AllBackground("empty image");
  const GrayImage filtered = median_filter(image, median_window);
  std::array<std::int64_t, 256> hist{};
  for (Eigen::Index r = 0; r < filtered.rows(); ++r)
    for (Eigen::Index c = 0; c < filtered.cols(); ++c) ++hist[filtered(r, c)];
  const int t = otsu_threshold(hist);
  const BinaryImage mask = filtered > static_cast<std::uint8_t>(t);
  if (!mask.any()) throw AllBackground();
  return largest_component(mask);
}

std::vector<std::vector<Pixel>> connected_components(const BinaryImage& mask) {
  const int rows = static_cast<int>(mask.rows());
  const int cols = static_cast<int>(mask.cols());
  std::vector<std::vector<Pixel>> components;
  std::vector<char> seen(static_cast<std::size_t>(rows) * cols, 0);
  std::vector<Pixel> stack;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!mask(r, c) || seen[static_cast<std::size_t>(r) * cols + c]) continue;
      std::vector<Pixel> comp;
      stack.push_back({c, r});
      seen[static_cast<std::size_t>(r) * cols + c] = 1;
      while (!stack.empty()) {
        Pixel p = stack.back();
        stack.pop_back();
        comp.push_back(p);
        for (const auto& nb : kNeighbor) {
          const int x = p.x + nb[0], y = p.y + nb[1];
          if (!in_bounds(mask, x, y) || !mask(y, x)) continue;
          const std::size_t idx = static_cast<std::size_t>(y) * cols + x;
          if (!seen[idx]) {
            seen[idx] = 1;
            stack.push_back({x, y});
          }
        }
      }
      components.push_back(std::move(comp));
    }
  }
  return components;
}

BinaryImage largest_component(const BinaryImage& mask) {
  auto comps = connected_components(mask);
  if (comps.empty()) return BinaryImage::Constant(mask.rows(), mask.cols(), false);
  const auto* best = &comps.front();
  for (const auto& c : comps)
    if (c.size() > best->size()) best = &c;
  return paint(*best, mask.rows(), mask.cols());
}

MomentSet hand_moments(const BinaryImage& mask) {
  MomentSet m;
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      if (!mask(r, c)) continue;
      const double x = static_cast<double>(c), y = static_cast<double>(r);
      m.m00 += 1;
      m.m10 += x;
      m.m01 += y;
      m.m11 += x * y;
      m.m20 += x * x;
      m.m02 += y * y;
    }
  }
  if (m.m00 <= 0) throw AllBackground("moments of an empty mask");
  m.centroid_x = m.m10 / m.m00;
  m.centroid_y = m.m01 / m.m00;
  return m;
}

double orientation_angle(const MomentSet& m) {
  if (m.m00 <= 0) throw AllBackground("orientation of an empty mask");
  const double mu20 = m.m20 - m.centroid_x * m.m10;
  const double mu02 = m.m02 - m.centroid_y * m.m01;
  const double mu11 = m.m11 - m.centroid_x * m.m01;
  const double tol = 1e-12 * std::max(1.0, mu20 + mu02);
  if (std::abs(mu11) <= tol && std::abs(mu20 - mu02) <= tol)
    throw DegenerateOrientation();
  double theta = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02) * kDegPerRad;
  if (theta <= -90.0) theta += 180.0;
  return theta;
}

double upright_rotation(double theta_major) {
  double rho = theta_major - 90.0;
  while (rho <= -90.0) rho += 180.0;
  while (rho > 90.0) rho -= 180.0;
  return rho;
}

std::pair<GrayImage, BinaryImage> rotate_upright(const GrayImage& gray,
                                                 const BinaryImage& binary,
                                                 double theta_deg) {
  if (gray.rows() != binary.rows() || gray.cols() != binary.cols())
    throw LengthMismatch("gray and binary dimensions differ");
  const int w = static_cast<int>(gray.cols());
  const int h = static_cast<int>(gray.rows());

  double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
  if (binary.any()) {
    const MomentSet m = hand_moments(binary);
    cx = m.centroid_x;
    cy = m.centroid_y;
  }

  const double rad = theta_deg / kDegPerRad;
  const double cosr = std::cos(rad), sinr = std::sin(rad);

  // Forward map of the input corners (rotation R(-theta) about the centroid)
  // fixes the output canvas so nothing clips; theta = 0 keeps it unchanged.
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  bool first = true;
  for (const double px : {0.0, static_cast<double>(w - 1)}) {
    for (const double py : {0.0, static_cast<double>(h - 1)}) {
      const double dx = px - cx, dy = py - cy;
      const double fx = cx + cosr * dx + sinr * dy;
      const double fy = cy - sinr * dx + cosr * dy;
      if (first) {
        min_x = max_x = fx;
        min_y = max_y = fy;
        first = false;
      } else {
        min_x = std::min(min_x, fx);
        max_x = std::max(max_x, fx);
        min_y = std::min(min_y, fy);
        max_y = std::max(max_y, fy);
      }
    }
  }
  const int off_x = static_cast<int>(-std::floor(min_x));
  const int off_y = static_cast<int>(-std::floor(min_y));
  const int out_w = static_cast<int>(std::ceil(max_x)) + off_x + 1;
  const int out_h = static_cast<int>(std::ceil(max_y)) + off_y + 1;
  const double ccx = cx + off_x, ccy = cy + off_y;

  GrayImage out_gray = GrayImage::Zero(out_h, out_w);
  BinaryImage out_bin = BinaryImage::Constant(out_h, out_w, false);
  for (int r = 0; r < out_h; ++r) {
    for (int c = 0; c < out_w; ++c) {
      const double dx = c - ccx, dy = r - ccy;
      const double sx = cx + cosr * dx - sinr * dy;
      const double sy = cy + sinr * dx + cosr * dy;

      const int nx = static_cast<int>(std::lround(sx));
      const int ny = static_cast<int>(std::lround(sy));
      if (in_bounds(binary, nx, ny)) out_bin(r, c) = binary(ny, nx);

      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const double fx = sx - x0, fy = sy - y0;
      double acc = 0;
      for (int dyi = 0; dyi <= 1; ++dyi) {
        for (int dxi = 0; dxi <= 1; ++dxi) {
          const int xx = x0 + dxi, yy = y0 + dyi;
          if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
          const double wgt = (dxi ? fx : 1 - fx) * (dyi ? fy : 1 - fy);
          acc += wgt * gray(yy, xx);
        }
      }
      out_gray(r, c) = static_cast<std::uint8_t>(
          std::clamp<long>(std::lround(acc), 0, 255));
    }
  }
  return {std::move(out_gray), std::move(out_bin)};
}

BinaryImage majority_smooth(const BinaryImage& mask) {
  const int rows = static_cast<int>(mask.rows());
  const int cols = static_cast<int>(mask.cols());
  BinaryImage out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int n = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = c + dx, y = r + dy;
          if (in_bounds(mask, x, y) && mask(y, x)) ++n;
        }
      out(r, c) = n >= 5;
    }
  }
  return out;
}

Contour trace_boundary(const BinaryImage& input) {
  const BinaryImage mask = largest_component(input);
  Pixel start{-1, -1};
  for (Eigen::Index r = 0; r < mask.rows() && start.x < 0; ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c)
      if (mask(r, c)) {
        start = {static_cast<int>(c), static_cast<int>(r)};
        break;
      }
  if (start.x < 0) return {};

  auto fg = [&](const Pixel& p) { return in_bounds(mask, p.x, p.y) && mask(p.y, p.x); };

  Contour contour{start};
  const Pixel initial_backtrack{start.x - 1, start.y};
  Pixel curr = start, backtrack = initial_backtrack;
  const std::int64_t cap = 8 * mask.count() + 8;
  for (std::int64_t step = 0; step < cap; ++step) {
    int b_idx = -1;
    for (int i = 0; i < 8; ++i)
      if (curr.x + kNeighbor[i][0] == backtrack.x &&
          curr.y + kNeighbor[i][1] == backtrack.y) {
        b_idx = i;
        break;
      }
    Pixel next{-1, -1}, next_backtrack{};
    for (int k = 1; k <= 8; ++k) {
      const int idx = (b_idx + k) % 8;
      const Pixel cand{curr.x + kNeighbor[idx][0], curr.y + kNeighbor[idx][1]};
      if (fg(cand)) {
        next = cand;
        const int prev = (idx + 7) % 8;
        next_backtrack = {curr.x + kNeighbor[prev][0], curr.y + kNeighbor[prev][1]};
        break;
      }
    }
    if (next.x < 0) return contour;  // isolated pixel
    if (next == start && next_backtrack == initial_backtrack) return contour;
    contour.push_back(next);
    curr = next;
    backtrack = next_backtrack;
  }
  return contour;
}

BinaryImage contour_image(const BinaryImage& mask) {
  return paint(trace_boundary(mask), mask.rows(), mask.cols());
}

BinaryImage gradient_mask(const GrayImage& l_theta, double eta) {
  if (l_theta.size() == 0) throw AllBackground("empty image");
  const int rows = static_cast<int>(l_theta.rows());
  const int cols = static_cast<int>(l_theta.cols());
  BinaryImage out = BinaryImage::Constant(rows, cols, false);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c) {
      const double diff =
          eta * (static_cast<double>(l_theta(r, c)) - static_cast<double>(l_theta(r, c + 1)));
      out(r, c) = diff > 0;  // negatives saturate to zero in 8-bit arithmetic
    }
  return out;
}

BinaryImage dilate3x3(const BinaryImage& mask) {
  const int rows = static_cast<int>(mask.rows());
  const int cols = static_cast<int>(mask.cols());
  BinaryImage out = BinaryImage::Constant(rows, cols, false);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (!mask(r, c)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = c + dx, y = r + dy;
          if (in_bounds(mask, x, y)) out(y, x) = true;
        }
    }
  return out;
}

BinaryImage erode3x3(const BinaryImage& mask) {
  const int rows = static_cast<int>(mask.rows());
  const int cols = static_cast<int>(mask.cols());
  BinaryImage out = BinaryImage::Constant(rows, cols, false);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy)
        for (int dx = -1; dx <= 1 && all; ++dx) {
          const int x = c + dx, y = r + dy;
          // outside-of-image treated as foreground so closing stays extensive
          if (in_bounds(mask, x, y) && !mask(y, x)) all = false;
        }
      out(r, c) = all && mask(r, c);
    }
  return out;
}

BinaryImage close3x3(const BinaryImage& mask) { return erode3x3(dilate3x3(mask)); }

BinaryImage bridge(const BinaryImage& mask) {
  const int rows = static_cast<int>(mask.rows());
  const int cols = static_cast<int>(mask.cols());
  BinaryImage out = mask;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (mask(r, c)) continue;
      // count arcs of true pixels around the 8-neighborhood ring
      bool ring[8];
      for (int i = 0; i < 8; ++i) {
        const int x = c + kNeighbor[i][0], y = r + kNeighbor[i][1];
        ring[i] = in_bounds(mask, x, y) && mask(y, x);
      }
      int arcs = 0;
      for (int i = 0; i < 8; ++i)
        if (ring[i] && !ring[(i + 7) % 8]) ++arcs;
      if (arcs >= 2) out(r, c) = true;
    }
  return out;
}

ProfilePair split_profiles(const BinaryImage& contour, const BinaryImage& gradient) {
  if (contour.rows() != gradient.rows() || contour.cols() != gradient.cols())
    throw LengthMismatch("contour and gradient dimensions differ");
  ProfilePair p;
  p.left_raw = contour && !gradient;
  p.right_raw = (contour != p.left_raw);  // == contour xor left_raw
  p.left = bridge(close3x3(p.left_raw));
  p.right = close3x3(p.right_raw);
  return p;
}

void trim_wrist(ProfilePair& profiles, int cut_row) {
  const bool had_left = profiles.left.any();
  const bool had_right = profiles.right.any();
  auto cut = [cut_row](BinaryImage& m) {
    for (Eigen::Index r = std::max<Eigen::Index>(0, cut_row + 1); r < m.rows(); ++r)
      m.row(r).setConstant(false);
    if (cut_row < 0) m.setConstant(false);
  };
  cut(profiles.left);
  cut(profiles.right);
  if ((had_left && !profiles.left.any()) || (had_right && !profiles.right.any()))
    throw CutAboveFingers(cut_row);
}

namespace {

Pixel topmost(const std::vector<Pixel>& comp) {
  Pixel best = comp.front();
  for (const Pixel& p : comp)
    if (p.y < best.y || (p.y == best.y && p.x < best.x)) best = p;
  return best;
}

Pixel bottommost(const std::vector<Pixel>& comp) {
  Pixel best = comp.front();
  for (const Pixel& p : comp)
    if (p.y > best.y || (p.y == best.y && p.x < best.x)) best = p;
  return best;
}

void draw_line(BinaryImage& img, Pixel a, Pixel b) {
  const int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  int x = a.x, y = a.y;
  while (true) {
    img(y, x) = true;
    if (x == b.x && y == b.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

/// Close a profile pair into a filled finger mask: bridge the tip and base
/// gaps with straight segments and take everything not reachable from the
/// canvas border.
FingerShape close_and_fill(const std::vector<Pixel>& left_comp,
                           const std::vector<Pixel>& right_comp) {
  const int margin = 2;
  int min_x = left_comp.front().x, max_x = min_x;
  int min_y = left_comp.front().y, max_y = min_y;
  for (const auto* comp : {&left_comp, &right_comp})
    for (const Pixel& p : *comp) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
  const int w = max_x - min_x + 1 + 2 * margin;
  const int h = max_y - min_y + 1 + 2 * margin;
  const Pixel base{min_x - margin, min_y - margin};

  BinaryImage boundary = BinaryImage::Constant(h, w, false);
  auto local = [&](Pixel p) { return Pixel{p.x - base.x, p.y - base.y}; };
  for (const auto* comp : {&left_comp, &right_comp})
    for (const Pixel& p : *comp) boundary(p.y - base.y, p.x - base.x) = true;
  draw_line(boundary, local(topmost(left_comp)), local(topmost(right_comp)));
  draw_line(boundary, local(bottommost(left_comp)), local(bottommost(right_comp)));

  // exterior sweep: the finger is everything the border cannot reach
  BinaryImage exterior = BinaryImage::Constant(h, w, false);
  std::vector<Pixel> stack;
  auto push = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return;
    if (boundary(y, x) || exterior(y, x)) return;
    exterior(y, x) = true;
    stack.push_back({x, y});
  };
  for (int x = 0; x < w; ++x) {
    push(x, 0);
    push(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    push(0, y);
    push(w - 1, y);
  }
  while (!stack.empty()) {
    const Pixel p = stack.back();
    stack.pop_back();
    push(p.x - 1, p.y);
    push(p.x + 1, p.y);
    push(p.x, p.y - 1);
    push(p.x, p.y + 1);
  }
  const BinaryImage filled = largest_component(!exterior);

  const BoundingBox box = bounding_box(filled);
  FingerShape shape;
  shape.mask = filled.block(box.min_y, box.min_x, box.height(), box.width());
  shape.origin = {base.x + box.min_x, base.y + box.min_y};
  shape.contour = trace_boundary(shape.mask);
  return shape;
}

}  // namespace

std::vector<FingerShape> extract_fingers(const BinaryImage& left,
                                         const BinaryImage& right,
                                         bool mirror,
                                         int min_profile_pixels) {
  auto significant = [min_profile_pixels](std::vector<std::vector<Pixel>> comps) {
    std::erase_if(comps, [&](const auto& c) {
      return static_cast<int>(c.size()) < min_profile_pixels;
    });
    return comps;
  };
  auto comps_l = significant(connected_components(left));
  auto comps_r = significant(connected_components(right));
  if (comps_l.size() != 5 || comps_r.size() != 5)
    throw SegmentationError(static_cast<int>(comps_l.size()),
                            static_cast<int>(comps_r.size()));

  auto by_top_x = [](const std::vector<Pixel>& a, const std::vector<Pixel>& b) {
    const Pixel ta = topmost(a), tb = topmost(b);
    return ta.x != tb.x ? ta.x < tb.x : ta.y < tb.y;
  };
  std::sort(comps_l.begin(), comps_l.end(), by_top_x);
  std::sort(comps_r.begin(), comps_r.end(), by_top_x);

  std::vector<FingerShape> fingers;
  for (int i = 0; i < 5; ++i) {
    FingerShape shape = close_and_fill(comps_l[i], comps_r[i]);
    shape.label = static_cast<FingerLabel>(mirror ? 4 - i : i);
    fingers.push_back(std::move(shape));
  }
  std::sort(fingers.begin(), fingers.end(), [](const auto& a, const auto& b) {
    return static_cast<int>(a.label) < static_cast<int>(b.label);
  });
  return fingers;
}

std::vector<FingerShape> drop_thumb(const std::vector<FingerShape>& fingers) {
  if (fingers.size() != 5)
    throw MissingFinger("expected five fingers, got " + std::to_string(fingers.size()));
  std::array<const FingerShape*, 5> by_label{};
  for (const FingerShape& f : fingers) {
    auto& slot = by_label[static_cast<int>(f.label)];
    if (slot != nullptr)
      throw MissingFinger(std::string("duplicate finger label '") +
                          to_string(f.label) + "'");
    slot = &f;
  }
  std::vector<FingerShape> out;
  for (int i = 1; i <= 4; ++i) out.push_back(*by_label[i]);
  return out;
}

namespace {

int max_runs_near(const BinaryImage& mask, int row) {
  int best = 0;
  for (const int dr : {-3, 0, 3}) {
    const int r = std::clamp<int>(row + dr, 0, static_cast<int>(mask.rows()) - 1);
    int runs = 0;
    bool inside = false;
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      if (mask(r, c) && !inside) {
        ++runs;
        inside = true;
      } else if (!mask(r, c)) {
        inside = false;
      }
    }
    best = std::max(best, runs);
  }
  return best;
}

/// After uprighting, the finger side of a hand crosses several foreground
/// runs per row while the wrist side crosses one.
bool fingers_down(const BinaryImage& mask) {
  const BoundingBox box = bounding_box(mask);
  if (box.empty()) return false;
  const MomentSet m = hand_moments(mask);
  const int yc = static_cast<int>(std::lround(m.centroid_y));
  const int span = static_cast<int>(std::lround(0.30 * box.height()));
  const int upper = std::clamp(yc - span, box.min_y, box.max_y);
  const int lower = std::clamp(yc + span, box.min_y, box.max_y);
  return max_runs_near(mask, upper) < max_runs_near(mask, lower);
}

}  // namespace

HandStages normalize_hand(const GrayImage& image, const ImagingConfig& config) {
  HandStages st;
  st.gray_filtered = median_filter(image, config.median_window);
  st.binary = binarize_hand(st.gray_filtered, 1);

  const MomentSet m = hand_moments(st.binary);
  try {
    st.theta_major = orientation_angle(m);
    st.rotation = upright_rotation(st.theta_major);
  } catch (const DegenerateOrientation&) {
    st.theta_major = 90.0;
    st.rotation = 0.0;
  }

  auto [gray_rot, mask_rot] = rotate_upright(st.gray_filtered, st.binary, st.rotation);
  mask_rot = largest_component(majority_smooth(mask_rot));
  if (!mask_rot.any()) throw AllBackground("hand vanished during rotation");
  if (fingers_down(mask_rot)) {
    gray_rot = rotate180(gray_rot);
    mask_rot = rotate180(mask_rot);
    st.flipped = true;
  }
  st.rotated_mask = mask_rot;
  st.l_theta = mask_rot.select(gray_rot, GrayImage::Zero(gray_rot.rows(), gray_rot.cols()));

  st.l_r = contour_image(mask_rot);
  st.l_bw = gradient_mask(st.l_theta, config.eta);
  st.profiles = split_profiles(st.l_r, st.l_bw);

  const MomentSet mr = hand_moments(mask_rot);
  const BoundingBox box = bounding_box(mask_rot);
  st.cut_row = static_cast<int>(
      std::lround(mr.centroid_y + config.wrist_offset * box.height()));
  trim_wrist(st.profiles, st.cut_row);

  st.fingers = extract_fingers(st.profiles.left, st.profiles.right,
                               config.mirror_labels, config.min_profile_pixels);
  return st;
}

std::vector<FingerShape> segment_fingers(const GrayImage& image,
                                         const ImagingConfig& config) {
  return drop_thumb(normalize_hand(image, config).fingers);
}

}  // namespace fingergeo::imaging
