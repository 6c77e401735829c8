#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fingergeo/image.hpp"

namespace fingergeo::imaging {

/// Raw spatial moments of a binary mask and the derived centroid.
/// m10 sums x (column), m01 sums y (row).
struct MomentSet {
  double m00 = 0, m10 = 0, m01 = 0, m11 = 0, m20 = 0, m02 = 0;
  double centroid_x = 0, centroid_y = 0;
};

enum class FingerLabel { Thumb = 0, Index = 1, Middle = 2, Ring = 3, Little = 4 };

const char* to_string(FingerLabel label);

/// One segmented finger: mask cropped to its bounding box, the closed outer
/// contour in cropped coordinates, and the crop offset in the source image.
struct FingerShape {
  FingerLabel label = FingerLabel::Thumb;
  BinaryImage mask;
  Contour contour;
  Pixel origin;
};

struct ImagingConfig {
  int median_window = 3;
  double eta = 0.5;            // gradient scale, 1/2^h with h = 1
  double wrist_offset = 0.10;  // wrist cut: fraction of hand height below the centroid
  int min_profile_pixels = 10; // profile components smaller than this are noise
  bool mirror_labels = false;  // left-hand corpora: labels run little -> thumb
};

// --- elementary preprocessing ---------------------------------------------

/// Median filter with the window intersected with the image at borders.
GrayImage median_filter(const GrayImage& image, int window);

/// Otsu's threshold on a 256-bin histogram: the smallest t maximizing the
/// between-class variance of {0..t} vs {t+1..255}.
int otsu_threshold(const std::array<std::int64_t, 256>& histogram);

/// Median filter + Otsu threshold (foreground = brighter class), keeping only
/// the largest 8-connected component. Throws AllBackground when nothing survives.
BinaryImage binarize_hand(const GrayImage& image, int median_window = 3);

/// 8-connected components in scan order.
std::vector<std::vector<Pixel>> connected_components(const BinaryImage& mask);

BinaryImage largest_component(const BinaryImage& mask);

MomentSet hand_moments(const BinaryImage& mask);

/// Major-axis angle from the +x axis in degrees, range (-90, 90], from
/// 0.5 * atan2(2*mu11, mu20 - mu02) over the central moments.
/// Throws DegenerateOrientation for isotropic masks.
double orientation_angle(const MomentSet& moments);

/// Rotation to feed rotate_upright so the major axis at `theta_major` lands
/// on the vertical axis: theta_major - 90, normalized into (-90, 90].
double upright_rotation(double theta_major);

/// Rotate both images about the binary centroid so that directions at angle
/// theta map to angle 0. Nearest-neighbor for the mask, bilinear for the
/// grayscale; the canvas grows symmetrically so nothing clips. theta = 0 is
/// a pixel-exact identity (modulo padding).
std::pair<GrayImage, BinaryImage> rotate_upright(const GrayImage& gray,
                                                 const BinaryImage& binary,
                                                 double theta_deg);

/// Exact 180-degree rotation (no resampling).
template <typename Scalar>
ImageT<Scalar> rotate180(const ImageT<Scalar>& image) {
  return image.reverse().eval();
}

/// 3x3 majority vote; smooths the staircase left by nearest-neighbor rotation.
BinaryImage majority_smooth(const BinaryImage& mask);

// --- contour and profile operations ----------------------------------------

/// Moore boundary tracing of the largest component: ordered, closed,
/// 8-connected pixel loop starting at the topmost-leftmost pixel.
Contour trace_boundary(const BinaryImage& mask);

/// The traced outer boundary painted as a 1-px contour image (L_R).
BinaryImage contour_image(const BinaryImage& mask);

/// Horizontal first-order gradient, eta * (L(p,q) - L(p,q+1)); negative
/// differences saturate to zero, so white pixels land on bright-to-dark
/// (right-side) transitions.
BinaryImage gradient_mask(const GrayImage& l_theta, double eta = 0.5);

struct ProfilePair {
  BinaryImage left;       // L_LP after closing + bridging
  BinaryImage right;      // L_RP after closing
  BinaryImage left_raw;   // L_R minus L_BW           (Eq. 4 intermediate)
  BinaryImage right_raw;  // L_R xor left_raw          (Eq. 5 intermediate)
};

/// Split the contour into left/right finger profiles using the gradient mask.
ProfilePair split_profiles(const BinaryImage& contour, const BinaryImage& gradient);

/// Remove all profile pixels strictly below cut_row. Throws CutAboveFingers
/// when the cut leaves either profile empty.
void trim_wrist(ProfilePair& profiles, int cut_row);

/// Pair left/right profile segments by the x of their topmost pixel, close
/// each pair into a filled finger, and label left-to-right thumb..little
/// (reversed when mirror is set). Output is ordered thumb -> little.
std::vector<FingerShape> extract_fingers(const BinaryImage& left,
                                         const BinaryImage& right,
                                         bool mirror = false,
                                         int min_profile_pixels = 10);

/// Keep index..little in that order; throws MissingFinger unless the five
/// input labels are distinct and complete.
std::vector<FingerShape> drop_thumb(const std::vector<FingerShape>& fingers);

// --- morphology --------------------------------------------------------------

BinaryImage dilate3x3(const BinaryImage& mask);
BinaryImage erode3x3(const BinaryImage& mask);
BinaryImage close3x3(const BinaryImage& mask);
/// MATLAB-style bridging: a false pixel becomes true when its 8-neighborhood
/// contains two or more true regions that are not connected within it.
BinaryImage bridge(const BinaryImage& mask);

// --- whole-hand pipeline ------------------------------------------------------

/// Every intermediate the preprocessing produces, mirroring the paper's
/// figure stages; kept for debugging dumps and the acceptance checks.
struct HandStages {
  GrayImage gray_filtered;   // median-filtered input (L_G)
  BinaryImage binary;        // L_B, largest component
  double theta_major = 0;    // measured major-axis angle
  double rotation = 0;       // rotation actually applied
  bool flipped = false;      // 180-degree disambiguation applied
  GrayImage l_theta;         // rotated grayscale, background masked to 0
  BinaryImage rotated_mask;  // rotated + smoothed silhouette
  BinaryImage l_r;           // contour image
  BinaryImage l_bw;          // gradient mask
  ProfilePair profiles;      // trimmed profiles (raw fields pre-morphology, pre-trim)
  int cut_row = 0;
  std::vector<FingerShape> fingers;  // five, thumb..little
};

/// Full normalization: binarize, upright, split profiles, trim the wrist and
/// extract the five fingers.
HandStages normalize_hand(const GrayImage& image, const ImagingConfig& config = {});

/// normalize_hand followed by drop_thumb: the four fingers used for features.
std::vector<FingerShape> segment_fingers(const GrayImage& image,
                                         const ImagingConfig& config = {});

}  // namespace fingergeo::imaging
