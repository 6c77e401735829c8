#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fingergeo/image.hpp"

namespace fingergeo::dataset {

enum class HandSide { Right, Left };

struct CorpusEntry {
  std::string subject;
  int session = 0;
  std::string path;                  // empty for in-memory entries
  std::optional<GrayImage> image;    // set for synthetic corpora
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  HandSide side = HandSide::Right;
  std::vector<std::string> warnings;

  std::vector<std::string> subject_ids() const;
};

/// Filename pattern with <subject> and <session> placeholders, e.g.
/// "<subject>_<session>.png".
struct LayoutConfig {
  std::string pattern = "<subject>_<session>.png";
  HandSide side = HandSide::Right;
};

LayoutConfig load_layout(const std::string& path);

/// Scan a directory for files matching the layout pattern. Files with the
/// pattern's extension that do not parse raise LayoutError; other files are
/// ignored. Subjects with uneven session counts produce warnings.
Corpus load_corpus(const std::string& root, const LayoutConfig& layout = {});

/// Subject-disjoint split: round(n * num / (num + den)) subjects go to the
/// training corpus, chosen by a seeded shuffle.
std::pair<Corpus, Corpus> split_subjects(const Corpus& corpus, int ratio_train,
                                         int ratio_test, std::uint64_t seed);

/// Parametric hand: superellipse palm, wrist stub and five tapered capsule
/// fingers, rendered at the Bosphorus scan geometry (383x526, 45 dpi).
/// Finger arrays run thumb, index, middle, ring, little.
struct HandParams {
  std::array<double, 5> finger_length{108, 150, 170, 158, 122};
  std::array<double, 5> base_half_width{20, 17.5, 18.5, 17.5, 15.5};
  std::array<double, 5> taper{0.80, 0.80, 0.80, 0.80, 0.80};
  std::array<double, 5> direction_deg{-38, -5, -1, 2, 5};  // from vertical
  double palm_half_width = 84;
  double palm_half_height = 88;
  double wrist_half_width = 46;
  double rotation_deg = 0;  // in-plane pose
  int shift_x = 0, shift_y = 0;
  int hand_intensity = 200;   // constant foreground level
  double noise_scale = 0.03;  // intra-class jitter fraction, [0, 0.2]

  void validate() const;
};

inline constexpr int kCanvasWidth = 383;
inline constexpr int kCanvasHeight = 526;

/// Render a bright hand silhouette over a dark noisy background; pure in
/// (params, seed).
GrayImage synth_hand(const HandParams& params, std::uint64_t seed);

struct SynthOptions {
  double noise_scale = 0.03;
  double max_rotation_deg = 20.0;
  int max_shift = 5;
};

/// Per-subject parameter draw ranges (multiplicative, around HandParams
/// defaults): finger lengths and widths 0.88..1.12, palm 0.94..1.06, taper
/// 0.76..0.84, per-finger direction +-2 deg (thumb +-4), intensity 190..210.
HandParams draw_subject_params(std::uint64_t seed, std::uint64_t subject_index);

/// In-memory corpus of n subjects x samples with intra-class jitter: pose
/// rotation up to +-max_rotation, integer shifts, geometry scaled by
/// 1 +- noise_scale.
Corpus synth_corpus(int n_subjects, int samples_per_subject, std::uint64_t seed,
                    const SynthOptions& options = {});

/// Apply per-sample jitter to subject parameters; exposed for oracle use.
HandParams jitter_sample(const HandParams& subject, std::uint64_t seed,
                         const SynthOptions& options);

/// Write a synthetic corpus to disk in the loader layout
/// (<subject>_<session>.png plus layout.json).
void materialize(const Corpus& corpus, const std::string& directory);

}  // namespace fingergeo::dataset
