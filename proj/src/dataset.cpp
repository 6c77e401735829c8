#include "fingergeo/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <regex>
#include <set>

#include "fingergeo/errors.hpp"
#include "fingergeo/io.hpp"

namespace fingergeo::dataset {

namespace fs = std::filesystem;

std::vector<std::string> Corpus::subject_ids() const {
  std::set<std::string> ids;
  for (const CorpusEntry& e : entries) ids.insert(e.subject);
  return {ids.begin(), ids.end()};
}

LayoutConfig load_layout(const std::string& path) {
  const auto json = io::read_json(path);
  LayoutConfig layout;
  if (json.contains("pattern")) layout.pattern = json.at("pattern").get<std::string>();
  if (json.contains("hand"))
    layout.side = json.at("hand").get<std::string>() == "left" ? HandSide::Left
                                                               : HandSide::Right;
  return layout;
}

namespace {

std::string pattern_extension(const std::string& pattern) {
  const auto dot = pattern.rfind('.');
  return dot == std::string::npos ? "" : pattern.substr(dot);
}

/// Compile the layout pattern into a regex with (subject) and (session)
/// capture groups.
std::regex compile_pattern(const std::string& pattern, int& subject_group,
                           int& session_group) {
  std::string rx;
  int group = 0;
  subject_group = session_group = -1;
  for (std::size_t i = 0; i < pattern.size();) {
    if (pattern.compare(i, 9, "<subject>") == 0) {
      rx += "(.+)";
      subject_group = ++group;
      i += 9;
    } else if (pattern.compare(i, 9, "<session>") == 0) {
      rx += "([0-9]+)";
      session_group = ++group;
      i += 9;
    } else {
      const char c = pattern[i++];
      if (std::string("\\^$.|?*+()[]{}").find(c) != std::string::npos) rx += '\\';
      rx += c;
    }
  }
  if (subject_group < 0 || session_group < 0)
    throw LayoutError("pattern must contain <subject> and <session>: " + pattern);
  return std::regex(rx);
}

}  // namespace

Corpus load_corpus(const std::string& root, const LayoutConfig& layout) {
  if (!fs::is_directory(root)) throw LayoutError("not a directory: " + root);
  int subject_group = 0, session_group = 0;
  const std::regex rx = compile_pattern(layout.pattern, subject_group, session_group);
  const std::string ext = pattern_extension(layout.pattern);

  Corpus corpus;
  corpus.side = layout.side;
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());

  for (const std::string& name : names) {
    if (!ext.empty() && !name.ends_with(ext)) continue;
    if (name == "layout.json") continue;
    std::smatch match;
    if (!std::regex_match(name, match, rx))
      throw LayoutError("filename does not match pattern '" + layout.pattern +
                        "': " + (fs::path(root) / name).string());
    CorpusEntry e;
    e.subject = match[subject_group].str();
    e.session = std::stoi(match[session_group].str());
    e.path = (fs::path(root) / name).string();
    corpus.entries.push_back(std::move(e));
  }
  std::sort(corpus.entries.begin(), corpus.entries.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) {
              return a.subject != b.subject ? a.subject < b.subject
                                            : a.session < b.session;
            });

  if (corpus.entries.empty()) {
    corpus.warnings.push_back("no entries found under " + root);
  } else {
    std::map<std::string, int> sessions;
    for (const CorpusEntry& e : corpus.entries) ++sessions[e.subject];
    int usual = 0;
    for (const auto& [subject, n] : sessions) usual = std::max(usual, n);
    for (const auto& [subject, n] : sessions)
      if (n < usual)
        corpus.warnings.push_back("subject " + subject + " has " +
                                  std::to_string(n) + " of " +
                                  std::to_string(usual) + " sessions");
  }
  return corpus;
}

std::pair<Corpus, Corpus> split_subjects(const Corpus& corpus, int ratio_train,
                                         int ratio_test, std::uint64_t seed) {
  if (ratio_train < 1 || ratio_test < 1)
    throw ParamsOutOfRange("split ratio parts must be positive");
  std::vector<std::string> subjects = corpus.subject_ids();
  const int n = static_cast<int>(subjects.size());
  if (n < 2) throw TooFewSubjects("need at least 2 subjects, got " + std::to_string(n));

  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(subjects[i], subjects[j]);
  }
  int train_n = static_cast<int>(std::lround(
      static_cast<double>(n) * ratio_train / (ratio_train + ratio_test)));
  train_n = std::clamp(train_n, 1, n - 1);

  std::set<std::string> train_set(subjects.begin(), subjects.begin() + train_n);
  Corpus train, test;
  train.side = test.side = corpus.side;
  for (const CorpusEntry& e : corpus.entries)
    (train_set.contains(e.subject) ? train : test).entries.push_back(e);
  return {train, test};
}

// --- synthetic hands ---------------------------------------------------------

void HandParams::validate() const {
  for (int i = 0; i < 5; ++i)
    if (finger_length[i] <= 0 || base_half_width[i] <= 0 || taper[i] <= 0)
      throw ParamsOutOfRange("finger geometry must be positive");
  if (palm_half_width <= 0 || palm_half_height <= 0 || wrist_half_width <= 0)
    throw ParamsOutOfRange("palm geometry must be positive");
  if (noise_scale < 0 || noise_scale > 0.2)
    throw ParamsOutOfRange("noise scale must lie in [0, 0.2]");
  if (hand_intensity < 64 || hand_intensity > 255)
    throw ParamsOutOfRange("hand intensity must lie in [64, 255]");
}

namespace {

constexpr double kRad = std::numbers::pi / 180.0;

struct Capsule {
  double ax, ay, bx, by;  // axis from base (a) to tip (b)
  double w0, w1;          // half widths at base and tip

  bool contains(double px, double py) const {
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    double t = ((px - ax) * vx + (py - ay) * vy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
    const double w = w0 + (w1 - w0) * t;
    return dx * dx + dy * dy <= w * w;
  }
};

struct HandShape {
  double cx, cy;        // palm center (canvas coordinates)
  double pw, ph;        // palm superellipse semi-axes
  double wrist_hw;
  double cos_rot, sin_rot;
  std::array<Capsule, 5> fingers;

  bool contains(int px, int py) const {
    // undo the pose rotation about the palm center
    const double dx = px - cx, dy = py - cy;
    const double x = cx + cos_rot * dx + sin_rot * dy;
    const double y = cy - sin_rot * dx + cos_rot * dy;

    const double ex = std::abs((x - cx) / pw), ey = std::abs((y - cy) / ph);
    if (ex * ex * ex * ex + ey * ey * ey * ey <= 1.0) return true;
    if (std::abs(x - cx) <= wrist_hw && y >= cy) return true;
    for (const Capsule& f : fingers)
      if (f.contains(x, y)) return true;
    return false;
  }
};

HandShape build_shape(const HandParams& p) {
  HandShape s;
  s.cx = kCanvasWidth / 2.0 + p.shift_x;
  s.cy = 318.0 + p.shift_y;
  s.pw = p.palm_half_width;
  s.ph = p.palm_half_height;
  s.wrist_hw = p.wrist_half_width;
  const double rot = p.rotation_deg * kRad;
  s.cos_rot = std::cos(rot);
  s.sin_rot = std::sin(rot);

  // index..little anchored on the knuckle line, thumb on the lower left
  const double anchor_scale = p.palm_half_width / 84.0;
  const double knuckle_y = s.cy - 0.75 * p.palm_half_height;
  const double offsets[4] = {-69, -23, 23, 69};
  for (int i = 0; i < 4; ++i) {
    const int f = i + 1;  // params index: 1..4
    Capsule c;
    c.ax = s.cx + offsets[i] * anchor_scale;
    c.ay = knuckle_y + 14;  // embedded so the silhouette merges
    const double dir = p.direction_deg[f] * kRad;
    c.bx = c.ax + p.finger_length[f] * std::sin(dir);
    c.by = c.ay - p.finger_length[f] * std::cos(dir);
    c.w0 = p.base_half_width[f];
    c.w1 = p.base_half_width[f] * p.taper[f];
    s.fingers[f] = c;
  }
  {
    Capsule t;
    t.ax = s.cx - 0.85 * p.palm_half_width;
    t.ay = s.cy + 0.02 * p.palm_half_height;
    const double dir = p.direction_deg[0] * kRad;
    t.bx = t.ax + p.finger_length[0] * std::sin(dir);
    t.by = t.ay - p.finger_length[0] * std::cos(dir);
    t.w0 = p.base_half_width[0];
    t.w1 = p.base_half_width[0] * p.taper[0];
    s.fingers[0] = t;
  }
  return s;
}

}  // namespace

GrayImage synth_hand(const HandParams& params, std::uint64_t seed) {
  params.validate();
  const HandShape shape = build_shape(params);
  std::mt19937_64 rng(seed);
  GrayImage image(kCanvasHeight, kCanvasWidth);
  const auto fg = static_cast<std::uint8_t>(params.hand_intensity);
  for (int r = 0; r < kCanvasHeight; ++r)
    for (int c = 0; c < kCanvasWidth; ++c)
      image(r, c) = shape.contains(c, r)
                        ? fg
                        : static_cast<std::uint8_t>(rng() % 41);  // [0, 40]
  return image;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // 53-bit mantissa draw; avoids distribution objects so streams are portable
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace

HandParams draw_subject_params(std::uint64_t seed, std::uint64_t subject_index) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + subject_index * 2 + 1);
  HandParams p;
  for (int i = 0; i < 5; ++i) {
    p.finger_length[i] *= uniform(rng, 0.88, 1.12);
    p.base_half_width[i] *= uniform(rng, 0.90, 1.10);
    p.taper[i] = uniform(rng, 0.76, 0.84);
    const double spread = i == 0 ? 4.0 : 2.0;
    p.direction_deg[i] += uniform(rng, -spread, spread);
  }
  const double palm_scale = uniform(rng, 0.94, 1.06);
  p.palm_half_width *= palm_scale;
  p.palm_half_height *= uniform(rng, 0.94, 1.06);
  p.wrist_half_width *= uniform(rng, 0.94, 1.06);
  p.hand_intensity = static_cast<int>(std::lround(uniform(rng, 190, 210)));
  return p;
}

HandParams jitter_sample(const HandParams& subject, std::uint64_t seed,
                         const SynthOptions& options) {
  std::mt19937_64 rng(seed);
  HandParams p = subject;
  const double ns = options.noise_scale;
  for (int i = 0; i < 5; ++i) {
    p.finger_length[i] *= 1.0 + ns * uniform(rng, -1, 1);
    p.base_half_width[i] *= 1.0 + ns * uniform(rng, -1, 1);
  }
  p.rotation_deg = uniform(rng, -options.max_rotation_deg, options.max_rotation_deg);
  p.shift_x = static_cast<int>(std::lround(uniform(rng, -options.max_shift, options.max_shift)));
  p.shift_y = static_cast<int>(std::lround(uniform(rng, -options.max_shift, options.max_shift)));
  p.noise_scale = ns;
  return p;
}

Corpus synth_corpus(int n_subjects, int samples_per_subject, std::uint64_t seed,
                    const SynthOptions& options) {
  if (n_subjects < 2) throw TooFewSubjects("synthetic corpus needs >= 2 subjects");
  if (samples_per_subject < 1)
    throw ParamsOutOfRange("samples per subject must be >= 1");

  Corpus corpus;
  for (int s = 0; s < n_subjects; ++s) {
    const HandParams subject = draw_subject_params(seed, static_cast<std::uint64_t>(s));
    char id[16];
    std::snprintf(id, sizeof(id), "s%03d", s + 1);
    for (int k = 0; k < samples_per_subject; ++k) {
      const std::uint64_t sample_seed =
          seed ^ (static_cast<std::uint64_t>(s) << 20) ^ (static_cast<std::uint64_t>(k) + 0xabcdULL);
      CorpusEntry e;
      e.subject = id;
      e.session = k + 1;
      e.image = synth_hand(jitter_sample(subject, sample_seed, options), sample_seed);
      corpus.entries.push_back(std::move(e));
    }
  }
  return corpus;
}

void materialize(const Corpus& corpus, const std::string& directory) {
  fs::create_directories(directory);
  for (const CorpusEntry& e : corpus.entries) {
    if (!e.image) throw IoError("cannot materialize an entry without pixels");
    const std::string name = e.subject + "_" + std::to_string(e.session) + ".png";
    io::write_png((fs::path(directory) / name).string(), *e.image);
  }
  nlohmann::json layout;
  layout["pattern"] = "<subject>_<session>.png";
  layout["hand"] = corpus.side == HandSide::Left ? "left" : "right";
  io::write_json((fs::path(directory) / "layout.json").string(), layout);
}

}  // namespace fingergeo::dataset
