#include "fingergeo/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fingergeo/errors.hpp"

namespace fingergeo::io {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint8_t luma(int r, int g, int b) {
  return static_cast<std::uint8_t>(
      std::clamp<long>(std::lround(0.299 * r + 0.587 * g + 0.114 * b), 0, 255));
}

GrayImage read_png_gray(const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw IoError("png read failed: " + path + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("png decode failed: " + path + ": " + image.message);
  }
  GrayImage out(image.height, image.width);
  for (png_uint_32 r = 0; r < image.height; ++r)
    for (png_uint_32 c = 0; c < image.width; ++c) {
      const std::uint8_t* px = buffer.data() + 3 * (r * image.width + c);
      out(r, c) = luma(px[0], px[1], px[2]);
    }
  png_image_free(&image);
  return out;
}

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (p[1] << 8) | (p[2] << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

GrayImage read_bmp(const std::string& path) {
  const std::vector<std::uint8_t> data = read_file(path);
  if (data.size() < 54 || data[0] != 'B' || data[1] != 'M')
    throw IoError("not a BMP file: " + path);
  const std::uint32_t pixel_offset = le32(&data[10]);
  const std::uint32_t header_size = le32(&data[14]);
  const std::int32_t width = static_cast<std::int32_t>(le32(&data[18]));
  std::int32_t height = static_cast<std::int32_t>(le32(&data[22]));
  const std::uint16_t bpp = le16(&data[28]);
  const std::uint32_t compression = le32(&data[30]);
  if (compression != 0 || (bpp != 24 && bpp != 8))
    throw IoError("unsupported BMP (need 8-bit palette or 24-bit uncompressed): " + path);
  const bool bottom_up = height > 0;
  height = std::abs(height);
  if (width <= 0 || height <= 0) throw IoError("bad BMP dimensions: " + path);

  std::vector<std::uint8_t> palette_gray(256, 0);
  if (bpp == 8) {
    const std::uint32_t palette_at = 14 + header_size;
    const std::uint32_t n_colors = le32(&data[46]) ? le32(&data[46]) : 256;
    for (std::uint32_t i = 0; i < n_colors && i < 256; ++i) {
      const std::uint8_t* e = &data[palette_at + 4 * i];
      palette_gray[i] = luma(e[2], e[1], e[0]);  // stored BGR
    }
  }

  const std::size_t row_bytes = ((static_cast<std::size_t>(width) * bpp + 31) / 32) * 4;
  GrayImage out(height, width);
  for (std::int32_t r = 0; r < height; ++r) {
    const std::size_t src_row = bottom_up ? height - 1 - r : r;
    const std::uint8_t* row = data.data() + pixel_offset + src_row * row_bytes;
    for (std::int32_t c = 0; c < width; ++c) {
      if (bpp == 24) {
        const std::uint8_t* px = row + 3 * c;
        out(r, c) = luma(px[2], px[1], px[0]);  // BGR order
      } else {
        out(r, c) = palette_gray[row[c]];
      }
    }
  }
  return out;
}

}  // namespace

GrayImage read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::uint8_t magic[2] = {0, 0};
  in.read(reinterpret_cast<char*>(magic), 2);
  in.close();
  if (magic[0] == 0x89 && magic[1] == 'P') return read_png_gray(path);
  if (magic[0] == 'B' && magic[1] == 'M') return read_bmp(path);
  throw IoError("unrecognized image format (PNG or BMP expected): " + path);
}

void write_png(const std::string& path, const GrayImage& image) {
  png_image out;
  std::memset(&out, 0, sizeof(out));
  out.version = PNG_IMAGE_VERSION;
  out.width = static_cast<png_uint_32>(image.cols());
  out.height = static_cast<png_uint_32>(image.rows());
  out.format = PNG_FORMAT_GRAY;
  // row-major contiguous uint8 maps straight through
  if (!png_image_write_to_file(&out, path.c_str(), 0, image.data(), 0, nullptr))
    throw IoError("png write failed: " + path + ": " + out.message);
}

void write_png(const std::string& path, const BinaryImage& mask) {
  GrayImage g(mask.rows(), mask.cols());
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c) g(r, c) = mask(r, c) ? 255 : 0;
  write_png(path, g);
}

void write_bmp(const std::string& path, const GrayImage& image) {
  const int w = static_cast<int>(image.cols());
  const int h = static_cast<int>(image.rows());
  const std::size_t row_bytes = ((static_cast<std::size_t>(w) * 24 + 31) / 32) * 4;
  const std::uint32_t data_size = static_cast<std::uint32_t>(row_bytes * h);
  const std::uint32_t file_size = 54 + data_size;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  auto put16 = [&](std::uint16_t v) { out.put(v & 0xff).put(v >> 8); };
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.put((v >> (8 * i)) & 0xff);
  };
  out.put('B').put('M');
  put32(file_size);
  put32(0);
  put32(54);
  put32(40);
  put32(static_cast<std::uint32_t>(w));
  put32(static_cast<std::uint32_t>(h));
  put16(1);
  put16(24);
  put32(0);
  put32(data_size);
  put32(2835);
  put32(2835);
  put32(0);
  put32(0);
  std::vector<std::uint8_t> row(row_bytes, 0);
  for (int r = h - 1; r >= 0; --r) {  // bottom-up
    for (int c = 0; c < w; ++c) {
      const std::uint8_t v = image(r, c);
      row[3 * c] = row[3 * c + 1] = row[3 * c + 2] = v;
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row_bytes));
  }
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json json;
  try {
    in >> json;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad JSON in " + path + ": " + e.what());
  }
  return json;
}

void write_json(const std::string& path, const nlohmann::json& json) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << json.dump(2) << "\n";
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void write_matrix_csv(const std::string& path, const features::FeatureMatrix& matrix) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "subject_id,sample_id";
  for (Eigen::Index c = 0; c < matrix.cols(); ++c) out << ",f" << (c + 1);
  out << "\n";
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    out << matrix.subjects[static_cast<std::size_t>(r)] << ","
        << matrix.samples[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < matrix.cols(); ++c)
      out << "," << format_double(matrix.values(r, c));
    out << "\n";
  }
}

features::FeatureMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV: " + path);
  const auto columns = static_cast<Eigen::Index>(
      std::count(line.begin(), line.end(), ',') - 1);
  if (columns < 1) throw IoError("bad CSV header in " + path);

  features::FeatureMatrix m;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (!std::getline(ss, cell, ',')) throw IoError("bad CSV row in " + path);
    m.subjects.push_back(cell);
    if (!std::getline(ss, cell, ',')) throw IoError("bad CSV row in " + path);
    m.samples.push_back(std::stoi(cell));
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<Eigen::Index>(row.size()) != columns)
      throw IoError("ragged CSV row in " + path);
    rows.push_back(std::move(row));
  }
  m.values.resize(static_cast<Eigen::Index>(rows.size()), columns);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (Eigen::Index c = 0; c < columns; ++c)
      m.values(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
  if (columns == features::kFeatureCount) m.column_names = features::feature_column_names();
  return m;
}

nlohmann::json to_json(const features::NormalizationParams& params) {
  nlohmann::json json;
  json["min"] = std::vector<double>(params.min.data(), params.min.data() + params.min.size());
  json["max"] = std::vector<double>(params.max.data(), params.max.data() + params.max.size());
  return json;
}

features::NormalizationParams normalization_from_json(const nlohmann::json& json) {
  const auto lo = json.at("min").get<std::vector<double>>();
  const auto hi = json.at("max").get<std::vector<double>>();
  if (lo.size() != hi.size()) throw IoError("normalization min/max length mismatch");
  features::NormalizationParams p;
  p.min = Eigen::Map<const Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size()));
  p.max = Eigen::Map<const Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size()));
  return p;
}

nlohmann::json selection_to_json(const selection::SelectionResult& result,
                                 const std::vector<std::string>& column_names) {
  auto name_of = [&](int c) {
    return c < static_cast<int>(column_names.size()) ? column_names[static_cast<std::size_t>(c)]
                                                     : "f" + std::to_string(c + 1);
  };
  nlohmann::json json;
  json["delta"] = result.delta;
  json["epsilon"] = result.epsilon;
  json["ordering"] = selection::to_string(result.ordering);
  json["seed"] = result.seed;
  json["granularity"] = selection::to_string(result.granularity);
  json["selected"] = nlohmann::json::array();
  json["selected_indices"] = result.selected;
  for (const int c : result.selected) json["selected"].push_back(name_of(c));
  json["ranks"] = result.unit_ranks;
  json["weights"] = result.unit_weights;
  json["unit_accuracies"] = result.unit_accuracies;
  json["trace"] = result.accuracy_trace;
  json["removals"] = nlohmann::json::array();
  for (const auto& removal : result.removals) {
    nlohmann::json r;
    r["columns"] = removal.columns;
    r["change"] = removal.change;
    r["accuracy"] = removal.accuracy;
    json["removals"].push_back(r);
  }
  json["picks"] = nlohmann::json::array();
  for (const auto& pick : result.picks) {
    nlohmann::json p;
    p["columns"] = pick.columns;
    p["gain"] = pick.gain;
    p["accuracy"] = pick.accuracy;
    json["picks"].push_back(p);
  }
  return json;
}

selection::SelectionResult selection_from_json(const nlohmann::json& json) {
  selection::SelectionResult r;
  r.delta = json.at("delta").get<double>();
  r.epsilon = json.at("epsilon").get<double>();
  r.seed = json.at("seed").get<std::uint64_t>();
  r.ordering = json.at("ordering").get<std::string>() == "rank"
                   ? selection::Ordering::Rank
                   : selection::Ordering::Random;
  r.granularity = json.at("granularity").get<std::string>() == "global"
                      ? selection::Granularity::Global
                      : selection::Granularity::Local;
  r.selected = json.at("selected_indices").get<std::vector<int>>();
  r.unit_ranks = json.at("ranks").get<std::vector<int>>();
  r.unit_weights = json.at("weights").get<std::vector<double>>();
  r.unit_accuracies = json.at("unit_accuracies").get<std::vector<double>>();
  r.accuracy_trace = json.at("trace").get<std::vector<double>>();
  return r;
}

nlohmann::json forest_to_json(const classify::ForestModel& model) {
  nlohmann::json json;
  json["format"] = "fingergeo-forest";
  json["version"] = 1;
  json["n_classes"] = model.n_classes;
  json["seed"] = model.seed;
  json["bootstraps"] = model.bootstraps;
  json["trees"] = nlohmann::json::array();
  for (const classify::Tree& tree : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const classify::TreeNode& n : tree.nodes) {
      nlohmann::json node;
      node["feature"] = n.feature;
      node["threshold"] = n.threshold;
      node["left"] = n.left;
      node["right"] = n.right;
      if (n.is_leaf())
        node["dist"] = std::vector<double>(n.distribution.data(),
                                           n.distribution.data() + n.distribution.size());
      nodes.push_back(node);
    }
    json["trees"].push_back(nodes);
  }
  return json;
}

classify::ForestModel forest_from_json(const nlohmann::json& json) {
  if (json.value("format", "") != "fingergeo-forest" || json.value("version", 0) != 1)
    throw IoError("not a fingergeo forest dump");
  classify::ForestModel model;
  model.n_classes = json.at("n_classes").get<int>();
  model.seed = json.at("seed").get<std::uint64_t>();
  model.bootstraps = json.at("bootstraps").get<std::vector<std::vector<int>>>();
  for (const auto& nodes : json.at("trees")) {
    classify::Tree tree;
    for (const auto& node : nodes) {
      classify::TreeNode n;
      n.feature = node.at("feature").get<int>();
      n.threshold = node.at("threshold").get<double>();
      n.left = node.at("left").get<int>();
      n.right = node.at("right").get<int>();
      if (node.contains("dist")) {
        const auto dist = node.at("dist").get<std::vector<double>>();
        n.distribution = Eigen::Map<const Eigen::VectorXd>(
            dist.data(), static_cast<Eigen::Index>(dist.size()));
      }
      tree.nodes.push_back(std::move(n));
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

void write_scores_csv(const std::string& path, const eval::ScoreSets& scores) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "score,kind\n";
  for (const double s : scores.genuine) out << format_double(s) << ",genuine\n";
  for (const double s : scores.imposter) out << format_double(s) << ",imposter\n";
}

eval::ScoreSets read_scores_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  eval::ScoreSets sets;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("bad score row in " + path);
    const double score = std::stod(line.substr(0, comma));
    const std::string kind = line.substr(comma + 1);
    if (kind == "genuine")
      sets.genuine.push_back(score);
    else if (kind == "imposter")
      sets.imposter.push_back(score);
    else
      throw IoError("bad score kind '" + kind + "' in " + path);
  }
  return sets;
}

void write_roc_csv(const std::string& path, const eval::RocCurve& curve) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "threshold,far,frr,gar\n";
  for (const eval::RocPoint& p : curve.points)
    out << format_double(p.threshold) << "," << format_double(p.far) << ","
        << format_double(p.frr) << "," << format_double(p.gar) << "\n";
}

void write_curve_csv(const std::string& path, const std::vector<double>& errors) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "x,error\n";
  for (std::size_t i = 0; i < errors.size(); ++i)
    out << (i + 1) << "," << format_double(errors[i]) << "\n";
}

std::string file_hash_hex(const std::string& path) {
  const std::vector<std::uint8_t> data = read_file(path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const std::uint8_t byte : data) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace fingergeo::io
