#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fingergeo/classify.hpp"
#include "fingergeo/eval.hpp"
#include "fingergeo/features.hpp"
#include "fingergeo/image.hpp"
#include "fingergeo/selection.hpp"

namespace fingergeo::io {

/// Read an 8-bit grayscale or 24-bit color PNG/BMP (by magic bytes); color
/// converts with the 0.299 R + 0.587 G + 0.114 B luma weighting.
GrayImage read_image(const std::string& path);

void write_png(const std::string& path, const GrayImage& image);
void write_png(const std::string& path, const BinaryImage& mask);  // 0 / 255

/// Minimal 24-bit uncompressed BMP writer (loader tests).
void write_bmp(const std::string& path, const GrayImage& image);

nlohmann::json read_json(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& json);

/// FeatureMatrix CSV, header subject_id,sample_id,f1..f52; values printed at
/// 9 significant digits so write-read-write round-trips byte-identically.
void write_matrix_csv(const std::string& path, const features::FeatureMatrix& matrix);
features::FeatureMatrix read_matrix_csv(const std::string& path);

nlohmann::json to_json(const features::NormalizationParams& params);
features::NormalizationParams normalization_from_json(const nlohmann::json& json);

nlohmann::json selection_to_json(const selection::SelectionResult& result,
                                 const std::vector<std::string>& column_names);
selection::SelectionResult selection_from_json(const nlohmann::json& json);

nlohmann::json forest_to_json(const classify::ForestModel& model);
classify::ForestModel forest_from_json(const nlohmann::json& json);

/// Score CSV: `score,kind` rows with kind in {genuine, imposter}.
void write_scores_csv(const std::string& path, const eval::ScoreSets& scores);
eval::ScoreSets read_scores_csv(const std::string& path);

/// ROC CSV: `threshold,far,frr,gar` rows.
void write_roc_csv(const std::string& path, const eval::RocCurve& curve);

/// Plot-ready `x,error` rows (oob and CV curves).
void write_curve_csv(const std::string& path, const std::vector<double>& errors);

/// FNV-1a of a file's bytes, as hex (manifest artifact hashes).
std::string file_hash_hex(const std::string& path);

std::string format_double(double value);  // %.9g

}  // namespace fingergeo::io
