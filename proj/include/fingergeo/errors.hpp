#pragma once

#include <stdexcept>
#include <string>

namespace fingergeo {

/// Base class for every error raised by the pipeline.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// imaging
struct AllBackground : Error {
  AllBackground() : Error("no foreground pixel survives binarization") {}
  explicit AllBackground(const std::string& what) : Error(what) {}
};
struct DegenerateOrientation : Error {
  DegenerateOrientation() : Error("isotropic blob: orientation undefined") {}
};
struct CutAboveFingers : Error {
  explicit CutAboveFingers(int cut_row)
      : Error("wrist cut at row " + std::to_string(cut_row) +
              " removed every profile pixel") {}
};
struct SegmentationError : Error {
  SegmentationError(int left, int right)
      : Error("finger segmentation failed: " + std::to_string(left) +
              " left / " + std::to_string(right) + " right profile segments"),
        left_components(left),
        right_components(right) {}
  int left_components;
  int right_components;
};
struct MissingFinger : Error {
  explicit MissingFinger(const std::string& what) : Error(what) {}
};

// features
struct EmptyShape : Error {
  EmptyShape() : Error("empty finger mask") {}
};
struct TooFewRows : Error {
  explicit TooFewRows(const std::string& what) : Error(what) {}
};

// selection / classification
struct DegenerateLabels : Error {
  explicit DegenerateLabels(const std::string& what) : Error(what) {}
};
struct AllZeroRelevance : Error {
  AllZeroRelevance() : Error("all relevance scores are zero") {}
};
struct BadLayout : Error {
  explicit BadLayout(const std::string& what) : Error(what) {}
};
struct EmptyInput : Error {
  explicit EmptyInput(const std::string& what) : Error(what) {}
};
struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& what) : Error(what) {}
};
struct RowNeverOob : Error {
  explicit RowNeverOob(const std::string& what) : Error(what) {}
};

// evaluation
struct EmptyScores : Error {
  EmptyScores() : Error("genuine or imposter score set is empty") {}
};
struct ZeroMean : Error {
  explicit ZeroMean(int feature)
      : Error("training mean of feature " + std::to_string(feature) +
              " is zero") {}
};
struct UnknownSubject : Error {
  explicit UnknownSubject(const std::string& subject)
      : Error("probe subject '" + subject + "' has no enrolled samples") {}
};

// dataset / io
struct LayoutError : Error {
  explicit LayoutError(const std::string& what) : Error(what) {}
};
struct TooFewSubjects : Error {
  explicit TooFewSubjects(const std::string& what) : Error(what) {}
};
struct ParamsOutOfRange : Error {
  explicit ParamsOutOfRange(const std::string& what) : Error(what) {}
};
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace fingergeo
