#pragma once

// Detection log ingestion. One detection per line:
//
//   ts,x,y,w,h[,confidence]   a face box in frame ts
//   ts                        a frame without detections
//
// ts is an integer millisecond timestamp; the other fields are decimal
// numbers. Whitespace around fields is ignored.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pantilt/geometry.hpp"

namespace pantilt::ingest {

struct DetectionRecord {
  std::int64_t ts = 0;
  std::optional<BoundingBox> bbox;
  double confidence = 1.0;

  friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

struct FrameBatch {
  std::int64_t ts = 0;
  std::vector<BoundingBox> detections;

  friend bool operator==(const FrameBatch&, const FrameBatch&) = default;
};

enum class ErrorKind { malformed_line, negative_dimension, bad_confidence, out_of_order };

const char* to_string(ErrorKind kind);

class IngestError : public std::runtime_error {
 public:
  IngestError(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parses one line. Negative x or y is reported as negative_dimension.
DetectionRecord parse_detection_line(std::string_view line);

/// Canonical text form; parse_detection_line(format_detection_record(r)) == r.
std::string format_detection_record(const DetectionRecord& record);

/// Incremental batching: records with equal ts merge into one frame.
class FrameBatcher {
 public:
  /// Returns the previous frame once a record with a later ts arrives.
  /// Throws IngestError(out_of_order) if ts decreases; the batcher is left
  /// unchanged in that case.
  std::optional<FrameBatch> push(const DetectionRecord& record);
  /// Flushes the frame in progress, if any.
  std::optional<FrameBatch> finish();

 private:
  std::optional<FrameBatch> pending_;
};

std::vector<FrameBatch> batch_frames(std::span<const DetectionRecord> records);

struct LineError {
  std::size_t line = 0;  // 1-based
  ErrorKind kind;
  std::string message;
};

/// Reads a detection log, skipping blank lines and lines starting with '#'.
/// Each bad line is reported through on_error; the reader stops early when
/// on_error returns false. Frames are delivered in order to on_frame.
void read_frames(std::istream& in, const std::function<void(const FrameBatch&)>& on_frame,
                 const std::function<bool(const LineError&)>& on_error);

}  // namespace pantilt::ingest
