#include "pantilt/ingest.hpp"

#include <istream>
#include <utility>

#include "pantilt/text.hpp"

namespace pantilt::ingest {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_line: return "malformed_line";
    case ErrorKind::negative_dimension: return "negative_dimension";
    case ErrorKind::bad_confidence: return "bad_confidence";
    case ErrorKind::out_of_order: return "out_of_order";
  }
  return "?";
}

IngestError::IngestError(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(text::trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double number_field(std::string_view field, const char* name) {
  const auto value = text::parse_double(field);
  if (!value)
    throw IngestError(ErrorKind::malformed_line,
                      std::string(name) + " is not a number: '" + std::string(field) + "'");
  return *value;
}

}  // namespace

DetectionRecord parse_detection_line(std::string_view line) {
  const auto fields = split_fields(line);
  if (fields.size() != 1 && fields.size() != 5 && fields.size() != 6)
    throw IngestError(ErrorKind::malformed_line,
                      "expected 1, 5 or 6 fields, got " + std::to_string(fields.size()));

  DetectionRecord rec;
  const auto ts = text::parse_int(fields[0]);
  if (!ts)
    throw IngestError(ErrorKind::malformed_line,
                      "timestamp is not an integer: '" + std::string(fields[0]) + "'");
  if (*ts < 0) throw IngestError(ErrorKind::malformed_line, "timestamp is negative");
  rec.ts = *ts;
  if (fields.size() == 1) return rec;

  BoundingBox box{number_field(fields[1], "x"), number_field(fields[2], "y"),
                  number_field(fields[3], "w"), number_field(fields[4], "h")};
  if (box.w < 0.0 || box.h < 0.0)
    throw IngestError(ErrorKind::negative_dimension, "width and height must be >= 0");
  if (box.x < 0.0 || box.y < 0.0)
    throw IngestError(ErrorKind::negative_dimension, "x and y must be >= 0");
  rec.bbox = box;

  if (fields.size() == 6) {
    rec.confidence = number_field(fields[5], "confidence");
    if (rec.confidence < 0.0 || rec.confidence > 1.0)
      throw IngestError(ErrorKind::bad_confidence, "confidence must be within [0, 1]");
  }
  return rec;
}

std::string format_detection_record(const DetectionRecord& record) {
  std::string out = std::to_string(record.ts);
  if (!record.bbox) return out;
  const auto& b = *record.bbox;
  for (double v : {b.x, b.y, b.w, b.h, record.confidence}) {
    out += ',';
    out += text::shortest(v);
  }
  return out;
}

std::optional<FrameBatch> FrameBatcher::push(const DetectionRecord& record) {
  if (pending_ && record.ts < pending_->ts)
    throw IngestError(ErrorKind::out_of_order, "timestamp " + std::to_string(record.ts) +
                                                   " follows " + std::to_string(pending_->ts));
  if (pending_ && record.ts == pending_->ts) {
    if (record.bbox) pending_->detections.push_back(*record.bbox);
    return std::nullopt;
  }
  auto done = std::exchange(pending_, FrameBatch{record.ts, {}});
  if (record.bbox) pending_->detections.push_back(*record.bbox);
  return done;
}

std::optional<FrameBatch> FrameBatcher::finish() { return std::exchange(pending_, std::nullopt); }

std::vector<FrameBatch> batch_frames(std::span<const DetectionRecord> records) {
  std::vector<FrameBatch> frames;
  FrameBatcher batcher;
  for (const auto& rec : records)
    if (auto frame = batcher.push(rec)) frames.push_back(std::move(*frame));
  if (auto frame = batcher.finish()) frames.push_back(std::move(*frame));
  return frames;
}

void read_frames(std::istream& in, const std::function<void(const FrameBatch&)>& on_frame,
                 const std::function<bool(const LineError&)>& on_error) {
  FrameBatcher batcher;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    try {
      if (auto frame = batcher.push(parse_detection_line(body))) on_frame(*frame);
    } catch (const IngestError& e) {
      if (!on_error({line_no, e.kind(), e.what()})) return;
    }
  }
  if (auto frame = batcher.finish()) on_frame(*frame);
}

}  // namespace pantilt::ingest
