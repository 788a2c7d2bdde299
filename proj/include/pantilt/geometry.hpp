#pragma once

// Pixel-space geometry of a detected face inside a camera frame.
//
// Image coordinates: origin at the top-left corner, u grows rightward,
// v grows downward. All values are in pixels and kept unrounded.

namespace pantilt {

struct BoundingBox {
  double x = 0.0;  // left edge
  double y = 0.0;  // top edge
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct FrameDims {
  double width = 0.0;   // horizontal resolution L
  double height = 0.0;  // vertical resolution B

  friend bool operator==(const FrameDims&, const FrameDims&) = default;
};

struct FaceCenter {
  double l = 0.0;
  double b = 0.0;

  friend bool operator==(const FaceCenter&, const FaceCenter&) = default;
};

// Distance the face center has to travel to reach the frame center.
struct PixelOffset {
  double dl = 0.0;
  double db = 0.0;

  friend bool operator==(const PixelOffset&, const PixelOffset&) = default;
};

/// Throws std::invalid_argument when the box has negative or non-finite fields.
void validate(const BoundingBox& bbox);
/// Throws std::invalid_argument unless both dimensions are finite and positive.
void validate(const FrameDims& frame);

FaceCenter face_center(const BoundingBox& bbox);

PixelOffset pixel_offset(const FaceCenter& center, const FrameDims& frame);

// Closed test: centers on the right/bottom border still count as in frame.
bool in_frame(const FaceCenter& center, const FrameDims& frame);

}  // namespace pantilt
