#include "pantilt/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace pantilt {

void validate(const BoundingBox& bbox) {
  const bool finite = std::isfinite(bbox.x) && std::isfinite(bbox.y) &&
                      std::isfinite(bbox.w) && std::isfinite(bbox.h);
  if (!finite) throw std::invalid_argument("bounding box has non-finite fields");
  if (bbox.w < 0.0 || bbox.h < 0.0)
    throw std::invalid_argument("bounding box has negative width or height");
  if (bbox.x < 0.0 || bbox.y < 0.0)
    throw std::invalid_argument("bounding box has negative x or y");
}

void validate(const FrameDims& frame) {
  if (!(std::isfinite(frame.width) && frame.width > 0.0))
    throw std::invalid_argument("frame width L must be positive");
  if (!(std::isfinite(frame.height) && frame.height > 0.0))
    throw std::invalid_argument("frame height B must be positive");
}

FaceCenter face_center(const BoundingBox& bbox) {
  return {bbox.x + bbox.w / 2.0, bbox.y + bbox.h / 2.0};
}

PixelOffset pixel_offset(const FaceCenter& center, const FrameDims& frame) {
  return {frame.width / 2.0 - center.l, frame.height / 2.0 - center.b};
}

bool in_frame(const FaceCenter& center, const FrameDims& frame) {
  return center.l >= 0.0 && center.l <= frame.width && center.b >= 0.0 &&
         center.b <= frame.height;
}

}  // namespace pantilt
