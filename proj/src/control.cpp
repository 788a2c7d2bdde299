#include "pantilt/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pantilt {

void validate(const CameraIntrinsics& intrinsics) {
  validate(intrinsics.frame);
  if (!(intrinsics.theta > 0.0 && intrinsics.theta < 180.0))
    throw std::invalid_argument("horizontal field of view theta must be in (0, 180)");
  if (!(intrinsics.phi > 0.0 && intrinsics.phi < 180.0))
    throw std::invalid_argument("vertical field of view phi must be in (0, 180)");
}

void validate(const ServoConfig& cfg) {
  if (cfg.min_angle > cfg.neutral || cfg.neutral > cfg.max_angle)
    throw std::invalid_argument("servo angles must satisfy min <= neutral <= max");
  if (cfg.least_count < 1) throw std::invalid_argument("servo least_count must be >= 1");
  if (!(cfg.deadband >= 0.0) || !std::isfinite(cfg.deadband))
    throw std::invalid_argument("servo deadband must be >= 0");
  if (cfg.pan_sign != 1 && cfg.pan_sign != -1)
    throw std::invalid_argument("servo pan_sign must be +1 or -1");
  if (cfg.tilt_sign != 1 && cfg.tilt_sign != -1)
    throw std::invalid_argument("servo tilt_sign must be +1 or -1");
}

void validate(const PolicyConfig& policy) {
  if (policy.hold_frames < 0) throw std::invalid_argument("policy hold_frames must be >= 0");
  if (policy.return_rate < 1) throw std::invalid_argument("policy return_rate must be >= 1");
}

AngleDelta angle_deltas(const FaceCenter& center, const CameraIntrinsics& intrinsics) {
  if (!in_frame(center, intrinsics.frame)) throw OutOfFrameError();
  return {(0.5 - center.l / intrinsics.frame.width) * intrinsics.theta,
          (0.5 - center.b / intrinsics.frame.height) * intrinsics.phi};
}

int quantize_delta(double delta, const ServoConfig& cfg) {
  if (std::abs(delta) < cfg.deadband) return 0;
  // std::round rounds half away from zero.
  const double steps = std::round(delta / cfg.least_count);
  return static_cast<int>(steps) * cfg.least_count;
}

int clamp_angle(int angle, const ServoConfig& cfg) {
  return std::clamp(angle, cfg.min_angle, cfg.max_angle);
}

ServoCommand servo_paper_mode(const AngleDelta& delta, const ServoConfig& cfg) {
  return {clamp_angle(cfg.neutral + quantize_delta(delta.dtheta, cfg), cfg),
          clamp_angle(cfg.neutral + quantize_delta(delta.dphi, cfg), cfg)};
}

StepResult servo_incremental(const ControllerState& state, const AngleDelta& delta,
                             const ServoConfig& cfg) {
  const int qpan = quantize_delta(delta.dtheta, cfg);
  const int qtilt = quantize_delta(delta.dphi, cfg);
  if (qpan == 0 && qtilt == 0) return {state, std::nullopt};

  const int raw_pan = state.current.pan + cfg.pan_sign * qpan;
  const int raw_tilt = state.current.tilt + cfg.tilt_sign * qtilt;
  const ServoCommand cmd{clamp_angle(raw_pan, cfg), clamp_angle(raw_tilt, cfg)};

  ControllerState next = state;
  next.current = cmd;
  next.pan_saturated = cmd.pan != raw_pan;
  next.tilt_saturated = cmd.tilt != raw_tilt;
  return {next, cmd};
}

std::optional<BoundingBox> select_target(std::span<const BoundingBox> detections) {
  if (detections.empty()) return std::nullopt;
  auto better = [](const BoundingBox& a, const BoundingBox& b) {
    if (a.area() != b.area()) return a.area() > b.area();
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  };
  const BoundingBox* best = &detections.front();
  for (const auto& box : detections.subspan(1))
    if (better(box, *best)) best = &box;
  return *best;
}

namespace {

int step_toward(int from, int to, int rate) {
  if (from < to) return std::min(from + rate, to);
  if (from > to) return std::max(from - rate, to);
  return from;
}

StepResult targetless_step(const ControllerState& state, const ServoConfig& cfg,
                           const PolicyConfig& policy) {
  ControllerState next = state;
  if (next.frames_since_target < std::numeric_limits<int>::max()) ++next.frames_since_target;

  if (state.mode != TrackMode::returning && next.frames_since_target <= policy.hold_frames) {
    next.mode = TrackMode::holding;
    return {next, std::nullopt};
  }

  next.mode = TrackMode::returning;
  const ServoCommand target{step_toward(state.current.pan, cfg.neutral, policy.return_rate),
                            step_toward(state.current.tilt, cfg.neutral, policy.return_rate)};
  if (target == state.current) return {next, std::nullopt};
  next.current = target;
  next.pan_saturated = false;
  next.tilt_saturated = false;
  return {next, target};
}

}  // namespace

StepResult controller_step(const ControllerState& state,
                           std::span<const BoundingBox> detections,
                           const CameraIntrinsics& intrinsics, const ServoConfig& cfg,
                           const PolicyConfig& policy) {
  const auto target = select_target(detections);
  if (!target) return targetless_step(state, cfg, policy);

  const FaceCenter center = face_center(*target);
  if (!in_frame(center, intrinsics.frame)) return targetless_step(state, cfg, policy);
  const AngleDelta delta = angle_deltas(center, intrinsics);

  ControllerState tracked = state;
  tracked.frames_since_target = 0;
  tracked.mode = TrackMode::tracking;

  if (policy.mode == CommandMode::incremental) return servo_incremental(tracked, delta, cfg);

  const ServoCommand cmd = servo_paper_mode(delta, cfg);
  if (cmd == tracked.current) return {tracked, std::nullopt};
  tracked.current = cmd;
  tracked.pan_saturated = cmd.pan != cfg.neutral + quantize_delta(delta.dtheta, cfg);
  tracked.tilt_saturated = cmd.tilt != cfg.neutral + quantize_delta(delta.dphi, cfg);
  return {tracked, cmd};
}

const char* to_string(TrackMode mode) {
  switch (mode) {
    case TrackMode::tracking: return "tracking";
    case TrackMode::holding: return "holding";
    case TrackMode::returning: return "returning";
  }
  return "?";
}

const char* to_string(CommandMode mode) {
  return mode == CommandMode::incremental ? "incremental" : "paper_literal";
}

}  // namespace pantilt
