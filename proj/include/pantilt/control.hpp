#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>

#include "pantilt/geometry.hpp"

namespace pantilt {

struct CameraIntrinsics {
  FrameDims frame{640.0, 480.0};
  double theta = 60.0;  // full horizontal field of view, degrees
  double phi = 45.0;    // full vertical field of view, degrees

  friend bool operator==(const CameraIntrinsics&, const CameraIntrinsics&) = default;
};

// Continuous signed rotation, in degrees, that would bring the face to the
// frame center under the linear pixel-to-angle law.
struct AngleDelta {
  double dtheta = 0.0;
  double dphi = 0.0;

  friend bool operator==(const AngleDelta&, const AngleDelta&) = default;
};

struct ServoConfig {
  int min_angle = 0;
  int max_angle = 180;
  int neutral = 90;
  int least_count = 1;
  double deadband = 0.5;
  // Maps a delta to a servo direction. A target right of center yields a
  // negative dtheta but needs the pan servo to increase, hence -1.
  int pan_sign = -1;
  int tilt_sign = +1;

  friend bool operator==(const ServoConfig&, const ServoConfig&) = default;
};

struct ServoCommand {
  int pan = 90;
  int tilt = 90;

  friend bool operator==(const ServoCommand&, const ServoCommand&) = default;
};

enum class CommandMode { incremental, paper_literal };

// Lost-target behavior and command mode for controller_step.
struct PolicyConfig {
  int hold_frames = 30;
  int return_rate = 2;  // degrees per step toward neutral
  CommandMode mode = CommandMode::incremental;

  friend bool operator==(const PolicyConfig&, const PolicyConfig&) = default;
};

enum class TrackMode { tracking, holding, returning };

struct ControllerState {
  ServoCommand current;  // last commanded pose
  int frames_since_target = 0;
  TrackMode mode = TrackMode::tracking;
  bool pan_saturated = false;
  bool tilt_saturated = false;

  static ControllerState at_neutral(const ServoConfig& cfg) {
    return {{cfg.neutral, cfg.neutral}, 0, TrackMode::tracking, false, false};
  }
  friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

struct StepResult {
  ControllerState state;
  std::optional<ServoCommand> command;
};

class OutOfFrameError : public std::domain_error {
 public:
  OutOfFrameError() : std::domain_error("face center lies outside the frame") {}
};

void validate(const CameraIntrinsics& intrinsics);
void validate(const ServoConfig& cfg);
void validate(const PolicyConfig& policy);

/// Linear pixel-to-angle law: dtheta = (0.5 - l/L) * theta, and the same for
/// the vertical axis. Throws OutOfFrameError when the center is outside
/// [0, L] x [0, B].
AngleDelta angle_deltas(const FaceCenter& center, const CameraIntrinsics& intrinsics);

/// Rounds to the nearest multiple of least_count, half away from zero.
/// Returns 0 when |delta| < deadband.
int quantize_delta(double delta, const ServoConfig& cfg);

int clamp_angle(int angle, const ServoConfig& cfg);

/// Absolute command relative to neutral: neutral + quantized delta, clamped.
/// Ignores the sign fields; this is the literal "add 90" rule.
ServoCommand servo_paper_mode(const AngleDelta& delta, const ServoConfig& cfg);

/// Relative command from the last commanded pose. No command is produced when
/// both quantized deltas are zero; the state is only updated on emission.
StepResult servo_incremental(const ControllerState& state, const AngleDelta& delta,
                             const ServoConfig& cfg);

/// Largest area wins; ties go to the smaller x, then the smaller y.
std::optional<BoundingBox> select_target(std::span<const BoundingBox> detections);

/// One frame of the tracking loop: target selection, the control law, and
/// the hold/return policy when no usable target is present.
StepResult controller_step(const ControllerState& state,
                           std::span<const BoundingBox> detections,
                           const CameraIntrinsics& intrinsics, const ServoConfig& cfg,
                           const PolicyConfig& policy = {});

const char* to_string(TrackMode mode);
const char* to_string(CommandMode mode);

}  // namespace pantilt
