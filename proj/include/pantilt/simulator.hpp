#pragma once

// Deterministic closed-loop testbed: a pinhole camera on a simulated pan/tilt
// rig observes a synthetic target and is driven by the tracking controller.
//
// World angles are degrees. The rig maps servo angle s to world angle
// s - neutral on each axis, and the two axes are treated independently.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pantilt/control.hpp"
#include "pantilt/geometry.hpp"

namespace pantilt::sim {

struct WorldTarget {
  double azimuth = 0.0;
  double elevation = 0.0;
  double apparent_size = 5.0;  // angular face diameter

  friend bool operator==(const WorldTarget&, const WorldTarget&) = default;
};

struct RigState {
  int pan_servo = 90;
  int tilt_servo = 90;
  int neutral = 90;

  double world_pan() const { return pan_servo - neutral; }
  double world_tilt() const { return tilt_servo - neutral; }

  static RigState at_neutral(const ServoConfig& cfg) {
    return {cfg.neutral, cfg.neutral, cfg.neutral};
  }
  friend bool operator==(const RigState&, const RigState&) = default;
};

inline constexpr int kServoMin = 0;
inline constexpr int kServoMax = 180;

struct ServoModel {
  int least_count = 1;
  std::optional<int> max_slew;  // degrees per step; empty means unlimited

  friend bool operator==(const ServoModel&, const ServoModel&) = default;
};

enum class TrajectoryKind { static_target, linear, sinusoidal };

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::static_target;
  double azimuth = 0.0;  // initial direction
  double elevation = 0.0;
  double velocity_az = 0.0;  // degrees per step, linear only
  double velocity_el = 0.0;
  double amplitude = 0.0;  // degrees, sinusoidal only (on azimuth)
  double period = 1.0;     // steps, sinusoidal only
  double apparent_size = 5.0;

  friend bool operator==(const TrajectorySpec&, const TrajectorySpec&) = default;
};

struct Pixel {
  double u = 0.0;
  double v = 0.0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

struct SynthBox {
  BoundingBox box;
  bool clipped = false;
};

struct TraceRecord {
  std::size_t step = 0;
  WorldTarget target;
  RigState rig;  // pose while the frame was observed
  std::optional<Pixel> pixel;
  std::optional<ServoCommand> command;
  std::optional<double> pixel_error;  // distance of pixel from frame center
  double angular_error = 0.0;         // pointing error after the step's command
};

struct Trace {
  std::vector<TraceRecord> records;
  CameraIntrinsics intrinsics;
};

class UnreachableTarget : public std::domain_error {
 public:
  UnreachableTarget() : std::domain_error("no servo pose brings the target into view") {}
};

void validate(const WorldTarget& target);
void validate(const ServoModel& model);
void validate(const TrajectorySpec& spec);

/// Exact tangent projection with relative angles a = azimuth - world pan and
/// e = elevation - world tilt:
///   u = (L/2)(1 + tan a / tan(theta/2)),  v = (B/2)(1 - tan e / tan(phi/2)).
/// Empty unless 0 <= u < L, 0 <= v < B and |a|, |e| < 90.
std::optional<Pixel> project(const WorldTarget& target, const RigState& rig,
                             const CameraIntrinsics& intrinsics);

/// Square box of side apparent_size / theta * L centered on the pixel,
/// clipped to the frame.
SynthBox synth_bbox(const Pixel& pixel, const WorldTarget& target,
                    const CameraIntrinsics& intrinsics);

RigState apply_command(const RigState& rig, const ServoCommand& cmd, const ServoModel& model);

WorldTarget trajectory_sample(const TrajectorySpec& spec, std::size_t step);

/// Integer pose minimizing the squared pixel distance to the frame center,
/// by exhaustive search over every (pan, tilt) in range. Ties go to the pose
/// closest to neutral. Throws UnreachableTarget if no pose sees the target.
ServoCommand best_angles_oracle(const WorldTarget& target, const CameraIntrinsics& intrinsics,
                                const ServoConfig& servo_cfg);

/// First step from which the angular error stays within tolerance until the
/// end; empty if the trace never settles.
std::optional<std::size_t> settle_step(std::span<const double> errors, double tolerance);
std::optional<std::size_t> settle_step(const Trace& trace, double tolerance);

struct LoopConfig {
  CameraIntrinsics intrinsics;
  ServoConfig servo;
  PolicyConfig policy;
  ServoModel model;
};

Trace run_closed_loop(const TrajectorySpec& spec, const LoopConfig& cfg, std::size_t steps);

struct TraceSummary {
  std::optional<std::size_t> settle;
  double max_error = 0.0;
  double final_error = 0.0;
  std::size_t commands = 0;
};

TraceSummary summarize(const Trace& trace, double tolerance);

/// CSV: a header naming the columns, then one record per line. Floats use 6
/// significant digits; absent values are empty fields. A non-zero hash adds
/// a leading "# config_hash=" comment line.
void write_trace(std::ostream& out, const Trace& trace, std::uint64_t config_hash = 0);

const char* to_string(TrajectoryKind kind);

}  // namespace pantilt::sim
