#include "pantilt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "pantilt/text.hpp"

namespace pantilt::sim {

namespace {

double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace

void validate(const WorldTarget& target) {
  if (!std::isfinite(target.azimuth) || !std::isfinite(target.elevation))
    throw std::invalid_argument("target direction must be finite");
  if (!(target.apparent_size > 0.0) || !std::isfinite(target.apparent_size))
    throw std::invalid_argument("target apparent_size must be positive");
}

void validate(const ServoModel& model) {
  if (model.least_count < 1) throw std::invalid_argument("servo model least_count must be >= 1");
  if (model.max_slew && *model.max_slew <= 0)
    throw std::invalid_argument("servo model max_slew must be positive");
}

void validate(const TrajectorySpec& spec) {
  if (spec.kind == TrajectoryKind::sinusoidal && !(spec.period > 0.0))
    throw std::invalid_argument("sinusoidal trajectory period must be positive");
  if (!(spec.apparent_size > 0.0)) throw std::invalid_argument("apparent_size must be positive");
  for (double v : {spec.azimuth, spec.elevation, spec.velocity_az, spec.velocity_el,
                   spec.amplitude, spec.period})
    if (!std::isfinite(v)) throw std::invalid_argument("trajectory parameters must be finite");
}

std::optional<Pixel> project(const WorldTarget& target, const RigState& rig,
                             const CameraIntrinsics& intrinsics) {
  const double rel_az = target.azimuth - rig.world_pan();
  const double rel_el = target.elevation - rig.world_tilt();
  if (!(std::abs(rel_az) < 90.0 && std::abs(rel_el) < 90.0)) return std::nullopt;

  const double half_w = intrinsics.frame.width / 2.0;
  const double half_h = intrinsics.frame.height / 2.0;
  const double u = half_w * (1.0 + std::tan(radians(rel_az)) / std::tan(radians(intrinsics.theta / 2.0)));
  const double v = half_h * (1.0 - std::tan(radians(rel_el)) / std::tan(radians(intrinsics.phi / 2.0)));
  if (!(u >= 0.0 && u < intrinsics.frame.width && v >= 0.0 && v < intrinsics.frame.height))
    return std::nullopt;
  return Pixel{u, v};
}

SynthBox synth_bbox(const Pixel& pixel, const WorldTarget& target,
                    const CameraIntrinsics& intrinsics) {
  const double side = target.apparent_size / intrinsics.theta * intrinsics.frame.width;
  const double x0 = pixel.u - side / 2.0;
  const double y0 = pixel.v - side / 2.0;
  const double x1 = x0 + side;
  const double y1 = y0 + side;

  const double cx0 = std::max(x0, 0.0);
  const double cy0 = std::max(y0, 0.0);
  const double cx1 = std::min(x1, intrinsics.frame.width);
  const double cy1 = std::min(y1, intrinsics.frame.height);
  const bool clipped = cx0 != x0 || cy0 != y0 || cx1 != x1 || cy1 != y1;
  if (!clipped) return {{x0, y0, side, side}, false};
  return {{cx0, cy0, std::max(cx1 - cx0, 0.0), std::max(cy1 - cy0, 0.0)}, true};
}

RigState apply_command(const RigState& rig, const ServoCommand& cmd, const ServoModel& model) {
  auto resolve = [&](int commanded) {
    // The servo only realizes multiples of its least count around neutral.
    const int offset = commanded - rig.neutral;
    const int snapped =
        rig.neutral + static_cast<int>(std::round(static_cast<double>(offset) / model.least_count)) *
                          model.least_count;
    return std::clamp(snapped, kServoMin, kServoMax);
  };
  auto move = [&](int from, int to) {
    if (!model.max_slew) return to;
    const int slew = *model.max_slew;
    return std::clamp(to, from - slew, from + slew);
  };
  RigState next = rig;
  next.pan_servo = std::clamp(move(rig.pan_servo, resolve(cmd.pan)), kServoMin, kServoMax);
  next.tilt_servo = std::clamp(move(rig.tilt_servo, resolve(cmd.tilt)), kServoMin, kServoMax);
  return next;
}

WorldTarget trajectory_sample(const TrajectorySpec& spec, std::size_t step) {
  const double k = static_cast<double>(step);
  WorldTarget t{spec.azimuth, spec.elevation, spec.apparent_size};
  switch (spec.kind) {
    case TrajectoryKind::static_target:
      break;
    case TrajectoryKind::linear:
      t.azimuth += spec.velocity_az * k;
      t.elevation += spec.velocity_el * k;
      break;
    case TrajectoryKind::sinusoidal:
      t.azimuth += spec.amplitude * std::sin(2.0 * std::numbers::pi * k / spec.period);
      break;
  }
  return t;
}

ServoCommand best_angles_oracle(const WorldTarget& target, const CameraIntrinsics& intrinsics,
                                const ServoConfig& servo_cfg) {
  const double cu = intrinsics.frame.width / 2.0;
  const double cv = intrinsics.frame.height / 2.0;

  bool found = false;
  double best_dist = std::numeric_limits<double>::infinity();
  int best_neutral_dist = std::numeric_limits<int>::max();
  ServoCommand best{servo_cfg.neutral, servo_cfg.neutral};

  for (int pan = servo_cfg.min_angle; pan <= servo_cfg.max_angle; ++pan) {
    for (int tilt = servo_cfg.min_angle; tilt <= servo_cfg.max_angle; ++tilt) {
      const auto px = project(target, {pan, tilt, servo_cfg.neutral}, intrinsics);
      if (!px) continue;
      const double du = px->u - cu;
      const double dv = px->v - cv;
      const double dist = du * du + dv * dv;
      const int neutral_dist = std::abs(pan - servo_cfg.neutral) + std::abs(tilt - servo_cfg.neutral);
      if (!found || dist < best_dist || (dist == best_dist && neutral_dist < best_neutral_dist)) {
        found = true;
        best_dist = dist;
        best_neutral_dist = neutral_dist;
        best = {pan, tilt};
      }
    }
  }
  if (!found) throw UnreachableTarget();
  return best;
}

std::optional<std::size_t> settle_step(std::span<const double> errors, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("settle tolerance must be positive");
  std::size_t first = errors.size();
  while (first > 0 && errors[first - 1] <= tolerance) --first;
  if (first == errors.size()) return std::nullopt;
  return first;
}

std::optional<std::size_t> settle_step(const Trace& trace, double tolerance) {
  std::vector<double> errors;
  errors.reserve(trace.records.size());
  for (const auto& r : trace.records) errors.push_back(r.angular_error);
  return settle_step(errors, tolerance);
}

Trace run_closed_loop(const TrajectorySpec& spec, const LoopConfig& cfg, std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("simulation needs at least one step");
  validate(spec);
  validate(cfg.intrinsics);
  validate(cfg.servo);
  validate(cfg.policy);
  validate(cfg.model);

  Trace trace;
  trace.intrinsics = cfg.intrinsics;
  trace.records.reserve(steps);

  RigState rig = RigState::at_neutral(cfg.servo);
  ControllerState state = ControllerState::at_neutral(cfg.servo);
  const double cu = cfg.intrinsics.frame.width / 2.0;
  const double cv = cfg.intrinsics.frame.height / 2.0;

  for (std::size_t k = 0; k < steps; ++k) {
    TraceRecord rec;
    rec.step = k;
    rec.target = trajectory_sample(spec, k);
    rec.rig = rig;
    rec.pixel = project(rec.target, rig, cfg.intrinsics);

    std::vector<BoundingBox> detections;
    if (rec.pixel) {
      detections.push_back(synth_bbox(*rec.pixel, rec.target, cfg.intrinsics).box);
      rec.pixel_error = std::hypot(rec.pixel->u - cu, rec.pixel->v - cv);
    }

    auto result = controller_step(state, detections, cfg.intrinsics, cfg.servo, cfg.policy);
    state = result.state;
    rec.command = result.command;
    if (result.command) rig = apply_command(rig, *result.command, cfg.model);

    rec.angular_error = std::hypot(rec.target.azimuth - rig.world_pan(),
                                   rec.target.elevation - rig.world_tilt());
    trace.records.push_back(rec);
  }
  return trace;
}

TraceSummary summarize(const Trace& trace, double tolerance) {
  TraceSummary s;
  s.settle = settle_step(trace, tolerance);
  for (const auto& r : trace.records) {
    s.max_error = std::max(s.max_error, r.angular_error);
    if (r.command) ++s.commands;
  }
  if (!trace.records.empty()) s.final_error = trace.records.back().angular_error;
  return s;
}

void write_trace(std::ostream& out, const Trace& trace, std::uint64_t config_hash) {
  if (config_hash != 0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash));
    out << "# config_hash=" << buf << '\n';
  }
  out << "step,target_az,target_el,rig_pan,rig_tilt,u,v,cmd_pan,cmd_tilt,pixel_err,angular_err\n";
  for (const auto& r : trace.records) {
    out << r.step << ',' << text::g6(r.target.azimuth) << ',' << text::g6(r.target.elevation)
        << ',' << r.rig.pan_servo << ',' << r.rig.tilt_servo << ',';
    if (r.pixel) out << text::g6(r.pixel->u) << ',' << text::g6(r.pixel->v);
    else out << ',';
    out << ',';
    if (r.command) out << r.command->pan << ',' << r.command->tilt;
    else out << ',';
    out << ',';
    if (r.pixel_error) out << text::g6(*r.pixel_error);
    out << ',' << text::g6(r.angular_error) << '\n';
  }
}

const char* to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::static_target: return "static";
    case TrajectoryKind::linear: return "linear";
    case TrajectoryKind::sinusoidal: return "sinusoidal";
  }
  return "?";
}

}  // namespace pantilt::sim
