#pragma once

// Run configuration shared by the simulate and replay commands. YAML, with
// a mandatory "version: 1" and these sections (every key optional):
//
//   intrinsics: {L, B, theta, phi}
//   servo:      {min, max, neutral, least_count, deadband, pan_sign, tilt_sign}
//   policy:     {hold_frames, return_rate}
//   model:      {least_count, max_slew}
//   trajectory: {kind: static|linear|sinusoidal, azimuth, elevation,
//                velocity_az, velocity_el, amplitude, period, apparent_size}
//   mode: incremental|paper_literal
//   steps, output, input
//
// trajectory and input are mutually exclusive.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pantilt/control.hpp"
#include "pantilt/simulator.hpp"

namespace pantilt {

inline constexpr int kConfigVersion = 1;

struct RunConfig {
  int version = kConfigVersion;
  CameraIntrinsics intrinsics;
  ServoConfig servo;
  PolicyConfig policy;
  sim::ServoModel model;
  std::optional<sim::TrajectorySpec> trajectory;
  std::optional<std::string> input;
  std::size_t steps = 100;
  std::optional<std::string> output;

  sim::LoopConfig loop() const { return {intrinsics, servo, policy, model}; }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `source` names the input in diagnostics, which read "source:line:col: ...".
RunConfig parse_config(std::string_view yaml, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Stable text form of every effective setting; the basis of config_hash.
std::string canonical_config(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace pantilt
