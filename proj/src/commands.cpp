#include "pantilt/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <vector>

#include "pantilt/config.hpp"
#include "pantilt/control.hpp"
#include "pantilt/geometry.hpp"
#include "pantilt/ingest.hpp"
#include "pantilt/protocol.hpp"
#include "pantilt/simulator.hpp"
#include "pantilt/text.hpp"

namespace pantilt::cli {

namespace {

constexpr int kUsageError = 2;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(text::trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<double> parse_numbers(std::string_view s, char sep, std::size_t count,
                                  const char* flag) {
  const auto parts = split(s, sep);
  if (parts.size() != count)
    throw std::invalid_argument(std::string(flag) + " expects " + std::to_string(count) +
                                " values separated by '" + sep + "'");
  std::vector<double> values;
  for (auto p : parts) {
    const auto v = text::parse_double(p);
    if (!v) throw std::invalid_argument(std::string(flag) + ": '" + std::string(p) + "' is not a number");
    values.push_back(*v);
  }
  return values;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

int cmd_angles(const AnglesArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto b = parse_numbers(args.bbox, ',', 4, "--bbox");
    const auto f = parse_numbers(args.frame, 'x', 2, "--frame");
    const auto v = parse_numbers(args.fov, 'x', 2, "--fov");
    const BoundingBox bbox{b[0], b[1], b[2], b[3]};
    const CameraIntrinsics intrinsics{{f[0], f[1]}, v[0], v[1]};
    validate(bbox);
    validate(intrinsics);

    const AngleDelta delta = angle_deltas(face_center(bbox), intrinsics);
    const ServoCommand cmd = servo_paper_mode(delta, ServoConfig{});
    out << "dtheta=" << text::shortest(delta.dtheta) << " dphi=" << text::shortest(delta.dphi)
        << " pan=" << cmd.pan << " tilt=" << cmd.tilt << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "angles: " << e.what() << '\n';
    return kUsageError;
  }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(args.config_path);
  } catch (const ConfigError& e) {
    err << "simulate: " << e.what() << '\n';
    return kUsageError;
  }
  if (!cfg.trajectory) {
    err << "simulate: " << args.config_path << ": config has no 'trajectory' section\n";
    return kUsageError;
  }

  const auto trace = sim::run_closed_loop(*cfg.trajectory, cfg.loop(), cfg.steps);
  const auto output = args.output ? args.output : cfg.output;
  if (output) {
    std::ofstream file(*output, std::ios::binary);
    if (!file) {
      err << "simulate: cannot write trace to " << *output << '\n';
      return 1;
    }
    sim::write_trace(file, trace, config_hash(cfg));
  }

  const auto summary = sim::summarize(trace, cfg.servo.least_count / 2.0);
  out << "settle=" << (summary.settle ? std::to_string(*summary.settle) : "none")
      << " max_err=" << fixed3(summary.max_error) << " final_err=" << fixed3(summary.final_error)
      << " commands=" << summary.commands << '\n';
  return 0;
}

int cmd_replay(const ReplayArgs& args, std::istream& in, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(args.config_path);
  } catch (const ConfigError& e) {
    err << "replay: " << e.what() << '\n';
    return kUsageError;
  }
  const auto source = args.detections ? args.detections : cfg.input;
  if (!source) {
    err << "replay: no detection log given (argument or config 'input')\n";
    return kUsageError;
  }

  std::ifstream file;
  std::istream* detections = &in;
  if (*source != "-") {
    file.open(*source, std::ios::binary);
    if (!file) {
      err << "replay: cannot open " << *source << '\n';
      return kUsageError;
    }
    detections = &file;
  }

  std::ofstream log_file;
  std::ostream* log = &out;
  if (args.output) {
    log_file.open(*args.output, std::ios::binary);
    if (!log_file) {
      err << "replay: cannot write " << *args.output << '\n';
      return 1;
    }
    log = &log_file;
  }
  std::ofstream serial;
  if (args.serial_dump) {
    serial.open(*args.serial_dump, std::ios::binary);
    if (!serial) {
      err << "replay: cannot write " << *args.serial_dump << '\n';
      return 1;
    }
  }

  ControllerState state = ControllerState::at_neutral(cfg.servo);
  bool aborted = false;
  *log << "ts,pan,tilt,frame\n";

  ingest::read_frames(
      *detections,
      [&](const ingest::FrameBatch& frame) {
        auto result = controller_step(state, frame.detections, cfg.intrinsics, cfg.servo, cfg.policy);
        state = result.state;
        if (!result.command) return;
        const auto wire = protocol::encode_command(*result.command);
        *log << frame.ts << ',' << result.command->pan << ',' << result.command->tilt << ','
             << std::string_view(wire).substr(0, wire.size() - 1) << '\n';
        if (serial.is_open()) serial << wire;
      },
      [&](const ingest::LineError& e) {
        err << *source << ':' << e.line << ": " << e.message << '\n';
        if (args.strict) aborted = true;
        return !args.strict;
      });
  return aborted ? 1 : 0;
}

int cmd_protocol_encode(const std::string& pan, const std::string& tilt, std::ostream& out,
                        std::ostream& err) {
  const auto p = text::parse_int(pan);
  const auto t = text::parse_int(tilt);
  if (!p || !t) {
    err << "protocol encode: pan and tilt must be integers\n";
    return kUsageError;
  }
  if (*p < 0 || *p > protocol::kMaxAngle || *t < 0 || *t > protocol::kMaxAngle) {
    err << "protocol encode: angles must be within [0, 180]\n";
    return kUsageError;
  }
  out << protocol::encode_command({static_cast<int>(*p), static_cast<int>(*t)});
  return 0;
}

int cmd_protocol_decode(std::istream& in, std::ostream& out, std::ostream& err) {
  protocol::Parser parser;
  bool failed = false;
  std::size_t offset = 0;
  char c;
  while (in.get(c)) {
    const auto event = parser.feed(static_cast<std::uint8_t>(c));
    if (const auto* cmd = std::get_if<protocol::CommandEvent>(&event)) {
      out << '(' << cmd->command.pan << ',' << cmd->command.tilt << ")\n";
    } else if (const auto* e = std::get_if<protocol::ErrorEvent>(&event)) {
      out << "error " << protocol::to_string(e->kind) << " at offset " << offset << '\n';
      failed = true;
    }
    ++offset;
  }
  if (parser.mid_frame()) {
    out << "error " << protocol::to_string(protocol::ErrorKind::incomplete_frame) << " at offset "
        << offset << '\n';
    failed = true;
  }
  if (failed) err << "protocol decode: stream contained errors\n";
  return failed ? 1 : 0;
}

}  // namespace pantilt::cli
