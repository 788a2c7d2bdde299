#pragma once

// Command implementations behind the `pantilt` executable. Each returns the
// process exit status and writes only to the given streams, so they can be
// driven directly from tests.

#include <iosfwd>
#include <optional>
#include <string>

namespace pantilt::cli {

struct AnglesArgs {
  std::string bbox;   // "x,y,w,h"
  std::string frame;  // "LxB"
  std::string fov;    // "THETAxPHI"
};

struct SimulateArgs {
  std::string config_path;
  std::optional<std::string> output;  // overrides the config's output
};

struct ReplayArgs {
  std::string config_path;
  std::optional<std::string> detections;  // "-" reads stdin; overrides config input
  std::optional<std::string> output;      // command log, stdout when absent
  std::optional<std::string> serial_dump;
  bool strict = false;
};

int cmd_angles(const AnglesArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_replay(const ReplayArgs& args, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_protocol_encode(const std::string& pan, const std::string& tilt, std::ostream& out,
                        std::ostream& err);
int cmd_protocol_decode(std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pantilt::cli
