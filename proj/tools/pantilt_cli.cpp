#include <CLI11.hpp>

#include <iostream>

#include "pantilt/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pan/tilt face tracking controller tools"};
  app.require_subcommand(1);

  pantilt::cli::AnglesArgs angles;
  auto* angles_cmd = app.add_subcommand("angles", "Angle deltas and paper-mode servo command for one box");
  angles_cmd->add_option("--bbox", angles.bbox, "x,y,w,h in pixels")->required();
  angles_cmd->add_option("--frame", angles.frame, "LxB resolution, e.g. 640x480")->required();
  angles_cmd->add_option("--fov", angles.fov, "THETAxPHI field of view in degrees, e.g. 60x45")->required();

  pantilt::cli::SimulateArgs simulate;
  std::string sim_out;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a closed-loop simulation from a config file");
  sim_cmd->add_option("config", simulate.config_path, "YAML run config")->required();
  sim_cmd->add_option("--out", sim_out, "Trace CSV path (overrides config 'output')");

  pantilt::cli::ReplayArgs replay;
  std::string replay_in, replay_out, replay_dump;
  auto* replay_cmd = app.add_subcommand("replay", "Feed a detection log through the controller");
  replay_cmd->add_option("config", replay.config_path, "YAML run config")->required();
  replay_cmd->add_option("detections", replay_in, "Detection log, '-' for stdin (overrides config 'input')");
  replay_cmd->add_option("--out", replay_out, "Command log path (default stdout)");
  replay_cmd->add_option("--serial-dump", replay_dump, "Write protocol frames to this file");
  replay_cmd->add_flag("--strict", replay.strict, "Abort on the first bad detection line");

  auto* proto_cmd = app.add_subcommand("protocol", "Serial wire protocol tools");
  proto_cmd->require_subcommand(1);
  std::string pan, tilt;
  auto* encode_cmd = proto_cmd->add_subcommand("encode", "Print the frame for a command");
  encode_cmd->add_option("pan", pan)->required();
  encode_cmd->add_option("tilt", tilt)->required();
  auto* decode_cmd = proto_cmd->add_subcommand("decode", "Parse frames from stdin");

  CLI11_PARSE(app, argc, argv);

  if (*angles_cmd) return pantilt::cli::cmd_angles(angles, std::cout, std::cerr);
  if (*sim_cmd) {
    if (!sim_out.empty()) simulate.output = sim_out;
    return pantilt::cli::cmd_simulate(simulate, std::cout, std::cerr);
  }
  if (*replay_cmd) {
    if (!replay_in.empty()) replay.detections = replay_in;
    if (!replay_out.empty()) replay.output = replay_out;
    if (!replay_dump.empty()) replay.serial_dump = replay_dump;
    return pantilt::cli::cmd_replay(replay, std::cin, std::cout, std::cerr);
  }
  if (*encode_cmd) return pantilt::cli::cmd_protocol_encode(pan, tilt, std::cout, std::cerr);
  if (*decode_cmd) return pantilt::cli::cmd_protocol_decode(std::cin, std::cout, std::cerr);
  return 0;
}
