// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "generators.hpp"
#include "pantilt/commands.hpp"
#include "pantilt/control.hpp"
#include "pantilt/geometry.hpp"
#include "pantilt/protocol.hpp"
#include "pantilt/simulator.hpp"

using namespace pantilt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const CameraIntrinsics kVga{{640, 480}, 60, 45};

// 1. Antisymmetry, exact zero at center, range, strict monotonicity.
Outcome control_law_exactness() {
  Outcome o;
  testing::Gen gen(1001);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 10000; ++i) {
    const auto in = gen.intrinsics();
    const auto bbox = gen.box_in(in.frame);
    const auto c = face_center(bbox);
    const double L = in.frame.width, B = in.frame.height;

    const auto d = angle_deltas(c, in);
    const auto mirrored = angle_deltas({L - c.l, B - c.b}, in);
    o.expect(std::abs(d.dtheta + mirrored.dtheta) <= 1e-12, "dtheta antisymmetry");
    o.expect(std::abs(d.dphi + mirrored.dphi) <= 1e-12, "dphi antisymmetry");

    const auto centered = angle_deltas({L / 2, B / 2}, in);
    o.expect(centered.dtheta == 0.0 && centered.dphi == 0.0, "zero at frame center");

    o.expect(std::abs(d.dtheta) <= in.theta / 2 && std::abs(d.dphi) <= in.phi / 2,
             "half field-of-view range");

    const double l2 = gen.real(0.0, L), b2 = gen.real(0.0, B);
    const auto d2 = angle_deltas({l2, b2}, in);
    if (std::abs(l2 - c.l) >= 1e-3)
      o.expect((l2 > c.l) == (d2.dtheta < d.dtheta), "dtheta strictly decreasing in l");
    if (std::abs(b2 - c.b) >= 1e-3)
      o.expect((b2 > c.b) == (d2.dphi < d.dphi), "dphi strictly decreasing in b");
  }
  const double elapsed = seconds_since(t0);
  o.expect(elapsed < 1.0, "runtime over 1 s");
  if (o.pass) o.detail = "10000 samples in " + fmt("%.3f s", elapsed);
  return o;
}

// Half away from zero, written independently of quantize_delta.
int round_half_away(double d) { return static_cast<int>(std::copysign(std::floor(std::abs(d) + 0.5), d)); }

// 2. Literal servo rule.
Outcome paper_mode_fidelity() {
  Outcome o;
  const ServoConfig cfg;
  o.expect(servo_paper_mode({0.0, 0.0}, cfg) == ServoCommand{90, 90}, "zero delta is not (90, 90)");
  const auto corner = angle_deltas({0, 0}, kVga);
  const ServoCommand expected{90 + round_half_away(corner.dtheta), 90 + round_half_away(corner.dphi)};
  o.expect(expected == ServoCommand{120, 113}, "rounding oracle disagrees with (120, 113)");
  const auto got = servo_paper_mode(corner, cfg);
  o.expect(got == ServoCommand{120, 113}, "corner command is not (120, 113)");
  if (o.pass) o.detail = "(0,0)->(90,90), corner->(120,113)";
  return o;
}

// 3. Integer target sweep against the brute-force oracle.
Outcome closed_loop_convergence() {
  Outcome o;
  const sim::LoopConfig cfg{kVga, ServoConfig{}, PolicyConfig{}, sim::ServoModel{}};
  const auto t0 = std::chrono::steady_clock::now();
  const int max_az = static_cast<int>(std::floor(0.45 * kVga.theta));
  const int max_el = static_cast<int>(std::floor(0.45 * kVga.phi));
  std::size_t targets = 0, worst_settle = 0;
  for (int az = -max_az; az <= max_az; ++az) {
    for (int el = -max_el; el <= max_el; ++el) {
      sim::TrajectorySpec spec;
      spec.azimuth = az;
      spec.elevation = el;
      const auto trace = sim::run_closed_loop(spec, cfg, 20);
      const auto settle = sim::settle_step(trace, 0.5);
      const std::string where = " at (" + std::to_string(az) + "," + std::to_string(el) + ")";
      o.expect(settle && *settle <= 5, "settle step > 5" + where);
      if (settle) worst_settle = std::max(worst_settle, *settle);
      const auto best = sim::best_angles_oracle(trajectory_sample(spec, 0), kVga, cfg.servo);
      const auto& rig = trace.records.back().rig;
      o.expect(std::abs(rig.pan_servo - best.pan) <= 1 && std::abs(rig.tilt_servo - best.tilt) <= 1,
               "final pose differs from oracle" + where);
      ++targets;
    }
  }
  const double elapsed = seconds_since(t0);
  o.expect(elapsed < 10.0, "sweep over 10 s");
  if (o.pass)
    o.detail = std::to_string(targets) + " targets, worst settle " + std::to_string(worst_settle) +
               ", " + fmt("%.2f s", elapsed);
  return o;
}

// 4. Largest one-step error of the linear law for a 60 degree lens.
Outcome linear_law_error_bound() {
  Outcome o;
  const double half = kVga.theta / 2;
  const double deg = std::numbers::pi / 180.0;

  // Oracle: dense sampling of the closed-form gap |a - half * tan a / tan half|.
  double bound = 0.0, bound_at = 0.0;
  for (int i = -299999; i <= 299999; ++i) {
    const double a = i * 1e-4;
    const double gap = std::abs(a - half * std::tan(a * deg) / std::tan(half * deg));
    if (gap > bound) {
      bound = gap;
      bound_at = std::abs(a);
    }
  }

  // Simulator: render the target, detect its box, run the control law.
  const ServoConfig servo;
  const sim::RigState rig = sim::RigState::at_neutral(servo);
  double measured = 0.0;
  for (int i = -29999; i <= 29999; ++i) {
    const sim::WorldTarget target{i * 1e-3, 0.0, 5.0};
    const auto px = sim::project(target, rig, kVga);
    if (!px) continue;
    const auto box = sim::synth_bbox(*px, target, kVga);
    if (box.clipped) continue;
    const auto delta = angle_deltas(face_center(box.box), kVga);
    measured = std::max(measured, std::abs(target.azimuth - servo.pan_sign * delta.dtheta));
  }

  o.expect(bound > 1.1 && bound < 1.2, "oracle bound outside 1.1-1.2");
  o.expect(std::abs(bound_at - 17.8) < 0.1, "oracle maximum not near 17.8 deg");
  o.expect(std::abs(measured - bound) <= 0.05, "simulator max differs from oracle by > 0.05");
  o.detail = "oracle " + fmt("%.5f", bound) + " at " + fmt("%.3f deg", bound_at) + ", simulator " +
             fmt("%.5f", measured);
  return o;
}

// 5. Exhaustive encode/decode.
Outcome protocol_round_trip() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int n = 0;
  for (int pan = 0; pan <= 180; ++pan)
    for (int tilt = 0; tilt <= 180; ++tilt, ++n) {
      const ServoCommand c{pan, tilt};
      o.expect(protocol::decode_line(protocol::encode_command(c)) == c, "round trip mismatch");
    }
  const double elapsed = seconds_since(t0);
  o.expect(n == 32761, "wrong command count");
  o.expect(elapsed < 1.0, "runtime over 1 s");
  if (o.pass) o.detail = std::to_string(n) + " commands in " + fmt("%.3f s", elapsed);
  return o;
}

// 6. Fuzzed stream with valid frames injected after garbage.
Outcome parser_robustness() {
  Outcome o;
  testing::Gen gen(1006);
  const auto t0 = std::chrono::steady_clock::now();
  protocol::ParserState state;
  std::size_t octets = 0, injected = 0, recovered = 0;

  auto feed = [&](std::uint8_t byte) {
    const auto r = protocol::parser_feed(state, byte);
    state = r.state;
    ++octets;
    o.expect(state.pan <= 999 && state.tilt <= 999, "accumulator above 999");
    o.expect(state.length <= protocol::kMaxFrameOctets, "frame length above cap");
    if (const auto* c = std::get_if<protocol::CommandEvent>(&r.event))
      o.expect(c->command.pan >= 0 && c->command.pan <= 180 && c->command.tilt >= 0 &&
                   c->command.tilt <= 180,
               "out-of-range command event");
    return r.event;
  };

  while (octets < 1'000'000) {
    const int garbage = gen.integer(0, 64);
    for (int k = 0; k < garbage; ++k) feed(gen.octet());
    const ServoCommand cmd{gen.integer(0, 180), gen.integer(0, 180)};
    const auto frame = protocol::encode_command(cmd);
    ++injected;
    protocol::ParserEvent last;
    for (char c : frame) last = feed(static_cast<std::uint8_t>(c));
    const auto* got = std::get_if<protocol::CommandEvent>(&last);
    if (got && got->command == cmd) ++recovered;
  }
  const double elapsed = seconds_since(t0);
  o.expect(recovered == injected, "injected frame lost after garbage");
  o.expect(elapsed < 5.0, "runtime over 5 s");
  if (o.pass)
    o.detail = std::to_string(octets) + " octets, " + std::to_string(recovered) + "/" +
               std::to_string(injected) + " frames recovered, " + fmt("%.2f s", elapsed);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 7. Two simulate runs, byte-identical traces.
Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("pantilt_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto cfg = dir / "sine.yaml";
  std::ofstream(cfg) << "version: 1\n"
                        "trajectory: {kind: sinusoidal, azimuth: 0, elevation: 5, amplitude: 20, period: 40}\n"
                        "steps: 400\n";

  std::ostringstream out, err;
  o.expect(cli::cmd_simulate({cfg.string(), (dir / "a.csv").string()}, out, err) == 0, "simulate failed");
  o.expect(cli::cmd_simulate({cfg.string(), (dir / "b.csv").string()}, out, err) == 0, "simulate failed");
  const auto a = slurp(dir / "a.csv");
  o.expect(!a.empty() && a == slurp(dir / "b.csv"), "library traces differ");

  std::string how = "library";
  if (const char* exe = std::getenv("PANTILT_CLI")) {
    for (const char* name : {"c.csv", "d.csv"}) {
      const std::string cmd = std::string("'") + exe + "' simulate '" + cfg.string() + "' --out '" +
                              (dir / name).string() + "' > /dev/null";
      o.expect(std::system(cmd.c_str()) == 0, "executable simulate failed");
    }
    o.expect(slurp(dir / "c.csv") == slurp(dir / "d.csv"), "executable traces differ");
    o.expect(slurp(dir / "c.csv") == a, "executable and library traces differ");
    how += " and executable";
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = how + " runs identical (" + std::to_string(a.size()) + " bytes)";
  return o;
}

// 8. Target escapes the field of view: hold, then walk back to neutral.
Outcome lost_target_policy() {
  Outcome o;
  const ServoConfig servo;
  const PolicyConfig policy;
  const sim::LoopConfig cfg{kVga, servo, policy, sim::ServoModel{}};
  sim::TrajectorySpec escape;
  escape.kind = sim::TrajectoryKind::linear;
  escape.velocity_az = 2.0;
  const auto trace = sim::run_closed_loop(escape, cfg, 160);
  const auto& rec = trace.records;

  std::size_t last_seen = 0;
  for (std::size_t i = 0; i < rec.size(); ++i)
    if (rec[i].pixel) last_seen = i;
  const std::size_t lost = last_seen + 1;
  o.expect(lost + policy.hold_frames < rec.size(), "target never lost");
  if (!o.pass) return o;

  for (std::size_t i = lost; i < lost + policy.hold_frames; ++i)
    o.expect(!rec[i].command, "command during hold at step " + std::to_string(i));

  ServoCommand pose{rec[lost].rig.pan_servo, rec[lost].rig.tilt_servo};
  const ServoCommand start = pose;
  std::size_t i = lost + policy.hold_frames;
  std::size_t returning = 0;
  for (; i < rec.size() && !(pose == ServoCommand{servo.neutral, servo.neutral}); ++i, ++returning) {
    o.expect(rec[i].command.has_value(), "missing return command at step " + std::to_string(i));
    if (!rec[i].command) break;
    const auto& c = *rec[i].command;
    auto toward = [&](int from, int to) {
      const int rate = policy.return_rate;
      return from < to ? std::min(from + rate, to) : std::max(from - rate, to);
    };
    o.expect(c.pan == toward(pose.pan, servo.neutral) && c.tilt == toward(pose.tilt, servo.neutral),
             "return step is not return_rate toward neutral at step " + std::to_string(i));
    pose = c;
  }
  o.expect(pose == ServoCommand{servo.neutral, servo.neutral}, "did not reach (90, 90)");
  for (; i < rec.size(); ++i) o.expect(!rec[i].command, "command after reaching neutral");
  o.expect(start.pan != servo.neutral, "target was lost at neutral; scenario is vacuous");
  if (o.pass)
    o.detail = "lost at step " + std::to_string(lost) + " from pan " + std::to_string(start.pan) +
               ", " + std::to_string(policy.hold_frames) + " silent steps, " +
               std::to_string(returning) + " return steps";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 control-law exactness", control_law_exactness},
      {"2 paper-mode fidelity", paper_mode_fidelity},
      {"3 closed-loop convergence", closed_loop_convergence},
      {"4 linear-law error bound", linear_law_error_bound},
      {"5 protocol round trip", protocol_round_trip},
      {"6 parser robustness", parser_robustness},
      {"7 determinism", determinism},
      {"8 lost-target policy", lost_target_policy},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
