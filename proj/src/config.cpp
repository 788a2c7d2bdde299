#include "pantilt/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "pantilt/text.hpp"

namespace pantilt {

namespace {

std::string where(const std::string& source, const YAML::Mark& mark) {
  if (mark.is_null()) return source;
  return source + ":" + std::to_string(mark.line + 1) + ":" + std::to_string(mark.column + 1);
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    throw ConfigError(where(source_, node.Mark()) + ": " + msg);
  }

  void check_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                  const std::string& section) const {
    if (!map.IsMap()) fail(map, section + " must be a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + section);
    }
  }

  template <typename T>
  void get(const YAML::Node& map, const char* key, T& out) const {
    const auto node = map[key];
    if (!node) return;
    if (!node.IsScalar()) fail(node, std::string("'") + key + "' must be a scalar");
    try {
      out = node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, std::string("'") + key + "' has an invalid value '" + node.Scalar() + "'");
    }
  }

  template <typename Fn>
  void validated(const YAML::Node& node, Fn&& fn) const {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      fail(node, e.what());
    }
  }

 private:
  std::string source_;
};

}  // namespace

RunConfig parse_config(std::string_view yaml, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(where(source, e.mark) + ": " + e.msg);
  }
  const Reader r(source);
  if (!root.IsMap()) throw ConfigError(source + ": config must be a YAML mapping");
  r.check_keys(root,
               {"version", "intrinsics", "servo", "policy", "model", "trajectory", "mode",
                "steps", "output", "input"},
               "config");

  RunConfig cfg;
  if (!root["version"]) throw ConfigError(source + ": missing 'version' (expected 1)");
  r.get(root, "version", cfg.version);
  if (cfg.version != kConfigVersion)
    r.fail(root["version"], "unsupported config version " + std::to_string(cfg.version));

  if (const auto n = root["intrinsics"]) {
    r.check_keys(n, {"L", "B", "theta", "phi"}, "intrinsics");
    r.get(n, "L", cfg.intrinsics.frame.width);
    r.get(n, "B", cfg.intrinsics.frame.height);
    r.get(n, "theta", cfg.intrinsics.theta);
    r.get(n, "phi", cfg.intrinsics.phi);
    r.validated(n, [&] { validate(cfg.intrinsics); });
  }

  if (const auto n = root["servo"]) {
    r.check_keys(n, {"min", "max", "neutral", "least_count", "deadband", "pan_sign", "tilt_sign"},
                 "servo");
    r.get(n, "min", cfg.servo.min_angle);
    r.get(n, "max", cfg.servo.max_angle);
    r.get(n, "neutral", cfg.servo.neutral);
    r.get(n, "least_count", cfg.servo.least_count);
    r.get(n, "deadband", cfg.servo.deadband);
    r.get(n, "pan_sign", cfg.servo.pan_sign);
    r.get(n, "tilt_sign", cfg.servo.tilt_sign);
    r.validated(n, [&] {
      validate(cfg.servo);
      if (cfg.servo.min_angle < sim::kServoMin || cfg.servo.max_angle > sim::kServoMax)
        throw std::invalid_argument("servo range must lie within [0, 180]");
    });
  }

  if (const auto n = root["policy"]) {
    r.check_keys(n, {"hold_frames", "return_rate"}, "policy");
    r.get(n, "hold_frames", cfg.policy.hold_frames);
    r.get(n, "return_rate", cfg.policy.return_rate);
    r.validated(n, [&] { validate(cfg.policy); });
  }

  cfg.model.least_count = cfg.servo.least_count;
  if (const auto n = root["model"]) {
    r.check_keys(n, {"least_count", "max_slew"}, "model");
    r.get(n, "least_count", cfg.model.least_count);
    if (n["max_slew"]) {
      int slew = 0;
      r.get(n, "max_slew", slew);
      cfg.model.max_slew = slew;
    }
    r.validated(n, [&] { sim::validate(cfg.model); });
  }

  if (const auto n = root["mode"]) {
    std::string mode;
    r.get(root, "mode", mode);
    if (mode == "incremental") cfg.policy.mode = CommandMode::incremental;
    else if (mode == "paper_literal") cfg.policy.mode = CommandMode::paper_literal;
    else r.fail(n, "mode must be 'incremental' or 'paper_literal'");
  }

  if (const auto n = root["trajectory"]) {
    r.check_keys(n,
                 {"kind", "azimuth", "elevation", "velocity_az", "velocity_el", "amplitude",
                  "period", "apparent_size"},
                 "trajectory");
    sim::TrajectorySpec spec;
    std::string kind = "static";
    r.get(n, "kind", kind);
    if (kind == "static") spec.kind = sim::TrajectoryKind::static_target;
    else if (kind == "linear") spec.kind = sim::TrajectoryKind::linear;
    else if (kind == "sinusoidal") spec.kind = sim::TrajectoryKind::sinusoidal;
    else r.fail(n["kind"], "trajectory kind must be static, linear or sinusoidal");
    r.get(n, "azimuth", spec.azimuth);
    r.get(n, "elevation", spec.elevation);
    r.get(n, "velocity_az", spec.velocity_az);
    r.get(n, "velocity_el", spec.velocity_el);
    r.get(n, "amplitude", spec.amplitude);
    r.get(n, "period", spec.period);
    r.get(n, "apparent_size", spec.apparent_size);
    r.validated(n, [&] { sim::validate(spec); });
    cfg.trajectory = spec;
  }

  if (const auto n = root["steps"]) {
    long long steps = 0;
    r.get(root, "steps", steps);
    if (steps < 1) r.fail(n, "steps must be >= 1");
    cfg.steps = static_cast<std::size_t>(steps);
  }
  if (root["output"]) {
    std::string out;
    r.get(root, "output", out);
    cfg.output = out;
  }
  if (const auto n = root["input"]) {
    std::string in;
    r.get(root, "input", in);
    cfg.input = in;
    if (cfg.trajectory) r.fail(n, "'input' and 'trajectory' are mutually exclusive");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string canonical_config(const RunConfig& cfg) {
  using text::shortest;
  std::ostringstream s;
  s << "version=" << cfg.version << '\n'
    << "intrinsics=" << shortest(cfg.intrinsics.frame.width) << ','
    << shortest(cfg.intrinsics.frame.height) << ',' << shortest(cfg.intrinsics.theta) << ','
    << shortest(cfg.intrinsics.phi) << '\n'
    << "servo=" << cfg.servo.min_angle << ',' << cfg.servo.max_angle << ',' << cfg.servo.neutral
    << ',' << cfg.servo.least_count << ',' << shortest(cfg.servo.deadband) << ','
    << cfg.servo.pan_sign << ',' << cfg.servo.tilt_sign << '\n'
    << "policy=" << cfg.policy.hold_frames << ',' << cfg.policy.return_rate << ','
    << to_string(cfg.policy.mode) << '\n'
    << "model=" << cfg.model.least_count << ','
    << (cfg.model.max_slew ? std::to_string(*cfg.model.max_slew) : "unlimited") << '\n'
    << "steps=" << cfg.steps << '\n';
  if (cfg.trajectory) {
    const auto& t = *cfg.trajectory;
    s << "trajectory=" << sim::to_string(t.kind) << ',' << shortest(t.azimuth) << ','
      << shortest(t.elevation) << ',' << shortest(t.velocity_az) << ','
      << shortest(t.velocity_el) << ',' << shortest(t.amplitude) << ',' << shortest(t.period)
      << ',' << shortest(t.apparent_size) << '\n';
  }
  if (cfg.input) s << "input=" << *cfg.input << '\n';
  return s.str();
}

std::uint64_t config_hash(const RunConfig& cfg) { return text::fnv1a64(canonical_config(cfg)); }

}  // namespace pantilt
