#include "mlag/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mlag {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void require_object(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

double nonnegative(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v >= 0.0)) fail(path, "must be nonnegative");
  return v;
}

std::int64_t integer(const json& j, const std::string& path, std::int64_t lo, std::int64_t hi) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < lo || v > hi) fail(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Complex point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [re, im]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

SurfaceConfig parse_surface(const json& j) {
  const std::string path = "$.surface";
  if (!j.is_object()) fail(path, "expected an object");
  if (!j.contains("backend")) fail(path + ".backend", "required");
  const std::string backend = string(j["backend"], path + ".backend");
  SurfaceConfig s;
  if (backend == "torus") {
    require_object(j, path, {"backend", "n", "side", "lambda0"});
    s.backend = Backend::Torus;
    if (j.contains("n")) s.n = static_cast<int>(integer(j["n"], path + ".n", 4, 4096));
    if (j.contains("side")) s.side = positive(j["side"], path + ".side");
    if (j.contains("lambda0")) s.lambda0 = positive(j["lambda0"], path + ".lambda0");
  } else if (backend == "octagon") {
    require_object(j, path, {"backend", "refinement"});
    s.backend = Backend::Octagon;
    if (j.contains("refinement"))
      s.refinement = static_cast<int>(integer(j["refinement"], path + ".refinement", 1, 7));
  } else {
    fail(path + ".backend", "expected \"torus\" or \"octagon\"");
  }
  return s;
}

CubicConfig parse_cubic(const json& j) {
  const std::string path = "$.cubic";
  require_object(j, path, {"constant", "zeros", "amplitude"});
  CubicConfig c;
  const bool has_constant = j.contains("constant");
  const bool has_zeros = j.contains("zeros");
  if (has_constant == has_zeros) fail(path, "give exactly one of \"constant\" or \"zeros\"");
  if (has_constant) {
    if (j.contains("amplitude")) fail(path + ".amplitude", "only valid with \"zeros\"");
    c.constant = true;
    c.value = point(j["constant"], path + ".constant");
    return c;
  }
  c.constant = false;
  const json& z = j["zeros"];
  if (!z.is_array() || z.empty()) fail(path + ".zeros", "expected a nonempty array of [class, order]");
  for (std::size_t i = 0; i < z.size(); ++i) {
    const std::string zp = path + ".zeros[" + std::to_string(i) + "]";
    if (!z[i].is_array() || z[i].size() != 2) fail(zp, "expected [class, order]");
    ZeroSpec spec;
    spec.vertex_class = static_cast<int>(integer(z[i][0], zp + "[0]", 0, 1 << 30));
    spec.order = static_cast<int>(integer(z[i][1], zp + "[1]", 1, 1 << 30));
    c.zeros.push_back(spec);
  }
  if (j.contains("amplitude")) c.amplitude = positive(j["amplitude"], path + ".amplitude");
  return c;
}

void parse_frame(const json& j, FrameConfig& f) {
  const std::string path = "$.frame";
  require_object(j, path,
                 {"sampler", "path", "step", "project", "flatness", "flatness_cell", "max_step_defect"});
  if (j.contains("sampler")) {
    const std::string s = string(j["sampler"], path + ".sampler");
    if (s == "mesh")
      f.sampler = SamplerKind::Mesh;
    else if (s == "trivial")
      f.sampler = SamplerKind::Trivial;
    else
      fail(path + ".sampler", "expected \"mesh\" or \"trivial\"");
  }
  if (j.contains("path")) {
    const json& p = j["path"];
    if (!p.is_array() || p.size() < 2) fail(path + ".path", "expected at least two [x, y] points");
    for (std::size_t i = 0; i < p.size(); ++i)
      f.path.push_back(point(p[i], path + ".path[" + std::to_string(i) + "]"));
  }
  if (j.contains("step")) f.options.step = positive(j["step"], path + ".step");
  if (j.contains("project")) f.options.project = boolean(j["project"], path + ".project");
  if (j.contains("flatness")) f.options.flatness = boolean(j["flatness"], path + ".flatness");
  if (j.contains("flatness_cell"))
    f.options.flatness_cell = positive(j["flatness_cell"], path + ".flatness_cell");
  if (j.contains("max_step_defect"))
    f.options.max_step_defect = positive(j["max_step_defect"], path + ".max_step_defect");
}

void parse_wp(const json& j, WpConfig& w) {
  const std::string path = "$.wpcheck";
  require_object(j, path, {"h", "stencil"});
  if (j.contains("h")) {
    const json& h = j["h"];
    w.h.clear();
    if (h.is_array()) {
      if (h.empty()) fail(path + ".h", "expected a positive number or a nonempty array");
      for (std::size_t i = 0; i < h.size(); ++i)
        w.h.push_back(positive(h[i], path + ".h[" + std::to_string(i) + "]"));
    } else {
      w.h.push_back(positive(h, path + ".h"));
    }
  }
  if (j.contains("stencil")) {
    const std::string s = string(j["stencil"], path + ".stencil");
    if (s == "centered")
      w.stencil = Stencil::Centered;
    else if (s == "one_sided")
      w.stencil = Stencil::OneSided;
    else
      fail(path + ".stencil", "expected \"centered\" or \"one_sided\"");
  }
}

} // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("$", std::string("malformed JSON (") + e.what() + ")");
  }
  require_object(j, "$",
                 {"surface", "cubic", "t", "tolerances", "continuation", "mpass", "frame", "wpcheck", "seed"});

  RunConfig cfg;
  cfg.canonical = j.dump();
  cfg.hash = fnv1a_hex(cfg.canonical);

  if (j.contains("surface")) cfg.surface = parse_surface(j["surface"]);
  if (j.contains("cubic")) cfg.cubic = parse_cubic(j["cubic"]);
  if (j.contains("t")) cfg.t = nonnegative(j["t"], "$.t");

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    require_object(t, "$.tolerances", {"newton", "newton_max_iter", "fold_epsilon"});
    if (t.contains("newton")) cfg.newton.tol = positive(t["newton"], "$.tolerances.newton");
    if (t.contains("newton_max_iter"))
      cfg.newton.max_iter = static_cast<int>(integer(t["newton_max_iter"], "$.tolerances.newton_max_iter", 1, 100000));
    if (t.contains("fold_epsilon"))
      cfg.fold_epsilon = positive(t["fold_epsilon"], "$.tolerances.fold_epsilon");
  }
  cfg.continuation.tol = cfg.newton.tol;
  cfg.continuation.newton_max_iter = cfg.newton.max_iter;

  if (j.contains("continuation")) {
    const json& c = j["continuation"];
    const std::string path = "$.continuation";
    require_object(c, path, {"dt0", "t_stop", "max_steps", "max_lambda_drop"});
    if (c.contains("dt0")) cfg.continuation.dt0 = positive(c["dt0"], path + ".dt0");
    if (c.contains("t_stop")) cfg.continuation.t_stop = positive(c["t_stop"], path + ".t_stop");
    if (c.contains("max_steps"))
      cfg.continuation.max_steps = static_cast<int>(integer(c["max_steps"], path + ".max_steps", 1, 10000000));
    if (c.contains("max_lambda_drop")) {
      const double d = positive(c["max_lambda_drop"], path + ".max_lambda_drop");
      if (!(d < 1.0)) fail(path + ".max_lambda_drop", "must be below 1");
      cfg.continuation.max_lambda_drop = d;
    }
  }

  cfg.mpass.tol = cfg.newton.tol;
  cfg.mpass.epsilon = cfg.fold_epsilon;
  if (j.contains("mpass")) {
    const json& m = j["mpass"];
    const std::string path = "$.mpass";
    require_object(m, path, {"theta", "nodes", "max_path_iter", "max_retries", "switch_tol", "step", "max_step"});
    if (m.contains("theta")) {
      cfg.theta = number(m["theta"], path + ".theta");
      if (!(cfg.theta > 2.0)) fail(path + ".theta", "must exceed 2");
    }
    if (m.contains("nodes")) cfg.mpass.nodes = static_cast<int>(integer(m["nodes"], path + ".nodes", 3, 100000));
    if (m.contains("max_path_iter"))
      cfg.mpass.max_path_iter = static_cast<int>(integer(m["max_path_iter"], path + ".max_path_iter", 1, 10000000));
    if (m.contains("max_retries"))
      cfg.mpass.max_retries = static_cast<int>(integer(m["max_retries"], path + ".max_retries", 0, 10));
    if (m.contains("switch_tol")) cfg.mpass.switch_tol = positive(m["switch_tol"], path + ".switch_tol");
    if (m.contains("step")) cfg.mpass.step = positive(m["step"], path + ".step");
    if (m.contains("max_step")) cfg.mpass.max_step = positive(m["max_step"], path + ".max_step");
  }

  if (j.contains("frame")) parse_frame(j["frame"], cfg.frame);
  if (j.contains("wpcheck")) parse_wp(j["wpcheck"], cfg.wp);
  if (j.contains("seed")) cfg.seed = integer(j["seed"], "$.seed", INT64_MIN, INT64_MAX);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$: cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_schema() {
  return R"(config (JSON object, unknown keys rejected)
  surface       {"backend": "torus", "n": int >= 4 (8), "side": > 0 (1), "lambda0": > 0 (1)}
              | {"backend": "octagon", "refinement": 1..7 (3)}
  cubic         {"constant": [re, im]}
              | {"zeros": [[class, order], ...], "amplitude": > 0 (1)}   orders sum to 6g - 6
  t             number >= 0
  tolerances    {"newton": > 0 (1e-10), "newton_max_iter": int (50), "fold_epsilon": > 0 (1e-4)}
  continuation  {"dt0": > 0 (0.01), "t_stop": > 0, "max_steps": int, "max_lambda_drop": (0, 1) (0.5)}
  mpass         {"theta": > 2 (3), "nodes": int >= 3 (20), "max_path_iter": int (4000),
                 "max_retries": 0..10 (2), "switch_tol": > 0 (1e-3), "step": > 0 (0.5), "max_step": > 0 (0.25)}
  frame         {"sampler": "mesh" | "trivial", "path": [[x, y], ...], "step": > 0 (0.01),
                 "project": bool (false), "flatness": bool (false), "flatness_cell": > 0 (1e-3),
                 "max_step_defect": > 0 (1e-6)}
  wpcheck       {"h": > 0 or [> 0, ...] (0.01), "stencil": "centered" | "one_sided"}
  seed          integer (0)
)";
}

SurfacePtr build_surface(const RunConfig& cfg) {
  if (!cfg.surface) throw ConfigError("$.surface: required for this command");
  const SurfaceConfig& s = *cfg.surface;
  if (s.backend == Backend::Torus) return build_flat_torus(s.n, s.side, s.lambda0);
  return build_genus2_octagon(s.refinement);
}

CubicDifferential build_cubic(const RunConfig& cfg, const SurfacePtr& s) {
  if (!cfg.cubic) throw ConfigError("$.cubic: required for this command");
  const CubicConfig& c = *cfg.cubic;
  if (c.constant) return constant_cubic(s, c.value);
  return synthetic_cubic(s, c.zeros, c.amplitude);
}

} // namespace mlag
