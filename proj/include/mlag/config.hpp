#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlag/continuation.hpp"
#include "mlag/cubic.hpp"
#include "mlag/frame.hpp"
#include "mlag/mpass.hpp"
#include "mlag/surface.hpp"
#include "mlag/wp.hpp"

namespace mlag {

struct SurfaceConfig {
  Backend backend = Backend::Torus;
  int n = 8;
  double side = 1.0;
  double lambda0 = 1.0;
  int refinement = 3;
};

struct CubicConfig {
  bool constant = true;
  Complex value{1.0, 0.0};
  std::vector<ZeroSpec> zeros;
  double amplitude = 1.0;
};

enum class SamplerKind { Mesh, Trivial };

struct FrameConfig {
  SamplerKind sampler = SamplerKind::Mesh;
  std::vector<Complex> path;
  FrameOptions options;
};

struct WpConfig {
  std::vector<double> h{0.01};
  Stencil stencil = Stencil::Centered;
};

/// Validated run configuration. `canonical` is the parsed document
/// re-serialized with sorted keys; `hash` is its FNV-1a 64 digest.
struct RunConfig {
  std::string canonical;
  std::string hash;

  std::optional<SurfaceConfig> surface;
  std::optional<CubicConfig> cubic;
  std::optional<double> t;

  NewtonOptions newton;
  double fold_epsilon = kFoldEpsilon;
  ContinuationOptions continuation;
  double theta = 3.0;
  MountainPassOptions mpass;
  FrameConfig frame;
  WpConfig wp;
  std::int64_t seed = 0;
};

/// Parses and validates; unknown keys and type errors raise ConfigError
/// with the schema path of the offending entry (e.g. "$.surface.n").
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// 16 hex digits of FNV-1a 64.
std::string fnv1a_hex(const std::string& data);

/// Schema description printed by `mlag --help-config`.
std::string config_schema();

SurfacePtr build_surface(const RunConfig& cfg);
CubicDifferential build_cubic(const RunConfig& cfg, const SurfacePtr& s);

} // namespace mlag
