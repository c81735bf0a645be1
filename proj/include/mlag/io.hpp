#pragma once

#include <string>
#include <vector>

#include "mlag/continuation.hpp"
#include "mlag/cubic.hpp"
#include "mlag/frame.hpp"
#include "mlag/mpass.hpp"
#include "mlag/wp.hpp"

namespace mlag {

// Serializers. Every document carries "config_hash"; CSV files start with a
// "# config_hash: ..." line. Output is a pure function of the inputs.

std::string mesh_json(const DiscreteSurface& s, const std::string& hash);
std::string cubic_json(const CubicDifferential& q, const std::string& hash);
std::string solution_json(const SolutionPoint& p, const std::string& hash);

struct CurveSummary {
  std::optional<double> T0;          // fold location when detected
  std::optional<double> T_bound;     // nonexistence bound
  std::optional<SolutionPoint> fold;
};

/// Columns t, lambda_min, residual_norm, u_min, u_max, area_induced.
std::string curve_csv(const SolutionCurve& c, const DiscreteSurface& s, const std::string& hash);
std::string curve_json(const SolutionCurve& c, const CurveSummary& sum, const std::string& hash);

std::string mpass_json(const MountainPassResult& r, const std::string& hash);
std::string frame_json(const FrameSheet& f, bool holomorphic, const std::string& hash);

/// One row per stencil node: h, t, area, fd2, exact, rel_err, adot.
std::string wpcheck_csv(const std::vector<double>& h, const std::vector<AreaRecord>& recs,
                        const std::string& hash);

void write_text(const std::string& path, const std::string& text);

} // namespace mlag
