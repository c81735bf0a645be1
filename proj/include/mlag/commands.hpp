#pragma once

#include <iosfwd>
#include <string>

#include "mlag/config.hpp"

namespace mlag {

/// Exit codes shared by all subcommands.
enum ExitCode : int { kExitOk = 0, kExitDomain = 1, kExitNumerical = 2 };

// Each command writes its output file(s) and reports to `log`; errors go to
// `err` and map to the exit code of their family.

int cmd_mesh(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err);
int cmd_solve(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err);
/// Writes `out` (CSV) and the JSON sidecar next to it.
int cmd_continue(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err);
int cmd_mpass(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err);
int cmd_frame(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err);
int cmd_wpcheck(const RunConfig& cfg, const std::string& out, std::ostream& log, std::ostream& err);
int cmd_selftest(std::ostream& log);

/// Sidecar name: extension replaced by ".json" ("curve.csv" -> "curve.json").
std::string sidecar_path(const std::string& csv_path);

} // namespace mlag
