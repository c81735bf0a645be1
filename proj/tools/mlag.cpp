#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mlag/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"minimal Lagrangian structure equation: solver, continuation, mountain pass, frames"};
  app.require_subcommand(1);
  bool show_schema = false;
  app.add_flag("--help-config", show_schema, "print the config schema and exit");

  std::string config_path;
  std::string out;
  bool project = false;

  struct Sub {
    const char* name;
    const char* help;
    const char* default_out;
  };
  const Sub subs[] = {
      {"mesh", "export the surface mesh (and cubic, if configured)", "mesh.json"},
      {"solve", "Newton solve at a single t", "solution.json"},
      {"continue", "trace the stable branch and locate the fold", "curve.csv"},
      {"mpass", "mountain-pass second solution at t", "mpass.json"},
      {"frame", "integrate the SU(2,1) frame along a path", "frame.json"},
      {"wpcheck", "second variation of the area functional", "wpcheck.csv"},
  };
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("-c,--config", config_path, "JSON config file")->required();
    sub->add_option("-o,--out", out, "output file")->default_str(s.default_out);
    if (std::string(s.name) == "frame") sub->add_flag("--project", project, "re-project onto SU(2,1) after each step");
  }
  app.add_subcommand("selftest", "quick built-in checks");

  if (argc > 1 && std::string(argv[1]) == "--help-config") {
    std::cout << mlag::config_schema();
    return 0;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : mlag::kExitDomain;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "selftest") return mlag::cmd_selftest(std::cout);

  mlag::RunConfig cfg;
  try {
    cfg = mlag::load_config(config_path);
  } catch (const mlag::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mlag::kExitDomain;
  }
  if (out.empty()) {
    for (const Sub& s : subs)
      if (name == s.name) out = s.default_out;
  }
  if (project) cfg.frame.options.project = true;

  if (name == "mesh") return mlag::cmd_mesh(cfg, out, std::cout, std::cerr);
  if (name == "solve") return mlag::cmd_solve(cfg, out, std::cout, std::cerr);
  if (name == "continue") return mlag::cmd_continue(cfg, out, std::cout, std::cerr);
  if (name == "mpass") return mlag::cmd_mpass(cfg, out, std::cout, std::cerr);
  if (name == "frame") return mlag::cmd_frame(cfg, out, std::cout, std::cerr);
  return mlag::cmd_wpcheck(cfg, out, std::cout, std::cerr);
}
