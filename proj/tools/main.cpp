#include <CLI11.hpp>
#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace deforce::cli;
  CLI::App app{"deforce: plane / curved-surface interactions by the derivative expansion"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string config;
  double quad_tol = 0.0, rho_m_frac = 0.0;
  const std::map<std::string, std::string> help{
      {"eval", "evaluate the PFA / DE functional for one profile and kernel"},
      {"gamma", "fit the NTLO coefficient over an a/R ladder"},
      {"check", "run the invariant suites"},
      {"compare", "tabulate PFA, DE2, DA, Blocki and SEI"},
      {"jacobian", "binned level-set Jacobian and Blocki force"},
      {"sei", "surface element integration against the dilute oracle"},
      {"sweep", "distance sweep to CSV"}};

  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config, "run config (JSON) or a previous manifest.json");
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--quad-tol", quad_tol, "override quad.rel_tol");
    sub->add_option("--rho-m-frac", rho_m_frac, "override the planform radius rho_M / R");
    if (name == "check") sub->add_option("--suite", opts.suites, "run only the named suite(s)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (!config.empty()) opts.config_path = config;
  if (sub->count("--quad-tol")) opts.overrides.quad_tol = quad_tol;
  if (sub->count("--rho-m-frac")) opts.overrides.rho_m_frac = rho_m_frac;
  return run(sub->get_name(), opts, std::cout, std::cerr);
}
