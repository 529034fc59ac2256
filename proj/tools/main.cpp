#include "epsconvex/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace epsconvex;
  CLI::App app{"eps-strict convexity checks in pinched negative curvature"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format;
  double alpha = 0, beta = 0, alpha_p = 0, beta_p = 0, eps = 0;

  const char* help[] = {
      "Integrate the matrix Riccati flow from the upper barrier and compare with both barriers",
      "Run the necessary, sufficient and (a = b) iff checks on a body",
      "Emit the shape-operator eigenvalue profile along the inward normal flow",
      "Report the focal time along the inward normal geodesic",
      "Check that dilating the erosion gives back the body",
      "Run the smoothing level-set construction and its curvature check"};
  const Command commands[] = {Command::riccati, Command::check, Command::profile,
                              Command::focal, Command::roundtrip, Command::smooth};
  for (int i = 0; i < 6; ++i) {
    const Command cmd = commands[i];
    CLI::App* sub = app.add_subcommand(command_name(cmd), help[i]);
    sub->callback([&cfg, cmd] { cfg.command = cmd; });
    if (cmd != Command::riccati)
      sub->add_option_function<std::string>("--body", [&cfg](const std::string& p) { cfg.body_spec_path = p; },
                                             "Body spec JSON file")->required();
    sub->add_option("--eps", eps, "Neighbourhood radius");
    sub->add_option("--a", cfg.a, "Lower curvature scale");
    sub->add_option("--b", cfg.b, "Upper curvature scale");
    sub->add_option("--seed", cfg.seed, "Seed for randomized probes");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tolerance", cfg.tolerance, "Verdict tolerance band");
    sub->add_option("--steps", cfg.steps, "Number of samples or integration segments");
    if (cmd == Command::riccati) sub->add_option("--rank", cfg.rank, "Operator rank");
    if (cmd == Command::roundtrip) sub->add_option("--probes", cfg.probes, "Boundary probes");
    if (cmd == Command::smooth) {
      sub->add_option("--alpha", alpha, "Lower II bound of the body");
      sub->add_option("--beta", beta, "Upper II bound of the body");
      sub->add_option("--alpha-p", alpha_p, "Lower target bound for the level set");
      sub->add_option("--beta-p", beta_p, "Upper target bound for the level set");
      sub->add_option("--eta", cfg.eta, "Neighbourhood allowance");
      sub->add_option("--kappa", cfg.kappa, "Kernel radius (0 picks eta'/12)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  const CLI::App* sub = app.get_subcommands().front();
  auto given = [sub](const char* name) {
    const CLI::Option* o = sub->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--eps")) cfg.eps = eps;
  if (!format.empty()) cfg.output_format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
  if (given("--alpha")) cfg.alpha = alpha;
  if (given("--beta")) cfg.beta = beta;
  if (given("--alpha-p")) cfg.alpha_p = alpha_p;
  if (given("--beta-p")) cfg.beta_p = beta_p;
  return run(cfg, std::cout, std::cerr);
}
