#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace tropeig;
  CLI::App app{"Leading exponents and coefficients of eigenvalues of perturbed matrix pencils"};
  app.require_subcommand(1);

  cli::Options opt;
  std::string mode = "opt", format = "human", file;
  unsigned seed = 0;
  std::map<std::string, GraphMode> modes{{"opt", GraphMode::kOpt}, {"sat", GraphMode::kSat}};

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", file, "input file")->required();
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"human", "machine"}));
    sub->add_option("--seed", seed, "seed for randomized choices");
    sub->add_option("--tol", opt.tol, "relative tolerance for negligible polynomial coefficients")
        ->check(CLI::PositiveNumber);
  };
  auto with_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", mode, "graph choice: opt or sat")->check(CLI::IsMember({"opt", "sat"}));
  };
  auto with_eps = [&](CLI::App* sub) {
    sub->add_option("--eps", opt.eps, "decreasing eps values, comma separated")->delimiter(',');
  };

  CLI::App* corners = app.add_subcommand("corners", "corners of the min-plus characteristic polynomial");
  common(corners);
  CLI::App* predict = app.add_subcommand("predict", "asymptotic equivalents of all eigenvalues");
  common(predict);
  with_mode(predict);
  CLI::App* verify = app.add_subcommand("verify", "check predictions against an eps sweep");
  common(verify);
  with_mode(verify);
  with_eps(verify);
  CLI::App* assignment = app.add_subcommand("assignment", "Hungarian pair and graphs at a corner");
  common(assignment);
  with_mode(assignment);
  assignment->add_option("--gamma", opt.gamma, "corner, e.g. 1 or -1/3")->required();
  CLI::App* najman = app.add_subcommand("najman", "eps X^2 m + X c + k from Weierstrass block data");
  common(najman);
  with_eps(najman);
  CLI::App* format_cmd = app.add_subcommand("format", "canonical form of a spec file");
  format_cmd->add_option("file", file, "input file")->required();

  CLI11_PARSE(app, argc, argv);

  opt.mode = modes.at(mode);
  opt.machine = format == "machine";
  for (CLI::App* sub : {corners, predict, verify, assignment, najman})
    if (sub->parsed() && sub->count("--seed")) opt.seed = seed;

  auto dispatch = [&](auto command) { return cli::run(command, file, opt, std::cout, std::cerr); };
  if (corners->parsed()) return dispatch(cli::cmd_corners);
  if (predict->parsed()) return dispatch(cli::cmd_predict);
  if (verify->parsed()) return dispatch(cli::cmd_verify);
  if (assignment->parsed()) return dispatch(cli::cmd_assignment);
  if (najman->parsed()) return dispatch(cli::cmd_najman);
  return dispatch(cli::cmd_format);
}
