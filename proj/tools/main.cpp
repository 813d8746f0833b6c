// amenbench: batch experiments on finite diagonals, matrix groups,
// biorthogonal lifts, and their norm certificates.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "amen/experiment.hpp"

namespace {

// Flags shared by every subcommand. Values parsed from --config are applied
// first; explicit flags override them.
struct CommonFlags {
  std::string config_path;
};

void add_output_flags(CLI::App* cmd, amen::ExperimentConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "seed for every random choice in the run");
  cmd->add_option("--tolerance", cfg.tolerance, "float certification tolerance");
  cmd->add_option("--output,-o", cfg.output, "output path (stdout when omitted)");
  cmd->add_option("--format", cfg.format, "json | csv | both")
      ->check(CLI::IsMember({"json", "csv", "both"}));
}

void add_group_flags(CLI::App* cmd, amen::ExperimentConfig& cfg) {
  cmd->add_option("--group", cfg.group_kind,
                  "monomial | cyclic-monomial | transitive | closure | auto");
  cmd->add_option("--group-spec", cfg.group_spec, "group-spec JSON file (perm/signs generators)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite workbench for diagonals, matrix groups, and lift certificates"};
  app.require_subcommand(1);

  amen::ExperimentConfig cfg;
  CommonFlags common;
  // The config file is applied before flag parsing so explicit flags override it.
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    std::string path;
    if (arg == "--config" && i + 1 < argc)
      path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      path = arg.substr(9);
    if (path.empty()) continue;
    std::ifstream in(path);
    if (!in) {
      std::cerr << "config error: cannot open " << path << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      cfg = amen::config_from_json(ss.str());
    } catch (const amen::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
  }
  app.add_option("--config", common.config_path, "load an ExperimentConfig JSON file");

  auto* verify = app.add_subcommand("verify-diagonal",
                                    "check group average against the canonical diagonal");
  verify->add_option("--n", cfg.n, "matrix size");
  add_group_flags(verify, cfg);
  add_output_flags(verify, cfg);

  auto* irr = app.add_subcommand("irreducible", "exact span test for a matrix group");
  irr->add_option("--n", cfg.n, "matrix size");
  add_group_flags(irr, cfg);
  add_output_flags(irr, cfg);

  auto* certify = app.add_subcommand("certify-a", "certify a biorthogonal lift schedule");
  certify->add_option("--host", cfg.host_kind, "lp | lorentz | dissection");
  certify->add_option("--p", cfg.p, "host exponent (inf accepted)");
  certify->add_option("--dim", cfg.dim, "host dimension / atom count");
  certify->add_option("--weights", cfg.weights, "explicit weights or atom measures");
  certify->add_option("--schedule", cfg.schedule, "system sizes, e.g. 1,2,4,8")->delimiter(',');
  add_group_flags(certify, cfg);
  add_output_flags(certify, cfg);

  auto* converge = app.add_subcommand("converge", "defect curves for lifted diagonals");
  converge->add_option("--host", cfg.host_kind, "lp");
  converge->add_option("--p", cfg.p, "host exponent");
  converge->add_option("--dim", cfg.dim, "host dimension");
  converge->add_option("--operator", cfg.operator_kind,
                       "harmonic-diag | compact-decay | truncation:<m>");
  converge->add_option("--schedule", cfg.schedule, "truncation sizes, e.g. 2,4,8,16")
      ->delimiter(',');
  add_group_flags(converge, cfg);
  add_output_flags(converge, cfg);

  auto* construct = app.add_subcommand("construct", "exact direct-sum / cutdown / ideal models");
  construct->add_option("--model", cfg.model, "direct-sum | cutdown | ideal");
  construct->add_option("--m", cfg.m, "corner size");
  construct->add_option("--k", cfg.k, "complement size");
  construct->add_option("--a", cfg.a, "ideal block size");
  construct->add_option("--b", cfg.b, "complement block size");
  add_output_flags(construct, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are config errors
  }

  if (verify->parsed()) cfg.command = "verify-diagonal";
  if (irr->parsed()) cfg.command = "irreducible";
  if (certify->parsed()) cfg.command = "certify-a";
  if (converge->parsed()) cfg.command = "converge";
  if (construct->parsed()) cfg.command = "construct";

  return amen::run_and_write(cfg);
}
