// Command-line front end: analyze, solve, converge, check.

#include "rksv/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheck = 3;

struct RunFlags {
  std::string example = "1";
  std::string scheme = "rrsv";
  std::string config;
  int k = 1;
  int s = 3;
  std::vector<int> n{16};
  double cfl = 0.1;
  std::optional<double> cfl_exp;
  std::optional<double> t_final;
  std::uint64_t seed = 1;
  std::string format = "md";
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool many_sizes) {
  cmd->add_option("--example", f.example, "1, 2 or custom")->check(CLI::IsMember({"1", "2", "custom"}));
  cmd->add_option("--config", f.config, "YAML file describing a custom problem");
  cmd->add_option("--scheme", f.scheme, "lsv, rrsv or rsv");
  cmd->add_option("--k", f.k, "polynomial degree");
  cmd->add_option("--s", f.s, "Runge-Kutta stages");
  if (many_sizes) {
    cmd->add_option("--n", f.n, "comma-separated element counts")->delimiter(',');
  } else {
    cmd->add_option("--n", f.n, "element count")->expected(1);
  }
  cmd->add_option("--cfl", f.cfl, "CFL constant lambda");
  cmd->add_option("--cfl-exp", f.cfl_exp, "exponent e in tau = lambda h^e");
  cmd->add_option("--t-final", f.t_final, "final time");
  cmd->add_option("--seed", f.seed, "seed of the perturbed mesh");
  if (many_sizes) cmd->add_option("--format", f.format, "md or csv")->check(CLI::IsMember({"md", "csv"}));
}

rksv::ExperimentConfig to_config(const RunFlags& f, const CLI::App* cmd) {
  rksv::ExperimentConfig c;
  if (f.example == "custom") {
    if (f.config.empty()) throw std::invalid_argument("--example custom needs --config FILE");
    c = rksv::load_config(f.config);
  } else {
    c.example = std::stoi(f.example);
    if (c.example == 2) {
      c.scheme = rksv::SubdivisionRule::RSV_adaptive;
      c.cfl = 1e-3;
    }
  }
  // Explicit flags override the example defaults and the config file.
  if (cmd->count("--scheme")) c.scheme = rksv::parse_rule(f.scheme);
  if (cmd->count("--k")) c.k = f.k;
  if (cmd->count("--s")) c.s = f.s;
  if (cmd->count("--n")) c.mesh_sizes = f.n;
  if (cmd->count("--cfl")) c.cfl = f.cfl;
  if (f.cfl_exp) c.cfl_exponent = f.cfl_exp;
  if (f.t_final) c.final_time = f.t_final;
  if (cmd->count("--seed")) c.seed = f.seed;
  rksv::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runge-Kutta spectral volume schemes for 1D linear hyperbolic problems"};
  app.require_subcommand(1);

  int s_single = 0;
  int s_max = 12;
  bool show_matrices = false;
  std::string analyze_format = "md";
  auto* analyze = app.add_subcommand("analyze", "key factors of RKSV(s,k) from the matrix transfers");
  analyze->add_option("--s", s_single, "a single stage count");
  analyze->add_option("--s-max", s_max, "tabulate s = 1..S");
  analyze->add_flag("--show-matrices", show_matrices, "print every transferred matrix");
  analyze->add_option("--format", analyze_format, "md, csv or tex")->check(CLI::IsMember({"md", "csv", "tex"}));

  RunFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "one run with error norms");
  add_run_flags(solve, solve_flags, false);

  RunFlags conv_flags;
  auto* converge = app.add_subcommand("converge", "convergence study over doubling meshes");
  add_run_flags(converge, conv_flags, true);

  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("check", "randomized identity suite");
  check->add_option("--seed", check_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analyze) {
      const auto format = rksv::parse_format(analyze_format);
      std::vector<rksv::TransferReport> reports;
      if (s_single > 0) {
        reports.push_back(rksv::stability_transfer(s_single));
      } else {
        reports = rksv::key_factor_table(s_max);
      }
      rksv::write_key_factor_table(std::cout, reports, format);
      if (show_matrices) {
        for (const auto& r : reports) {
          std::cout << "\n## s = " << r.s << " stability transfer\n";
          rksv::write_matrix_trace(std::cout, r, format);
          std::cout << "\n## s = " << r.s << " error transfer\n";
          rksv::write_matrix_trace(std::cout, rksv::error_transfer(r.s), format);
        }
      }
      return 0;
    }
    if (*solve) {
      const auto c = to_config(solve_flags, solve);
      if (c.mesh_sizes.size() != 1) throw std::invalid_argument("solve takes a single --n");
      const auto r = rksv::run_solve(c, c.mesh_sizes.front());
      std::printf("N=%d k=%d s=%d scheme=%s tau=%.6e steps=%ld\nL2=%.6e Linf=%.6e wall=%.3fs\n", r.N, c.k, c.s,
                  std::string(rksv::to_string(c.scheme)).c_str(), r.tau, r.steps, r.l2, r.linf, r.wall_seconds);
      return std::isfinite(r.l2) ? 0 : kExitNumerical;
    }
    if (*converge) {
      const auto c = to_config(conv_flags, converge);
      const auto table = rksv::run_convergence(c);
      if (conv_flags.format == "csv") {
        rksv::write_convergence_csv(std::cout, table);
      } else {
        rksv::write_convergence_markdown(std::cout, table);
      }
      for (const auto& row : table) {
        if (!std::isfinite(row.l2)) return kExitNumerical;
      }
      return 0;
    }
    if (*check) {
      const auto report = rksv::run_checks(check_seed);
      rksv::write_check_report(std::cout, report);
      return report.all_passed() ? 0 : kExitCheck;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
