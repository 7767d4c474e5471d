#pragma once

// Experiment driver: manufactured problems, single solves, convergence
// studies and the randomized identity suite.

#include "rksv/matrix_transfer.hpp"
#include "rksv/petrov_galerkin.hpp"
#include "rksv/ssp_rk.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rksv {

enum class MeshKind { uniform, perturbed };

/// u(x, t) = f(x - t) for a registered profile f, with the source that makes it
/// an exact solution of u_t + (alpha u)_x = g for a registered alpha.
struct ManufacturedSpec {
  std::string coefficient = "one";  // one | sin | cos
  std::string profile = "sin";      // sin | cos | exp_sin
  double a = 0.0;
  double b = 6.283185307179586;
  BoundaryCondition bc = BoundaryCondition::periodic;
  MeshKind mesh = MeshKind::uniform;
};

Problem manufactured_problem(const ManufacturedSpec& spec, double final_time);
std::vector<std::string> registered_coefficients();
std::vector<std::string> registered_profiles();

struct ExperimentConfig {
  int example = 1;  // 1, 2, or 0 for a custom problem
  SubdivisionRule scheme = SubdivisionRule::RRSV;
  int k = 1;
  int s = 3;
  std::vector<int> mesh_sizes{16};
  double cfl = 0.1;
  std::optional<double> cfl_exponent;  // default: the stability-transfer exponent for s, at least (k+1)/s for example 1
  std::optional<double> final_time;    // default 1 for example 1, 0.1 for example 2
  std::uint64_t seed = 1;
  ManufacturedSpec custom;
};

/// Checks ranges and example/scheme compatibility; throws std::invalid_argument.
void validate(const ExperimentConfig& config);

/// Reads a custom experiment from a YAML file.
ExperimentConfig load_config(const std::string& path);

double resolved_final_time(const ExperimentConfig& config);
double resolved_cfl_exponent(const ExperimentConfig& config);
ManufacturedSpec resolved_problem_spec(const ExperimentConfig& config);

/// Mesh and problem of one run.
struct Setup {
  SpacePtr space;
  Problem problem;
  double tau = 0.0;
};

Setup build_setup(const ExperimentConfig& config, int N);

/// Solver failure annotated with the run parameters.
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveResult {
  int N = 0;
  double l2 = 0.0;
  double linf = 0.0;
  long steps = 0;
  double tau = 0.0;
  double wall_seconds = 0.0;
};

SolveResult run_solve(const ExperimentConfig& config, int N);

/// Energy norms |||u^n||| for n = 0..M.
std::vector<double> energy_history(const ExperimentConfig& config, int N);

struct ConvergenceRow {
  int k = 0;
  int N = 0;
  double l2 = 0.0;
  double linf = 0.0;
  std::optional<double> order_l2;
  std::optional<double> order_linf;
};

using ConvergenceTable = std::vector<ConvergenceRow>;

/// Solves on every mesh size (each double the last, at least three); a row
/// whose solve diverges (L2 > 1e3 or not finite) gets NaN errors.
ConvergenceTable run_convergence(const ExperimentConfig& config);

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table);
void write_convergence_markdown(std::ostream& os, const ConvergenceTable& table);

struct CheckResult {
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct CheckReport {
  std::vector<CheckResult> results;
  bool all_passed() const;
};

/// Randomized identity suite; deterministic for a given seed.
CheckReport run_checks(std::uint64_t seed, int trials = 100);

void write_check_report(std::ostream& os, const CheckReport& report);

SubdivisionRule parse_rule(const std::string& name);
TableFormat parse_format(const std::string& name);

}  // namespace rksv
