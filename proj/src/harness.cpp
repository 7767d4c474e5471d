#include "rksv/harness.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace rksv {

namespace {

constexpr double kDivergenceThreshold = 1e3;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ScalarPair {
  std::function<double(double)> f;
  std::function<double(double)> df;
};

std::optional<ScalarPair> find_coefficient(const std::string& name) {
  if (name == "one") return ScalarPair{[](double) { return 1.0; }, [](double) { return 0.0; }};
  if (name == "sin") return ScalarPair{[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }};
  if (name == "cos") return ScalarPair{[](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }};
  return std::nullopt;
}

std::optional<ScalarPair> find_profile(const std::string& name) {
  if (name == "sin") return ScalarPair{[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }};
  if (name == "cos") return ScalarPair{[](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }};
  if (name == "exp_sin") {
    return ScalarPair{[](double x) { return std::exp(std::sin(x)); },
                      [](double x) { return std::cos(x) * std::exp(std::sin(x)); }};
  }
  return std::nullopt;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string describe(const ExperimentConfig& c, int N) {
  std::ostringstream os;
  os << "example=" << c.example << " scheme=" << to_string(c.scheme) << " k=" << c.k << " s=" << c.s << " N=" << N;
  return os.str();
}

double relative_defect(double lhs, double rhs, double scale) {
  return std::abs(lhs - rhs) / std::max(scale, std::numeric_limits<double>::min());
}

}  // namespace

// Problems -------------------------------------------------------------------

std::vector<std::string> registered_coefficients() { return {"one", "sin", "cos"}; }
std::vector<std::string> registered_profiles() { return {"sin", "cos", "exp_sin"}; }

Problem manufactured_problem(const ManufacturedSpec& spec, double final_time) {
  const auto alpha = find_coefficient(spec.coefficient);
  if (!alpha) throw std::invalid_argument("unknown coefficient '" + spec.coefficient + "'");
  const auto prof = find_profile(spec.profile);
  if (!prof) throw std::invalid_argument("unknown profile '" + spec.profile + "'");

  Problem p;
  p.alpha = alpha->f;
  p.final_time = final_time;
  p.initial = prof->f;
  p.exact = [f = prof->f](double x, double t) { return f(x - t); };
  if (spec.coefficient != "one") {
    // g = u_t + (alpha u)_x with u = f(x - t).
    p.source = [a = *alpha, u = *prof](double x, double t) {
      const double xi = x - t;
      const double f = u.f(xi);
      const double df = u.df(xi);
      return -df + a.df(x) * f + a.f(x) * df;
    };
  }
  return p;
}

// Configuration --------------------------------------------------------------

SubdivisionRule parse_rule(const std::string& name) {
  const std::string n = lower(name);
  if (n == "lsv") return SubdivisionRule::LSV;
  if (n == "rrsv") return SubdivisionRule::RRSV;
  if (n == "rsv" || n == "rsv_adaptive") return SubdivisionRule::RSV_adaptive;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected lsv, rrsv or rsv)");
}

TableFormat parse_format(const std::string& name) {
  const std::string n = lower(name);
  if (n == "md") return TableFormat::md;
  if (n == "csv") return TableFormat::csv;
  if (n == "tex") return TableFormat::tex;
  throw std::invalid_argument("unknown format '" + name + "' (expected md, csv or tex)");
}

void validate(const ExperimentConfig& c) {
  if (c.example < 0 || c.example > 2) throw std::invalid_argument("example must be 1, 2 or custom");
  if (c.k < 1 || c.k > 12) throw std::invalid_argument("k must lie in 1..12");
  if (c.s < 1 || c.s > 12) throw std::invalid_argument("s must lie in 1..12");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw std::invalid_argument("cfl constant must lie in (0, 1]");
  if (c.cfl_exponent && !(*c.cfl_exponent > 0.0)) throw std::invalid_argument("cfl exponent must be positive");
  if (c.final_time && !(*c.final_time >= 0.0)) throw std::invalid_argument("final time must be nonnegative");
  if (c.mesh_sizes.empty()) throw std::invalid_argument("no mesh sizes given");
  for (int n : c.mesh_sizes) {
    if (n < 4) throw std::invalid_argument("mesh sizes must be >= 4");
  }
  if (c.example == 2 && c.scheme == SubdivisionRule::RRSV) {
    throw std::invalid_argument("example 2 runs with the rsv or lsv scheme");
  }
  if (c.example == 0) {
    if (!find_coefficient(c.custom.coefficient)) throw std::invalid_argument("unknown coefficient '" + c.custom.coefficient + "'");
    if (!find_profile(c.custom.profile)) throw std::invalid_argument("unknown profile '" + c.custom.profile + "'");
    if (!(c.custom.a < c.custom.b)) throw std::invalid_argument("domain must satisfy a < b");
    if (c.custom.mesh == MeshKind::perturbed && (c.custom.a != 0.0 || c.custom.b != kTwoPi)) {
      throw std::invalid_argument("perturbed meshes live on [0, 2*pi]");
    }
  }
}

ExperimentConfig load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument("cannot read config '" + path + "': " + e.what());
  }
  ExperimentConfig c;
  c.example = 0;
  try {
    if (const auto p = root["problem"]) {
      if (p["coefficient"]) c.custom.coefficient = p["coefficient"].as<std::string>();
      if (p["profile"]) c.custom.profile = p["profile"].as<std::string>();
      if (p["domain"]) {
        const auto d = p["domain"].as<std::vector<double>>();
        if (d.size() != 2) throw std::invalid_argument("problem.domain must have two entries");
        c.custom.a = d[0];
        c.custom.b = d[1];
      }
      if (p["boundary"]) {
        const auto bc = lower(p["boundary"].as<std::string>());
        if (bc == "periodic") {
          c.custom.bc = BoundaryCondition::periodic;
        } else if (bc == "inflow_zero" || bc == "inflow") {
          c.custom.bc = BoundaryCondition::inflow_zero;
        } else {
          throw std::invalid_argument("problem.boundary must be periodic or inflow_zero");
        }
      }
      if (p["mesh"]) {
        const auto m = lower(p["mesh"].as<std::string>());
        if (m == "uniform") {
          c.custom.mesh = MeshKind::uniform;
        } else if (m == "perturbed") {
          c.custom.mesh = MeshKind::perturbed;
        } else {
          throw std::invalid_argument("problem.mesh must be uniform or perturbed");
        }
      }
      if (p["final_time"]) c.final_time = p["final_time"].as<double>();
    }
    if (const auto s = root["scheme"]) {
      if (s["rule"]) c.scheme = parse_rule(s["rule"].as<std::string>());
      if (s["k"]) c.k = s["k"].as<int>();
      if (s["s"]) c.s = s["s"].as<int>();
    }
    if (const auto f = root["cfl"]) {
      if (f["constant"]) c.cfl = f["constant"].as<double>();
      if (f["exponent"]) c.cfl_exponent = f["exponent"].as<double>();
    }
    if (root["mesh_sizes"]) c.mesh_sizes = root["mesh_sizes"].as<std::vector<int>>();
    if (root["seed"]) c.seed = root["seed"].as<std::uint64_t>();
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument("bad value in config '" + path + "': " + e.what());
  }
  validate(c);
  return c;
}

double resolved_final_time(const ExperimentConfig& c) {
  if (c.final_time) return *c.final_time;
  return c.example == 2 ? 0.1 : 1.0;
}

double resolved_cfl_exponent(const ExperimentConfig& c) {
  if (c.cfl_exponent) return *c.cfl_exponent;
  if (c.example == 2) return 1.0;
  const double stable = stability_transfer(c.s).cfl_error_exponent.get_d();
  if (c.example == 1) {
    // tau^s must not exceed h^{k+1}, otherwise RK3 with k = 3 shows the temporal order.
    return std::max(stable, static_cast<double>(c.k + 1) / c.s);
  }
  return stable;
}

ManufacturedSpec resolved_problem_spec(const ExperimentConfig& c) {
  switch (c.example) {
    case 1: return ManufacturedSpec{};
    case 2: {
      ManufacturedSpec m;
      m.coefficient = "sin";
      m.profile = "exp_sin";
      m.mesh = MeshKind::perturbed;
      return m;
    }
    default: return c.custom;
  }
}

// Runs -----------------------------------------------------------------------

Setup build_setup(const ExperimentConfig& c, int N) {
  validate(c);
  const ManufacturedSpec spec = resolved_problem_spec(c);
  Setup setup;
  setup.problem = manufactured_problem(spec, resolved_final_time(c));
  Mesh1D mesh = spec.mesh == MeshKind::perturbed
                    ? perturbed_mesh(N, c.seed, c.scheme, c.k, spec.bc, setup.problem.alpha)
                    : uniform_mesh(spec.a, spec.b, N, c.scheme, c.k, spec.bc, setup.problem.alpha);
  setup.tau = c.cfl * std::pow(mesh.h_min(), resolved_cfl_exponent(c));
  setup.space = make_space(std::move(mesh));
  return setup;
}

SolveResult run_solve(const ExperimentConfig& c, int N) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult r;
  r.N = N;
  try {
    const Setup setup = build_setup(c, N);
    r.tau = setup.tau;
    const RkTableau tableau = ssp_tableau(c.s);
    SvState u = project_initial(setup.problem, setup.space);
    r.steps = step_count(u.t, setup.problem.final_time, setup.tau);
    u = integrate(std::move(u), setup.problem, tableau, setup.tau, setup.problem.final_time);
    const ErrorNorms e = error_norms(u, setup.problem, u.t);
    r.l2 = e.l2;
    r.linf = e.linf;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw SolveError(describe(c, N) + ": " + e.what());
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<double> energy_history(const ExperimentConfig& c, int N) {
  const Setup setup = build_setup(c, N);
  const RkTableau tableau = ssp_tableau(c.s);
  SvState u = project_initial(setup.problem, setup.space);
  std::vector<double> history{energy_norm(reconstruct(u))};
  integrate(std::move(u), setup.problem, tableau, setup.tau, setup.problem.final_time,
            [&](const SvState& state) { history.push_back(energy_norm(reconstruct(state))); });
  return history;
}

ConvergenceTable run_convergence(const ExperimentConfig& c) {
  validate(c);
  if (c.mesh_sizes.size() < 3) throw std::invalid_argument("a convergence study needs at least three mesh sizes");
  for (std::size_t q = 1; q < c.mesh_sizes.size(); ++q) {
    if (c.mesh_sizes[q] != 2 * c.mesh_sizes[q - 1]) throw std::invalid_argument("each mesh size must double the previous one");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ConvergenceTable table;
  for (std::size_t q = 0; q < c.mesh_sizes.size(); ++q) {
    ConvergenceRow row;
    row.k = c.k;
    row.N = c.mesh_sizes[q];
    try {
      const SolveResult r = run_solve(c, row.N);
      row.l2 = r.l2;
      row.linf = r.linf;
    } catch (const SolveError&) {
      row.l2 = nan;
      row.linf = nan;
    }
    if (!std::isfinite(row.l2) || row.l2 > kDivergenceThreshold) {
      row.l2 = nan;
      row.linf = nan;
    }
    if (q > 0) {
      const auto& prev = table.back();
      row.order_l2 = std::log2(prev.l2 / row.l2);
      row.order_linf = std::log2(prev.linf / row.linf);
    }
    table.push_back(row);
  }
  return table;
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table) {
  os << "k,N,L2,order_L2,Linf,order_Linf\n";
  char buf[160];
  for (const auto& r : table) {
    auto order = [](const std::optional<double>& o) {
      if (!o) return std::string();
      char b[32];
      std::snprintf(b, sizeof b, "%.2f", *o);
      return std::string(b);
    };
    std::snprintf(buf, sizeof buf, "%d,%d,%.2e,%s,%.2e,%s\n", r.k, r.N, r.l2, order(r.order_l2).c_str(), r.linf,
                  order(r.order_linf).c_str());
    os << buf;
  }
}

void write_convergence_markdown(std::ostream& os, const ConvergenceTable& table) {
  os << "| k | N | L2 error | order | Linf error | order |\n";
  os << "|---|---|---|---|---|---|\n";
  char buf[160];
  for (const auto& r : table) {
    auto order = [](const std::optional<double>& o) {
      if (!o) return std::string("-");
      char b[32];
      std::snprintf(b, sizeof b, "%.2f", *o);
      return std::string(b);
    };
    std::snprintf(buf, sizeof buf, "| %d | %d | %.2e | %s | %.2e | %s |\n", r.k, r.N, r.l2, order(r.order_l2).c_str(),
                  r.linf, order(r.order_linf).c_str());
    os << buf;
  }
}

// Identity suite -------------------------------------------------------------

bool CheckReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

namespace {

int uniform_int(SplitMix64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Random partition of [0, 2 pi] with element widths varying by up to 3x.
SpacePtr random_space(SplitMix64& rng, int max_n, int max_k, bool allow_inflow) {
  const int n = uniform_int(rng, 4, max_n);
  const int k = uniform_int(rng, 1, max_k);
  const SubdivisionRule rule = rng.next() % 2 ? SubdivisionRule::LSV : SubdivisionRule::RRSV;
  const BoundaryCondition bc =
      allow_inflow && rng.next() % 2 ? BoundaryCondition::inflow_zero : BoundaryCondition::periodic;
  std::vector<double> widths(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& w : widths) {
    w = 0.5 + rng.uniform_open();
    total += w;
  }
  std::vector<double> x(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i) + 1] = x[static_cast<std::size_t>(i)] + widths[static_cast<std::size_t>(i)] * kTwoPi / total;
  x.back() = kTwoPi;
  return make_space(Mesh1D(std::move(x), rule, k, bc));
}

class Tracker {
 public:
  Tracker(std::string name, double tolerance) : r_{std::move(name), 0.0, tolerance, true} {}
  void record(double defect) {
    if (!(defect <= r_.tolerance)) r_.passed = false;
    if (std::isnan(defect) || defect > r_.defect) r_.defect = defect;
  }
  CheckResult result() const { return r_; }

 private:
  CheckResult r_;
};

}  // namespace

CheckReport run_checks(std::uint64_t seed, int trials) {
  SplitMix64 rng(seed);
  CheckReport report;

  Tracker jump("jump identity a_h(v,w*) + a_h(w,v*) = -sum [v][w]", 1e-11);
  Tracker dissipation("a_h(v,v*) <= 0", 1e-12);
  Tracker symmetry("symmetry (v,w*) = (w,v*)", 1e-11);
  Tracker decomposition("(v,w*) = (v,w) + R(w_x V)", 1e-11);
  Tracker annihilation("a_h(eta,w*) = 0 for the right-point interpolant", 1e-12);
  Tracker equivalence("(tau L v, w*) = tau a_h(v,w*)", 1e-11);
  Tracker element("per-element a_h identity", 1e-11);
  Tracker exactness("interpolatory rule exactness (2k-1 LSV, 2k RRSV)", 1e-13);
  Tracker endpoint("test map endpoint identity", 1e-12);

  Problem advection;
  for (int trial = 0; trial < trials; ++trial) {
    const SpacePtr space = random_space(rng, 32, 4, false);
    const auto v = random_function(space, rng);
    const auto w = random_function(space, rng);

    const double avw = bilinear_ah(v, w);
    const double awv = bilinear_ah(w, v);
    const double jumps = jump_product_sum(v, w);
    jump.record(relative_defect(avw + awv, -jumps, std::max({std::abs(avw), std::abs(awv), std::abs(jumps)})));
    dissipation.record(std::max(0.0, bilinear_ah(v, v)));

    const double vw = inner_star(v, w);
    const double wv = inner_star(w, v);
    symmetry.record(relative_defect(vw, wv, std::max(std::abs(vw), std::abs(wv))));
    const double l2 = l2_inner(v, w);
    const double res = primitive_residual(v, w);
    decomposition.record(relative_defect(vw, l2 + res, std::max({std::abs(vw), std::abs(l2), std::abs(res)})));

    // a_h(eta, w*) from the left traces of eta = P_h u - u.
    const double c1 = 2.0 * rng.uniform_open() - 1.0;
    const double c2 = 2.0 * rng.uniform_open() - 1.0;
    const auto u = [c1, c2](double x) { return c1 * std::sin(x) + c2 * std::cos(3.0 * x) + 0.5; };
    const auto ph = interpolate_right_points(space, u);
    auto traces = left_traces(ph);
    const auto& mesh = space->mesh();
    const auto stride = static_cast<std::size_t>(space->degree() + 2);
    for (int i = 0; i < mesh.num_elements(); ++i) {
      const auto xc = mesh.cv_boundaries(i);
      for (std::size_t j = 0; j < stride; ++j) traces[static_cast<std::size_t>(i) * stride + j] -= u(xc[j]);
    }
    annihilation.record(std::abs(bilinear_ah(traces, map_to_test(w))));

    const TestFunction ws = map_to_test(w);
    const int i = uniform_int(rng, 0, mesh.num_elements() - 1);
    const double lhs = element_ah(v, ws, i);
    const auto rule = gauss_rule(space->degree() + 2);
    double vwx = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      vwx += rule.weights[q] * v.value(i, rule.nodes[q]) * w.slope(i, rule.nodes[q]);
    }
    const double v_prev = i == 0 ? v.right_trace(mesh.num_elements() - 1) : v.right_trace(i - 1);
    const double rhs = vwx - v.right_trace(i) * w.right_trace(i) + v_prev * w.left_trace(i);
    element.record(relative_defect(lhs, rhs, std::max({std::abs(lhs), std::abs(vwx), std::abs(v.right_trace(i) * w.right_trace(i)),
                                                       std::abs(v_prev * w.left_trace(i))})));

    const double wk = ws.at(i, space->degree());
    const double wk_expected = w.right_trace(i) - space->reference(i).weights.weights.back() * w.slope(i, 1.0);
    endpoint.record(relative_defect(wk, wk_expected, std::max(std::abs(wk), 1.0)));

    const int k = space->degree();
    const int degree = space->mesh().rule() == SubdivisionRule::LSV ? 2 * k - 1 : 2 * k;
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
    for (double& cf : coeffs) cf = 2.0 * rng.uniform_open() - 1.0;
    const double r_i = quadrature_residual(
        [&](double x) {
          const double y = mesh.to_reference(i, x);
          double f = 0.0;
          for (std::size_t m = 0; m < coeffs.size(); ++m) f += coeffs[m] * legendre_eval(static_cast<int>(m), y);
          return f;
        },
        i, *space);
    exactness.record(std::abs(r_i));
  }

  for (int trial = 0; trial < trials; ++trial) {
    const SpacePtr space = random_space(rng, 32, 4, true);
    const auto v = random_function(space, rng);
    const auto w = random_function(space, rng);
    const double tau = 0.1 * space->mesh().h_min() * rng.uniform_open();
    const SvState iv = v.cv_integrals();
    std::vector<double> F = apply_L(iv, advection, 0.0);
    for (double& f : F) f *= tau;
    const double lhs = inner_star(F, map_to_test(w));
    const double rhs = tau * bilinear_ah(v, w);
    equivalence.record(relative_defect(lhs, rhs, std::max(std::abs(lhs), std::abs(rhs))));
  }

  for (const Tracker* t : {&jump, &dissipation, &symmetry, &decomposition, &annihilation, &equivalence, &element,
                           &exactness, &endpoint}) {
    report.results.push_back(t->result());
  }

  Tracker cross("stability and error transfers agree on (zeta, rho, c)", 0.0);
  for (int s = 1; s <= 12; ++s) {
    const auto a = stability_transfer(s);
    const auto e = error_transfer(s);
    cross.record(a.zeta == e.zeta && a.rho == e.rho && a.c_diag == e.c_diag ? 0.0 : 1.0);
  }
  report.results.push_back(cross.result());

  Tracker tableau("SSP final-row weights sum to 1 with g_ss = 1/s!", 0.0);
  for (int s = 1; s <= 12; ++s) {
    const auto t = ssp_tableau(s);
    mpq_class sum = 0;
    for (const auto& g : t.g.back()) sum += g;
    mpz_class fact = 1;
    for (int q = 2; q <= s; ++q) fact *= q;
    tableau.record(sum == 1 && t.g.back().back() * fact == 1 ? 0.0 : 1.0);
  }
  report.results.push_back(tableau.result());

  {
    ExperimentConfig c;
    c.scheme = SubdivisionRule::LSV;
    c.k = 2;
    c.s = 3;
    c.cfl = 0.05;
    c.cfl_exponent = 1.0;
    const auto h = energy_history(c, 32);
    Tracker mono("energy monotone for RKSV(3,2), N=32, cfl 0.05", 1e-12);
    for (std::size_t n = 1; n < h.size(); ++n) mono.record(std::max(0.0, h[n] - h[n - 1]));
    report.results.push_back(mono.result());
  }
  {
    ExperimentConfig c;
    c.scheme = SubdivisionRule::RRSV;
    c.k = 1;
    c.s = 1;
    c.cfl = 0.1;
    c.cfl_exponent = 2.0;
    const auto h = energy_history(c, 32);
    Tracker bounded("energy growth of RKSV(1,1) with tau = 0.1 h^2 stays within 1%", 0.01);
    double worst = 0.0;
    for (double e : h) worst = std::max(worst, e / h.front() - 1.0);
    bounded.record(worst);
    report.results.push_back(bounded.result());
  }
  return report;
}

void write_check_report(std::ostream& os, const CheckReport& report) {
  char buf[64];
  for (const auto& r : report.results) {
    std::snprintf(buf, sizeof buf, "defect=%.3e tol=%.1e", r.defect, r.tolerance);
    os << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << buf << '\n';
  }
  os << (report.all_passed() ? "all checks passed" : "some checks failed") << '\n';
}

}  // namespace rksv
