#pragma once

// Linear SSP Runge-Kutta methods of arbitrary stage count in Shu-Osher form.

#include "rksv/sv_space.hpp"

#include <gmpxx.h>

#include <functional>
#include <vector>

namespace rksv {

/// Shu-Osher coefficients of the s-stage, order-s linear SSP method.
///   u^{l+1} = u^l + tau F(u^l),                       l = 0..s-2
///   u^{n+1} = sum_k g_{s-1,k} u^k + tau g_{s-1,s-1} F(u^{s-1})
struct RkTableau {
  int s = 0;
  /// g[l][k] for 0 <= k <= l < s; row l holds the final-row weights of the l+1 stage method.
  std::vector<std::vector<mpq_class>> g;
  /// s x s Shu-Osher matrices {c_lk}, {d_lk}.
  std::vector<std::vector<mpq_class>> c_matrix;
  std::vector<std::vector<mpq_class>> d_matrix;

  /// Time-dependent sources: g is sampled at t + theta_m tau, m = 0..s-1, and
  /// Euler stage l uses sum_m source_weights[l][m] g(t + theta_m tau). The
  /// weights reproduce sum_j binom(l, j) tau^j d^j g/dt^j of the degree s-1
  /// interpolant, which keeps the step order s for forced problems.
  std::vector<mpq_class> source_nodes;
  std::vector<std::vector<mpq_class>> source_weights;

  /// Final-row weights g_{s-1,0..s-1} in double precision.
  std::vector<double> final_weights() const;
};

/// Exact tableau for 1 <= s <= 12.
RkTableau ssp_tableau(int s);

/// One step of length tau.
SvState rk_step(const SvState& state, const Problem& problem, const RkTableau& tableau, double tau);

using StepObserver = std::function<void(const SvState&)>;

/// Steps of length tau until t_final, the last one shortened to land on t_final.
/// The observer, if given, sees the state after every step.
SvState integrate(SvState state, const Problem& problem, const RkTableau& tableau, double tau, double t_final,
                  const StepObserver& observer = {});

/// Number of steps integrate() takes from t0 to t_final.
long step_count(double t0, double t_final, double tau);

}  // namespace rksv
