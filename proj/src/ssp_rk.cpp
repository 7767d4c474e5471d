#include "rksv/ssp_rk.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rksv {

std::vector<double> RkTableau::final_weights() const {
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(s));
  for (const auto& q : g.back()) w.push_back(q.get_d());
  return w;
}

RkTableau ssp_tableau(int s) {
  if (s < 1 || s > 12) throw std::invalid_argument("ssp_tableau: s must lie in 1..12, got " + std::to_string(s));
  RkTableau t;
  t.s = s;
  t.g.resize(static_cast<std::size_t>(s));
  t.g[0] = {mpq_class(1)};
  mpz_class factorial = 1;
  for (int r = 2; r <= s; ++r) {
    factorial *= r;
    const auto& prev = t.g[static_cast<std::size_t>(r) - 2];
    auto& row = t.g[static_cast<std::size_t>(r) - 1];
    row.assign(static_cast<std::size_t>(r), mpq_class(0));
    mpq_class sum = 0;
    for (int l = 1; l <= r - 2; ++l) {
      row[static_cast<std::size_t>(l)] = prev[static_cast<std::size_t>(l) - 1] / l;
      sum += row[static_cast<std::size_t>(l)];
    }
    row.back() = mpq_class(1) / mpq_class(factorial);
    sum += row.back();
    row[0] = 1 - sum;
  }
  for (const auto& q : t.g.back()) {
    if (sgn(q) <= 0) throw std::logic_error("ssp_tableau: nonpositive final-row weight");
  }

  const auto n = static_cast<std::size_t>(s);
  t.c_matrix.assign(n, std::vector<mpq_class>(n, mpq_class(0)));
  t.d_matrix.assign(n, std::vector<mpq_class>(n, mpq_class(0)));
  for (std::size_t l = 0; l + 1 < n; ++l) {
    t.c_matrix[l][l] = 1;
    t.d_matrix[l][l] = 1;
  }
  t.c_matrix[n - 1] = t.g.back();
  t.d_matrix[n - 1][n - 1] = t.g.back().back();

  t.source_nodes.resize(n);
  for (std::size_t m = 0; m < n; ++m) t.source_nodes[m] = s == 1 ? mpq_class(0) : mpq_class(static_cast<long>(m), s - 1);
  for (auto& q : t.source_nodes) q.canonicalize();
  // derivs[m][j] = j-th derivative at 0 of the Lagrange basis polynomial of node m.
  std::vector<std::vector<mpq_class>> derivs(n);
  for (std::size_t m = 0; m < n; ++m) {
    std::vector<mpq_class> poly{mpq_class(1)};
    for (std::size_t q = 0; q < n; ++q) {
      if (q == m) continue;
      const mpq_class scale = 1 / (t.source_nodes[m] - t.source_nodes[q]);
      std::vector<mpq_class> next(poly.size() + 1, mpq_class(0));
      for (std::size_t e = 0; e < poly.size(); ++e) {
        next[e + 1] += poly[e] * scale;
        next[e] -= poly[e] * t.source_nodes[q] * scale;
      }
      poly = std::move(next);
    }
    mpq_class fact = 1;
    derivs[m].resize(poly.size());
    for (std::size_t j = 0; j < poly.size(); ++j) {
      if (j > 0) fact *= static_cast<long>(j);
      derivs[m][j] = poly[j] * fact;
    }
  }
  t.source_weights.assign(n, std::vector<mpq_class>(n, mpq_class(0)));
  for (std::size_t l = 0; l < n; ++l) {
    mpz_class binom = 1;
    for (std::size_t j = 0; j <= l; ++j) {
      if (j > 0) binom = binom * static_cast<unsigned long>(l - j + 1) / static_cast<unsigned long>(j);
      for (std::size_t m = 0; m < n; ++m) t.source_weights[l][m] += mpq_class(binom) * derivs[m][j];
    }
  }
  return t;
}

namespace {

// u^{n+1} - u^n, carried in increment form: with delta^l = u^l - u^n and the
// final weights summing to one, u^{n+1} - u^n = sum_l w_l delta^l + tau w_{s-1} F(u^{s-1}).
std::vector<double> rk_increment(const SvState& state, const Problem& problem, const RkTableau& tableau, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("rk_step: tau must be positive");
  const std::vector<double> w = tableau.final_weights();
  const int s = tableau.s;
  const std::size_t n = state.values.size();
  const auto us = static_cast<std::size_t>(s);

  std::vector<std::vector<double>> samples;
  if (problem.source) {
    samples.reserve(us);
    for (std::size_t m = 0; m < us; ++m) {
      samples.push_back(source_integrals(*state.space, problem, state.t + tableau.source_nodes[m].get_d() * tau));
    }
  }

  std::vector<double> total(n, 0.0);
  std::vector<double> delta(n, 0.0);
  SvState stage = state;
  for (int l = 0; l < s; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    const double wl = w[ul];
    if (l > 0) {
      for (std::size_t q = 0; q < n; ++q) {
        total[q] += wl * delta[q];
        stage.values[q] = state.values[q] + delta[q];
      }
    }
    std::vector<double> F = apply_transport(stage, problem);
    for (std::size_t m = 0; m < samples.size(); ++m) {
      const double c = tableau.source_weights[ul][m].get_d();
      if (c == 0.0) continue;
      for (std::size_t q = 0; q < n; ++q) F[q] += c * samples[m][q];
    }
    if (l + 1 < s) {
      for (std::size_t q = 0; q < n; ++q) delta[q] += tau * F[q];
    } else {
      for (std::size_t q = 0; q < n; ++q) total[q] += tau * wl * F[q];
    }
  }
  return total;
}

}  // namespace

SvState rk_step(const SvState& state, const Problem& problem, const RkTableau& tableau, double tau) {
  const std::vector<double> inc = rk_increment(state, problem, tableau, tau);
  SvState out(state.space, state.t + tau);
  for (std::size_t q = 0; q < inc.size(); ++q) out.values[q] = state.values[q] + inc[q];
  return out;
}

long step_count(double t0, double t_final, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("step_count: tau must be positive");
  if (t_final <= t0) return 0;
  return static_cast<long>(std::ceil((t_final - t0) / tau - 1e-10));
}

SvState integrate(SvState state, const Problem& problem, const RkTableau& tableau, double tau, double t_final,
                  const StepObserver& observer) {
  if (!(tau > 0.0)) throw std::invalid_argument("integrate: tau must be positive");
  if (t_final < state.t) throw std::invalid_argument("integrate: final time precedes the state time");
  const double t0 = state.t;
  const long steps = step_count(t0, t_final, tau);
  // Kahan-compensated accumulation of the increments: over thousands of small
  // steps the rounding of u^n + increment otherwise dominates high-order errors.
  std::vector<double> carry(state.values.size(), 0.0);
  for (long m = 0; m < steps; ++m) {
    const double start = t0 + static_cast<double>(m) * tau;
    const bool last = m + 1 == steps;
    const double dt = last ? t_final - start : tau;
    const std::vector<double> inc = rk_increment(state, problem, tableau, dt);
    for (std::size_t q = 0; q < inc.size(); ++q) {
      const double y = inc[q] - carry[q];
      const double sum = state.values[q] + y;
      carry[q] = (sum - state.values[q]) - y;
      state.values[q] = sum;
    }
    state.t = last ? t_final : t0 + static_cast<double>(m + 1) * tau;
    if (observer) observer(state);
  }
  return state;
}

}  // namespace rksv
