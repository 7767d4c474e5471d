#include "rksv/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rksv {

namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr double kNewtonTolerance = 1e-15;
constexpr int kMaxGaussRulePoints = 20;

// Newton iteration on L_k from Chebyshev guesses. No range cap; the public
// entry points enforce their own limits.
std::vector<double> legendre_roots(int k) {
  std::vector<double> roots(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    double y = -std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * k));
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
      const double step = legendre_eval(k, y) / legendre_derivative(k, y);
      y -= step;
      if (std::abs(step) < kNewtonTolerance) break;
    }
    roots[static_cast<std::size_t>(i)] = y;
  }
  if (k % 2 == 1) roots[static_cast<std::size_t>(k / 2)] = 0.0;
  // Enforce exact symmetry about the origin.
  for (int i = 0; i < k / 2; ++i) {
    const double r = 0.5 * (roots[static_cast<std::size_t>(k - 1 - i)] - roots[static_cast<std::size_t>(i)]);
    roots[static_cast<std::size_t>(i)] = -r;
    roots[static_cast<std::size_t>(k - 1 - i)] = r;
  }
  return roots;
}

double gauss_weight(int k, double y) {
  const double dp = legendre_derivative(k, y);
  return 2.0 / ((1.0 - y * y) * dp * dp);
}

void check_strictly_increasing(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) {
      throw std::runtime_error(std::string(what) + ": node computation did not produce distinct ordered roots");
    }
  }
}

struct GaussTable {
  std::array<std::vector<double>, kMaxGaussRulePoints + 1> nodes;
  std::array<std::vector<double>, kMaxGaussRulePoints + 1> weights;

  GaussTable() {
    for (int n = 1; n <= kMaxGaussRulePoints; ++n) {
      auto& x = nodes[static_cast<std::size_t>(n)];
      auto& w = weights[static_cast<std::size_t>(n)];
      x = legendre_roots(n);
      w.resize(x.size());
      std::transform(x.begin(), x.end(), w.begin(), [n](double y) { return gauss_weight(n, y); });
    }
  }
};

const GaussTable& gauss_table() {
  static const GaussTable table;
  return table;
}

// Interpolatory weights on arbitrary distinct nodes, from the Legendre moment
// system sum_j w_j L_m(y_j) = 2 delta_{m0}, m = 0..n-1.
std::vector<double> moment_weights(std::span<const double> nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 2.0;
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index j = 0; j < n; ++j) V(m, j) = legendre_eval(static_cast<int>(m), nodes[static_cast<std::size_t>(j)]);
  }
  const Eigen::VectorXd w = V.partialPivLu().solve(rhs);
  return {w.data(), w.data() + n};
}

void verify_exactness(const InterpolatoryWeights& rule) {
  for (int m = 0; m <= rule.exactness_degree; ++m) {
    double q = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) q += rule.weights[j] * std::pow(rule.nodes[j], m);
    const double exact = (m % 2 == 0) ? 2.0 / (m + 1.0) : 0.0;
    if (std::abs(q - exact) > 1e-12) {
      throw std::runtime_error("interpolatory_weights: rule fails exactness check at degree " + std::to_string(m));
    }
  }
}

}  // namespace

std::string_view to_string(PointFamily family) {
  switch (family) {
    case PointFamily::gauss_legendre: return "gauss_legendre";
    case PointFamily::right_radau: return "right_radau";
    case PointFamily::left_radau: return "left_radau";
  }
  return "?";
}

std::string_view to_string(SubdivisionRule rule) {
  switch (rule) {
    case SubdivisionRule::LSV: return "LSV";
    case SubdivisionRule::RRSV: return "RRSV";
    case SubdivisionRule::RSV_adaptive: return "RSV";
  }
  return "?";
}

double legendre_eval(int m, double y) {
  if (m < 0) throw std::invalid_argument("legendre_eval: negative degree");
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = y;
  for (int n = 1; n < m; ++n) {
    const double next = ((2.0 * n + 1.0) * y * cur - n * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double legendre_derivative(int m, double y) {
  if (m < 0) throw std::invalid_argument("legendre_derivative: negative degree");
  if (m == 0) return 0.0;
  // L_m' = m L_{m-1} + y L_{m-1}' avoids the (y^2-1) singularity at the endpoints.
  double prev = 1.0;   // L_0
  double cur = y;      // L_1
  double dcur = 1.0;   // L_1'
  for (int n = 1; n < m; ++n) {
    const double next = ((2.0 * n + 1.0) * y * cur - n * prev) / (n + 1.0);
    const double dnext = (n + 1.0) * cur + y * dcur;
    prev = cur;
    cur = next;
    dcur = dnext;
  }
  return dcur;
}

NodeSet gauss_legendre_nodes(int k) {
  if (k < 1 || k > 12) throw std::invalid_argument("gauss_legendre_nodes: k must lie in 1..12");
  NodeSet set{PointFamily::gauss_legendre, k, legendre_roots(k)};
  check_strictly_increasing(set.nodes, "gauss_legendre_nodes");
  return set;
}

NodeSet right_radau_nodes(int m) {
  if (m < 1 || m > 13) throw std::invalid_argument("right_radau_nodes: m must lie in 1..13");
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(m));
  // Roots of P = L_m - L_{m-1} other than y = 1, by Newton on P/(y-1).
  for (int j = m - 1; j >= 1; --j) {
    double y = std::cos(2.0 * std::numbers::pi * j / (2.0 * m - 1.0));
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
      const double p = legendre_eval(m, y) - legendre_eval(m - 1, y);
      const double dp = legendre_derivative(m, y) - legendre_derivative(m - 1, y);
      const double step = p / (dp - p / (y - 1.0));
      y -= step;
      if (std::abs(step) < kNewtonTolerance) break;
    }
    nodes.push_back(y);
  }
  nodes.push_back(1.0);
  check_strictly_increasing(nodes, "right_radau_nodes");
  return {PointFamily::right_radau, m, std::move(nodes)};
}

NodeSet left_radau_nodes(int m) {
  NodeSet right = right_radau_nodes(m);
  std::vector<double> nodes(right.nodes.rbegin(), right.nodes.rend());
  for (double& y : nodes) y = -y;
  return {PointFamily::left_radau, m, std::move(nodes)};
}

std::vector<double> reference_points(PointFamily family, int k) {
  if (k < 1 || k > 12) throw std::invalid_argument("reference_points: k must lie in 1..12");
  std::vector<double> y{-1.0};
  switch (family) {
    case PointFamily::gauss_legendre: {
      const auto g = gauss_legendre_nodes(k);
      y.insert(y.end(), g.nodes.begin(), g.nodes.end());
      break;
    }
    case PointFamily::right_radau: {
      const auto r = right_radau_nodes(k + 1);
      y.insert(y.end(), r.nodes.begin(), r.nodes.end() - 1);
      break;
    }
    case PointFamily::left_radau: {
      const auto l = left_radau_nodes(k + 1);
      y.insert(y.end(), l.nodes.begin() + 1, l.nodes.end());
      break;
    }
  }
  y.push_back(1.0);
  return y;
}

InterpolatoryWeights interpolatory_weights(PointFamily family, int k) {
  InterpolatoryWeights rule;
  rule.nodes = reference_points(family, k);
  rule.weights.assign(rule.nodes.size(), 0.0);
  const std::span<const double> all(rule.nodes);
  switch (family) {
    case PointFamily::gauss_legendre: {
      for (int j = 1; j <= k; ++j) rule.weights[static_cast<std::size_t>(j)] = gauss_weight(k, rule.nodes[static_cast<std::size_t>(j)]);
      rule.exactness_degree = 2 * k - 1;
      break;
    }
    case PointFamily::right_radau: {
      const auto w = moment_weights(all.subspan(1));
      std::copy(w.begin(), w.end(), rule.weights.begin() + 1);
      rule.exactness_degree = 2 * k;
      break;
    }
    case PointFamily::left_radau: {
      const auto w = moment_weights(all.first(all.size() - 1));
      std::copy(w.begin(), w.end(), rule.weights.begin());
      rule.exactness_degree = 2 * k;
      break;
    }
  }
  verify_exactness(rule);
  return rule;
}

InterpolatoryWeights interpolatory_weights(SubdivisionRule rule, int k) {
  if (k < 1) throw std::invalid_argument("interpolatory_weights: k must be >= 1");
  switch (rule) {
    case SubdivisionRule::LSV: return interpolatory_weights(PointFamily::gauss_legendre, k);
    case SubdivisionRule::RRSV: return interpolatory_weights(PointFamily::right_radau, k);
    case SubdivisionRule::RSV_adaptive: break;
  }
  throw std::invalid_argument("interpolatory_weights: the adaptive rule has no single weight set");
}

GaussRule gauss_rule(int points) {
  if (points < 1 || points > kMaxGaussRulePoints) throw std::invalid_argument("gauss_rule: points must lie in 1..20");
  const auto& t = gauss_table();
  return {t.nodes[static_cast<std::size_t>(points)], t.weights[static_cast<std::size_t>(points)]};
}

double gauss_quad(const std::function<double(double)>& f, double a, double b, int points) {
  if (!(a < b)) throw std::invalid_argument("gauss_quad: requires a < b");
  const auto rule = gauss_rule(points);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) sum += rule.weights[q] * f(mid + half * rule.nodes[q]);
  return half * sum;
}

}  // namespace rksv
