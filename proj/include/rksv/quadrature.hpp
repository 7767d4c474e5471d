#pragma once

// Node sets, interpolatory weights and Legendre/Gauss primitives on the
// reference interval [-1, 1].

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace rksv {

/// Which family of points subdivides a spectral volume.
enum class PointFamily { gauss_legendre, right_radau, left_radau };

std::string_view to_string(PointFamily family);

/// Subdivision variant of a spectral-volume scheme.
enum class SubdivisionRule { LSV, RRSV, RSV_adaptive };

std::string_view to_string(SubdivisionRule rule);

struct NodeSet {
  PointFamily kind;
  int count = 0;
  std::vector<double> nodes;  // strictly increasing, inside [-1, 1]
};

/// Quadrature Q(f) = sum_j A_j f(y_j) over the k+2 subdivision points
/// y_0 = -1 < y_1 < ... < y_{k+1} = 1.
struct InterpolatoryWeights {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exactness_degree = 0;
};

/// Legendre polynomial L_m(y) by the three-term recurrence.
double legendre_eval(int m, double y);

/// Derivative L_m'(y).
double legendre_derivative(int m, double y);

/// The k roots of L_k, 1 <= k <= 12.
NodeSet gauss_legendre_nodes(int k);

/// The m roots of L_m - L_{m-1}; the last one is exactly +1. 1 <= m <= 13.
NodeSet right_radau_nodes(int m);

/// Mirror image of right_radau_nodes(m); the first node is exactly -1.
NodeSet left_radau_nodes(int m);

/// Subdivision points y_0..y_{k+1} of the reference element for a family.
std::vector<double> reference_points(PointFamily family, int k);

/// Weights of the interpolatory rule on reference_points(rule, k).
/// LSV: (0, Gauss weights, 0), exact to degree 2k-1.
/// RRSV: (0, right-Radau weights), exact to degree 2k.
InterpolatoryWeights interpolatory_weights(SubdivisionRule rule, int k);

/// Weights for an explicit point family (left_radau mirrors right_radau).
InterpolatoryWeights interpolatory_weights(PointFamily family, int k);

/// Gauss-Legendre nodes and weights on [-1, 1] for 1 <= points <= 20.
struct GaussRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};
GaussRule gauss_rule(int points);

/// Mapped Gauss-Legendre approximation of the integral of f over [a, b].
double gauss_quad(const std::function<double(double)>& f, double a, double b, int points);

}  // namespace rksv
