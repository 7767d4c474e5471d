#pragma once

// Petrov-Galerkin view of the SV scheme: the trial-to-test map, the bilinear
// form a_h, the starred inner product and the associated energy norm.

#include "rksv/sv_space.hpp"

#include <functional>
#include <vector>

namespace rksv {

/// Piecewise constant on control volumes: w*_{i,j}.
struct TestFunction {
  SpacePtr space;
  std::vector<double> values;

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(space->cvs_per_element()) + static_cast<std::size_t>(j)];
  }
};

/// w*_{i,0} = w^+_{i-1/2} + A_{i,0} w_x(x_{i,0}),  w*_{i,j} = w*_{i,j-1} + A_{i,j} w_x(x_{i,j}),
/// with A_{i,j} = (h_i / 2) A_j.
TestFunction map_to_test(const PiecewisePolynomial& w);

/// Left traces v^-_{i,j}, j = 0..k+1, element major with stride k+2. v^-_{i,0}
/// comes from the previous element (periodic wrap, or 0 at an inflow boundary).
std::vector<double> left_traces(const PiecewisePolynomial& v);

/// a_h(v, w*) = -sum_{i,j} w*_{i,j} (v^-_{i,j+1} - v^-_{i,j}).
double bilinear_ah(const PiecewisePolynomial& v, const PiecewisePolynomial& w);
double bilinear_ah(std::span<const double> traces, const TestFunction& w_star);

/// Contribution of element i to a_h(v, w*).
double element_ah(const PiecewisePolynomial& v, const TestFunction& w_star, int i);

/// sum_{i,j} w*_{i,j} times the integral of v over C_{i,j}.
double inner_star(const PiecewisePolynomial& v, const PiecewisePolynomial& w);
double inner_star(std::span<const double> cv_integrals, const TestFunction& w_star);

/// Integral of f over element i (20-point Gauss) minus sum_j A_{i,j} f(x_{i,j}).
double quadrature_residual(const std::function<double(double)>& f, int element, const SvSpace& space);

/// sqrt((w, w*)); throws if the radicand is below -1e-12.
double energy_norm(const PiecewisePolynomial& w);

/// Plain L2 inner product (v, w) over the domain.
double l2_inner(const PiecewisePolynomial& v, const PiecewisePolynomial& w);

/// Global primitive V(x) = integral of v from a to x.
class GlobalPrimitive {
 public:
  explicit GlobalPrimitive(const PiecewisePolynomial& v);
  double operator()(int element, double y) const;

 private:
  const PiecewisePolynomial* v_;
  std::vector<double> offsets_;
};

/// R(w_x V) summed over elements, V the global primitive of v.
double primitive_residual(const PiecewisePolynomial& v, const PiecewisePolynomial& w);

/// sum over interfaces of [v][w], [v] = v^+ - v^-; periodic wrap at the ends,
/// zero exterior state otherwise.
double jump_product_sum(const PiecewisePolynomial& v, const PiecewisePolynomial& w);

/// Degree-k interpolant of f at x_{i,1}..x_{i,k+1} in every element.
PiecewisePolynomial interpolate_right_points(const SpacePtr& space, const std::function<double(double)>& f);

/// Random coefficients uniform in (-1, 1).
PiecewisePolynomial random_function(const SpacePtr& space, SplitMix64& rng);

}  // namespace rksv
