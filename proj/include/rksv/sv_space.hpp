#pragma once

// Spatial operator of the semi-discrete spectral-volume scheme: reconstruction
// of the degree-k polynomial from control-volume integrals, upwind fluxes and
// the per-CV conservation residual.

#include "rksv/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace rksv {

using SpaceTimeFunction = std::function<double(double x, double t)>;

/// Linear scalar problem u_t + (alpha(x) u)_x = g(x, t).
struct Problem {
  Coefficient alpha = [](double) { return 1.0; };
  SpaceTimeFunction source;  // empty means g == 0
  std::function<double(double)> initial;
  SpaceTimeFunction exact;  // optional
  double final_time = 1.0;
};

/// M_{j,m} = integral of L_m over [y_j, y_{j+1}], j, m = 0..k.
/// Throws if the condition number exceeds 1e12.
Eigen::MatrixXd cv_mass_matrix(std::span<const double> reference_points, int k);
Eigen::MatrixXd cv_mass_matrix(SubdivisionRule rule, int k);

/// Per point-family data on the reference element [-1, 1].
struct ReferenceElement {
  PointFamily family;
  std::vector<double> points;      // y_0..y_{k+1}
  InterpolatoryWeights weights;    // A_0..A_{k+1}
  Eigen::MatrixXd mass;            // (k+1) x (k+1)
  Eigen::MatrixXd mass_inverse;
  Eigen::MatrixXd point_values;    // (k+2) x (k+1): L_m(y_j)
  Eigen::MatrixXd point_slopes;    // (k+2) x (k+1): L_m'(y_j)
};

/// A mesh together with the reference-element data of every point family it uses.
class SvSpace {
 public:
  explicit SvSpace(Mesh1D mesh);

  const Mesh1D& mesh() const { return mesh_; }
  int degree() const { return mesh_.degree(); }
  int num_elements() const { return mesh_.num_elements(); }
  int cvs_per_element() const { return mesh_.cvs_per_element(); }
  std::size_t size() const { return static_cast<std::size_t>(num_elements()) * static_cast<std::size_t>(cvs_per_element()); }

  const ReferenceElement& reference(int element) const;
  const ReferenceElement& reference(PointFamily family) const;

 private:
  Mesh1D mesh_;
  std::array<std::optional<ReferenceElement>, 3> references_;
};

using SpacePtr = std::shared_ptr<const SvSpace>;

SpacePtr make_space(Mesh1D mesh);

/// Control-volume integrals I_{i,j} of u_h, element major.
struct SvState {
  SpacePtr space;
  std::vector<double> values;
  double t = 0.0;

  SvState() = default;
  explicit SvState(SpacePtr s, double time = 0.0);

  double& at(int i, int j) { return values[index(i, j)]; }
  double at(int i, int j) const { return values[index(i, j)]; }
  double total_mass() const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(space->cvs_per_element()) + static_cast<std::size_t>(j);
  }
};

/// Piecewise polynomial in the Legendre basis of each element's reference
/// coordinate y in [-1, 1].
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  explicit PiecewisePolynomial(SpacePtr space);
  PiecewisePolynomial(SpacePtr space, std::vector<double> coefficients);

  const SpacePtr& space() const { return space_; }
  std::span<const double> coefficients(int i) const;
  std::span<double> coefficients(int i);
  std::span<const double> all_coefficients() const { return coeffs_; }

  double value(int i, double y) const;
  /// d/dy on the reference element; multiply by 2/h_i for d/dx.
  double slope(int i, double y) const;
  double derivative_x(int i, double y) const;
  /// Value at physical x; x on an element boundary belongs to the right element.
  double operator()(double x) const;
  double left_trace(int i) const { return value(i, -1.0); }
  double right_trace(int i) const { return value(i, 1.0); }

  /// Values at the element's reference points y_0..y_{k+1}.
  Eigen::VectorXd point_values(int i) const;

  /// Integral over [x_{i-1/2}, x] for x = x(y) in element i.
  double partial_integral(int i, double y) const;

  /// CV integrals of this function.
  SvState cv_integrals(double t = 0.0) const;

  PiecewisePolynomial& operator+=(const PiecewisePolynomial& other);
  PiecewisePolynomial& operator*=(double scale);

 private:
  SpacePtr space_;
  std::vector<double> coeffs_;  // N x (k+1)
};

using Reconstruction = PiecewisePolynomial;

/// Per element c = M^{-1} (2/h_i) I_i.
Reconstruction reconstruct(const SvState& state);

/// Tendency F_{i,j} = fhat(x_{i,j}) - fhat(x_{i,j+1}) + integral of g(., t) over C_{i,j},
/// with pointwise upwinding fhat = alpha u^- when alpha >= 0, alpha u^+ otherwise.
std::vector<double> apply_L(const SvState& state, const Problem& problem, double t);

/// apply_L without the source term.
std::vector<double> apply_transport(const SvState& state, const Problem& problem);

/// Integrals of g(., t) over every CV by (k+3)-point Gauss quadrature; zeros when g is absent.
std::vector<double> source_integrals(const SvSpace& space, const Problem& problem, double t);

/// I_{i,j} = integral of u_0 over C_{i,j} by (k+3)-point Gauss quadrature.
SvState project_initial(const Problem& problem, SpacePtr space);

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

/// L2 by (k+3)-point Gauss per CV; Linf over 20 equispaced samples per element
/// plus every CV face.
ErrorNorms error_norms(const SvState& state, const Problem& problem, double t);
ErrorNorms error_norms(const PiecewisePolynomial& uh, const SpaceTimeFunction& exact, double t);

/// Plain-text records "x u_h(x)", samples_per_element points per element.
void write_snapshot(std::ostream& os, const SvState& state, int samples_per_element);

}  // namespace rksv
