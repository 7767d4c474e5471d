#include "rksv/petrov_galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rksv {

namespace {

constexpr int kReferenceGaussPoints = 20;

double half_width(const SvSpace& space, int i) { return 0.5 * space.mesh().h(i); }

void require_same_space(const PiecewisePolynomial& v, const PiecewisePolynomial& w) {
  if (v.space() != w.space()) throw std::invalid_argument("petrov_galerkin: functions live on different spaces");
}

std::size_t flat(const SvSpace& space, int i, int j) {
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(space.cvs_per_element()) + static_cast<std::size_t>(j);
}

// Exterior traces at the two ends of the domain.
double outside_left(const PiecewisePolynomial& v) {
  const auto& space = *v.space();
  if (space.mesh().boundary_condition() == BoundaryCondition::periodic) return v.right_trace(space.num_elements() - 1);
  return 0.0;
}

double outside_right(const PiecewisePolynomial& v) {
  const auto& space = *v.space();
  if (space.mesh().boundary_condition() == BoundaryCondition::periodic) return v.left_trace(0);
  return 0.0;
}

}  // namespace

TestFunction map_to_test(const PiecewisePolynomial& w) {
  const auto& space = *w.space();
  const int k = space.degree();
  TestFunction t{w.space(), std::vector<double>(space.size())};
  for (int i = 0; i < space.num_elements(); ++i) {
    const auto& ref = space.reference(i);
    const auto& A = ref.weights.weights;
    // A_{i,j} w_x = (h/2) A_j (2/h) dw/dy = A_j dw/dy.
    double acc = w.left_trace(i) + A[0] * w.slope(i, ref.points[0]);
    t.values[flat(space, i, 0)] = acc;
    for (int j = 1; j <= k; ++j) {
      acc += A[static_cast<std::size_t>(j)] * w.slope(i, ref.points[static_cast<std::size_t>(j)]);
      t.values[flat(space, i, j)] = acc;
    }
  }
  return t;
}

std::vector<double> left_traces(const PiecewisePolynomial& v) {
  const auto& space = *v.space();
  const int n = space.num_elements();
  const int k = space.degree();
  const auto stride = static_cast<std::size_t>(k + 2);
  std::vector<double> tr(static_cast<std::size_t>(n) * stride);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd pv = v.point_values(i);
    auto* out = tr.data() + static_cast<std::size_t>(i) * stride;
    out[0] = i == 0 ? outside_left(v) : v.right_trace(i - 1);
    for (int j = 1; j <= k + 1; ++j) out[j] = pv(j);
  }
  return tr;
}

double bilinear_ah(std::span<const double> traces, const TestFunction& w_star) {
  const auto& space = *w_star.space;
  const int k = space.degree();
  const auto stride = static_cast<std::size_t>(k + 2);
  if (traces.size() != static_cast<std::size_t>(space.num_elements()) * stride) {
    throw std::invalid_argument("bilinear_ah: trace vector has the wrong size");
  }
  double sum = 0.0;
  for (int i = 0; i < space.num_elements(); ++i) {
    const double* t = traces.data() + static_cast<std::size_t>(i) * stride;
    for (int j = 0; j <= k; ++j) sum -= w_star.at(i, j) * (t[j + 1] - t[j]);
  }
  return sum;
}

double bilinear_ah(const PiecewisePolynomial& v, const PiecewisePolynomial& w) {
  require_same_space(v, w);
  return bilinear_ah(left_traces(v), map_to_test(w));
}

double element_ah(const PiecewisePolynomial& v, const TestFunction& w_star, int i) {
  const auto& space = *v.space();
  const int k = space.degree();
  const Eigen::VectorXd pv = v.point_values(i);
  double prev = i == 0 ? outside_left(v) : v.right_trace(i - 1);
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    sum -= w_star.at(i, j) * (pv(j + 1) - prev);
    prev = pv(j + 1);
  }
  return sum;
}

double inner_star(std::span<const double> cv_integrals, const TestFunction& w_star) {
  if (cv_integrals.size() != w_star.values.size()) throw std::invalid_argument("inner_star: size mismatch");
  double sum = 0.0;
  for (std::size_t q = 0; q < cv_integrals.size(); ++q) sum += w_star.values[q] * cv_integrals[q];
  return sum;
}

double inner_star(const PiecewisePolynomial& v, const PiecewisePolynomial& w) {
  require_same_space(v, w);
  return inner_star(v.cv_integrals().values, map_to_test(w));
}

double quadrature_residual(const std::function<double(double)>& f, int element, const SvSpace& space) {
  const auto& mesh = space.mesh();
  const double exact = gauss_quad(f, mesh.left(element), mesh.right(element), kReferenceGaussPoints);
  const auto& A = space.reference(element).weights.weights;
  const auto x = mesh.cv_boundaries(element);
  double q = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (A[j] != 0.0) q += A[j] * f(x[j]);
  }
  return exact - half_width(space, element) * q;
}

double energy_norm(const PiecewisePolynomial& w) {
  const double sq = inner_star(w, w);
  if (sq < -1e-12) throw std::runtime_error("energy_norm: negative radicand, the subdivision rule is not positive");
  return std::sqrt(std::max(sq, 0.0));
}

double l2_inner(const PiecewisePolynomial& v, const PiecewisePolynomial& w) {
  require_same_space(v, w);
  const auto& space = *v.space();
  const auto rule = gauss_rule(space.degree() + 2);
  double sum = 0.0;
  for (int i = 0; i < space.num_elements(); ++i) {
    double e = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) e += rule.weights[q] * v.value(i, rule.nodes[q]) * w.value(i, rule.nodes[q]);
    sum += half_width(space, i) * e;
  }
  return sum;
}

GlobalPrimitive::GlobalPrimitive(const PiecewisePolynomial& v) : v_(&v) {
  const int n = v.space()->num_elements();
  offsets_.resize(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    offsets_[static_cast<std::size_t>(i)] = acc;
    acc += v.partial_integral(i, 1.0);
  }
}

double GlobalPrimitive::operator()(int element, double y) const {
  return offsets_[static_cast<std::size_t>(element)] + v_->partial_integral(element, y);
}

double primitive_residual(const PiecewisePolynomial& v, const PiecewisePolynomial& w) {
  require_same_space(v, w);
  const auto& space = *v.space();
  const auto& mesh = space.mesh();
  const GlobalPrimitive V(v);
  double sum = 0.0;
  for (int i = 0; i < space.num_elements(); ++i) {
    sum += quadrature_residual(
        [&](double x) {
          const double y = mesh.to_reference(i, x);
          return w.derivative_x(i, y) * V(i, y);
        },
        i, space);
  }
  return sum;
}

double jump_product_sum(const PiecewisePolynomial& v, const PiecewisePolynomial& w) {
  require_same_space(v, w);
  const auto& space = *v.space();
  const int n = space.num_elements();
  double sum = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    sum += (v.left_trace(i + 1) - v.right_trace(i)) * (w.left_trace(i + 1) - w.right_trace(i));
  }
  if (space.mesh().boundary_condition() == BoundaryCondition::periodic) {
    sum += (v.left_trace(0) - v.right_trace(n - 1)) * (w.left_trace(0) - w.right_trace(n - 1));
  } else {
    sum += (v.left_trace(0) - outside_left(v)) * (w.left_trace(0) - outside_left(w));
    sum += (outside_right(v) - v.right_trace(n - 1)) * (outside_right(w) - w.right_trace(n - 1));
  }
  return sum;
}

PiecewisePolynomial interpolate_right_points(const SpacePtr& space, const std::function<double(double)>& f) {
  const int k = space->degree();
  PiecewisePolynomial p(space);
  for (int i = 0; i < space->num_elements(); ++i) {
    const auto& ref = space->reference(i);
    const Eigen::MatrixXd V = ref.point_values.bottomRows(k + 1);
    Eigen::VectorXd rhs(k + 1);
    const auto x = space->mesh().cv_boundaries(i);
    for (int j = 1; j <= k + 1; ++j) rhs(j - 1) = f(x[static_cast<std::size_t>(j)]);
    const Eigen::VectorXd c = V.partialPivLu().solve(rhs);
    auto out = p.coefficients(i);
    for (int m = 0; m <= k; ++m) out[static_cast<std::size_t>(m)] = c(m);
  }
  return p;
}

PiecewisePolynomial random_function(const SpacePtr& space, SplitMix64& rng) {
  std::vector<double> c(space->size());
  for (double& x : c) x = 2.0 * rng.uniform_open() - 1.0;
  return PiecewisePolynomial(space, std::move(c));
}

}  // namespace rksv
