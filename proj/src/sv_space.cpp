#include "rksv/sv_space.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rksv {

namespace {

constexpr double kMaxMassCondition = 1e12;
constexpr int kLinfSamplesPerElement = 20;

// L_0(y)..L_n(y) into out[0..n].
void legendre_all(int n, double y, double* out) {
  out[0] = 1.0;
  if (n >= 1) out[1] = y;
  for (int m = 1; m < n; ++m) out[m + 1] = ((2.0 * m + 1.0) * y * out[m] - m * out[m - 1]) / (m + 1.0);
}

// An antiderivative of L_m: y for m = 0, (L_{m+1} - L_{m-1}) / (2m + 1) otherwise.
// L holds L_0..L_{m+1} at the evaluation point.
double legendre_antiderivative(int m, const double* L) {
  if (m == 0) return L[1];
  return (L[m + 1] - L[m - 1]) / (2.0 * m + 1.0);
}

std::size_t family_slot(PointFamily f) { return static_cast<std::size_t>(f); }

ReferenceElement build_reference(PointFamily family, std::span<const double> points, int k) {
  ReferenceElement ref;
  ref.family = family;
  ref.points.assign(points.begin(), points.end());
  ref.weights = interpolatory_weights(family, k);
  ref.mass = cv_mass_matrix(points, k);
  ref.mass_inverse = ref.mass.inverse();
  const auto n = static_cast<Eigen::Index>(k + 2);
  ref.point_values.resize(n, k + 1);
  ref.point_slopes.resize(n, k + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double y = points[static_cast<std::size_t>(j)];
    for (int m = 0; m <= k; ++m) {
      ref.point_values(j, m) = legendre_eval(m, y);
      ref.point_slopes(j, m) = legendre_derivative(m, y);
    }
  }
  return ref;
}

double upwind(double alpha, double u_minus, double u_plus) { return alpha >= 0.0 ? alpha * u_minus : alpha * u_plus; }

}  // namespace

Eigen::MatrixXd cv_mass_matrix(std::span<const double> y, int k) {
  if (k < 1) throw std::invalid_argument("cv_mass_matrix: k must be >= 1");
  if (y.size() != static_cast<std::size_t>(k) + 2) throw std::invalid_argument("cv_mass_matrix: need k+2 reference points");
  std::vector<double> lo(static_cast<std::size_t>(k) + 2);
  std::vector<double> hi(static_cast<std::size_t>(k) + 2);
  Eigen::MatrixXd M(k + 1, k + 1);
  for (int j = 0; j <= k; ++j) {
    legendre_all(k + 1, y[static_cast<std::size_t>(j)], lo.data());
    legendre_all(k + 1, y[static_cast<std::size_t>(j) + 1], hi.data());
    for (int m = 0; m <= k; ++m) M(j, m) = legendre_antiderivative(m, hi.data()) - legendre_antiderivative(m, lo.data());
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  const double cond = s(0) / s(s.size() - 1);
  if (!(cond <= kMaxMassCondition)) {
    throw std::runtime_error("cv_mass_matrix: condition number " + std::to_string(cond) + " exceeds 1e12 for k=" +
                             std::to_string(k));
  }
  return M;
}

Eigen::MatrixXd cv_mass_matrix(SubdivisionRule rule, int k) {
  switch (rule) {
    case SubdivisionRule::LSV: return cv_mass_matrix(reference_points(PointFamily::gauss_legendre, k), k);
    case SubdivisionRule::RRSV: return cv_mass_matrix(reference_points(PointFamily::right_radau, k), k);
    case SubdivisionRule::RSV_adaptive: break;
  }
  throw std::invalid_argument("cv_mass_matrix: the adaptive rule has no single point set");
}

// SvSpace ---------------------------------------------------------------

SvSpace::SvSpace(Mesh1D mesh) : mesh_(std::move(mesh)) {
  for (int i = 0; i < mesh_.num_elements(); ++i) {
    const PointFamily f = mesh_.family(i);
    auto& slot = references_[family_slot(f)];
    if (!slot) slot = build_reference(f, mesh_.reference_points(f), mesh_.degree());
  }
}

const ReferenceElement& SvSpace::reference(PointFamily family) const {
  const auto& slot = references_[family_slot(family)];
  if (!slot) throw std::invalid_argument("SvSpace: point family not used on this mesh");
  return *slot;
}

const ReferenceElement& SvSpace::reference(int element) const { return reference(mesh_.family(element)); }

SpacePtr make_space(Mesh1D mesh) { return std::make_shared<const SvSpace>(std::move(mesh)); }

// SvState ---------------------------------------------------------------

SvState::SvState(SpacePtr s, double time) : space(std::move(s)), values(space->size(), 0.0), t(time) {}

double SvState::total_mass() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

// PiecewisePolynomial -----------------------------------------------------

PiecewisePolynomial::PiecewisePolynomial(SpacePtr space) : space_(std::move(space)), coeffs_(space_->size(), 0.0) {}

PiecewisePolynomial::PiecewisePolynomial(SpacePtr space, std::vector<double> coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != space_->size()) throw std::invalid_argument("PiecewisePolynomial: coefficient count mismatch");
}

std::span<const double> PiecewisePolynomial::coefficients(int i) const {
  const auto n = static_cast<std::size_t>(space_->cvs_per_element());
  return {coeffs_.data() + static_cast<std::size_t>(i) * n, n};
}

std::span<double> PiecewisePolynomial::coefficients(int i) {
  const auto n = static_cast<std::size_t>(space_->cvs_per_element());
  return {coeffs_.data() + static_cast<std::size_t>(i) * n, n};
}

double PiecewisePolynomial::value(int i, double y) const {
  const auto c = coefficients(i);
  const int k = space_->degree();
  double L[32];
  legendre_all(k, y, L);
  double v = 0.0;
  for (int m = 0; m <= k; ++m) v += c[static_cast<std::size_t>(m)] * L[m];
  return v;
}

double PiecewisePolynomial::slope(int i, double y) const {
  const auto c = coefficients(i);
  double v = 0.0;
  for (int m = 1; m <= space_->degree(); ++m) v += c[static_cast<std::size_t>(m)] * legendre_derivative(m, y);
  return v;
}

double PiecewisePolynomial::derivative_x(int i, double y) const { return slope(i, y) * 2.0 / space_->mesh().h(i); }

double PiecewisePolynomial::operator()(double x) const {
  const auto& mesh = space_->mesh();
  const auto xb = mesh.boundaries();
  auto it = std::upper_bound(xb.begin(), xb.end(), x);
  int i = static_cast<int>(it - xb.begin()) - 1;
  i = std::clamp(i, 0, mesh.num_elements() - 1);
  return value(i, mesh.to_reference(i, x));
}

Eigen::VectorXd PiecewisePolynomial::point_values(int i) const {
  const auto c = coefficients(i);
  const Eigen::Map<const Eigen::VectorXd> cv(c.data(), static_cast<Eigen::Index>(c.size()));
  return space_->reference(i).point_values * cv;
}

double PiecewisePolynomial::partial_integral(int i, double y) const {
  const auto c = coefficients(i);
  const int k = space_->degree();
  double L[33];
  double L0[33];
  legendre_all(k + 1, y, L);
  legendre_all(k + 1, -1.0, L0);
  double v = 0.0;
  for (int m = 0; m <= k; ++m) {
    v += c[static_cast<std::size_t>(m)] * (legendre_antiderivative(m, L) - legendre_antiderivative(m, L0));
  }
  return 0.5 * space_->mesh().h(i) * v;
}

SvState PiecewisePolynomial::cv_integrals(double t) const {
  SvState s(space_, t);
  const int n = space_->num_elements();
  for (int i = 0; i < n; ++i) {
    const auto c = coefficients(i);
    const Eigen::Map<const Eigen::VectorXd> cv(c.data(), static_cast<Eigen::Index>(c.size()));
    const Eigen::VectorXd I = (0.5 * space_->mesh().h(i)) * (space_->reference(i).mass * cv);
    for (int j = 0; j <= space_->degree(); ++j) s.at(i, j) = I(j);
  }
  return s;
}

PiecewisePolynomial& PiecewisePolynomial::operator+=(const PiecewisePolynomial& other) {
  if (other.coeffs_.size() != coeffs_.size()) throw std::invalid_argument("PiecewisePolynomial: size mismatch");
  for (std::size_t q = 0; q < coeffs_.size(); ++q) coeffs_[q] += other.coeffs_[q];
  return *this;
}

PiecewisePolynomial& PiecewisePolynomial::operator*=(double scale) {
  for (double& c : coeffs_) c *= scale;
  return *this;
}

// Scheme operations -------------------------------------------------------

Reconstruction reconstruct(const SvState& state) {
  const auto& space = *state.space;
  const int n = space.num_elements();
  const int k = space.degree();
  Reconstruction r(state.space);
  Eigen::VectorXd I(k + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= k; ++j) I(j) = state.at(i, j);
    const Eigen::VectorXd c = (2.0 / space.mesh().h(i)) * (space.reference(i).mass_inverse * I);
    auto out = r.coefficients(i);
    std::copy(c.data(), c.data() + c.size(), out.begin());
  }
  return r;
}

std::vector<double> apply_transport(const SvState& state, const Problem& problem) {
  const auto& space = *state.space;
  const auto& mesh = space.mesh();
  const int n = space.num_elements();
  const int k = space.degree();
  const Reconstruction uh = reconstruct(state);

  std::vector<Eigen::VectorXd> pv(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pv[static_cast<std::size_t>(i)] = uh.point_values(i);
  auto left_trace = [&](int i) { return pv[static_cast<std::size_t>(i)](0); };
  auto right_trace = [&](int i) { return pv[static_cast<std::size_t>(i)](k + 1); };

  // Fluxes at the element interfaces x_{i-1/2}, i = 0..N.
  std::vector<double> iface(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i < n; ++i) {
    const double x = mesh.left(i);
    iface[static_cast<std::size_t>(i)] = upwind(problem.alpha(x), right_trace(i - 1), left_trace(i));
  }
  if (mesh.boundary_condition() == BoundaryCondition::periodic) {
    const double f = upwind(problem.alpha(mesh.b()), right_trace(n - 1), left_trace(0));
    iface.front() = f;
    iface.back() = f;
  } else {
    // Zero exterior state on both sides.
    iface.front() = upwind(problem.alpha(mesh.a()), 0.0, left_trace(0));
    iface.back() = upwind(problem.alpha(mesh.b()), right_trace(n - 1), 0.0);
  }

  std::vector<double> F(space.size());
  std::vector<double> face_flux(static_cast<std::size_t>(k) + 2);
  for (int i = 0; i < n; ++i) {
    const auto xc = mesh.cv_boundaries(i);
    const auto& v = pv[static_cast<std::size_t>(i)];
    face_flux.front() = iface[static_cast<std::size_t>(i)];
    face_flux.back() = iface[static_cast<std::size_t>(i) + 1];
    for (int j = 1; j <= k; ++j) face_flux[static_cast<std::size_t>(j)] = problem.alpha(xc[static_cast<std::size_t>(j)]) * v(j);
    for (int j = 0; j <= k; ++j) {
      F[static_cast<std::size_t>(i) * static_cast<std::size_t>(k + 1) + static_cast<std::size_t>(j)] =
          face_flux[static_cast<std::size_t>(j)] - face_flux[static_cast<std::size_t>(j) + 1];
    }
  }
  return F;
}

std::vector<double> source_integrals(const SvSpace& space, const Problem& problem, double t) {
  std::vector<double> q(space.size(), 0.0);
  if (!problem.source) return q;
  const int k = space.degree();
  const auto rule = gauss_rule(k + 3);
  std::size_t idx = 0;
  for (int i = 0; i < space.num_elements(); ++i) {
    const auto xc = space.mesh().cv_boundaries(i);
    for (int j = 0; j <= k; ++j, ++idx) {
      const double a = xc[static_cast<std::size_t>(j)];
      const double b = xc[static_cast<std::size_t>(j) + 1];
      const double half = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      double sum = 0.0;
      for (std::size_t p = 0; p < rule.nodes.size(); ++p) sum += rule.weights[p] * problem.source(mid + half * rule.nodes[p], t);
      q[idx] = half * sum;
    }
  }
  return q;
}

std::vector<double> apply_L(const SvState& state, const Problem& problem, double t) {
  std::vector<double> F = apply_transport(state, problem);
  if (problem.source) {
    const std::vector<double> g = source_integrals(*state.space, problem, t);
    for (std::size_t q = 0; q < F.size(); ++q) F[q] += g[q];
  }
  return F;
}

SvState project_initial(const Problem& problem, SpacePtr space) {
  if (!problem.initial) throw std::invalid_argument("project_initial: problem has no initial condition");
  SvState s(space, 0.0);
  const int k = space->degree();
  for (int i = 0; i < space->num_elements(); ++i) {
    const auto xc = space->mesh().cv_boundaries(i);
    for (int j = 0; j <= k; ++j) {
      s.at(i, j) = gauss_quad(problem.initial, xc[static_cast<std::size_t>(j)], xc[static_cast<std::size_t>(j) + 1], k + 3);
    }
  }
  return s;
}

ErrorNorms error_norms(const PiecewisePolynomial& uh, const SpaceTimeFunction& exact, double t) {
  if (!exact) throw std::invalid_argument("error_norms: no exact solution available");
  const auto& space = *uh.space();
  const auto& mesh = space.mesh();
  const int k = space.degree();
  const auto rule = gauss_rule(k + 3);
  ErrorNorms e;
  double sq = 0.0;
  for (int i = 0; i < mesh.num_elements(); ++i) {
    const auto xc = mesh.cv_boundaries(i);
    for (int j = 0; j <= k; ++j) {
      const double a = xc[static_cast<std::size_t>(j)];
      const double b = xc[static_cast<std::size_t>(j) + 1];
      const double half = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double x = mid + half * rule.nodes[q];
        const double d = uh.value(i, mesh.to_reference(i, x)) - exact(x, t);
        sq += half * rule.weights[q] * d * d;
      }
    }
    for (int s = 0; s < kLinfSamplesPerElement; ++s) {
      const double y = -1.0 + 2.0 * s / (kLinfSamplesPerElement - 1);
      e.linf = std::max(e.linf, std::abs(uh.value(i, y) - exact(mesh.to_physical(i, y), t)));
    }
    const auto ys = mesh.reference_points(i);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      e.linf = std::max(e.linf, std::abs(uh.value(i, ys[j]) - exact(xc[j], t)));
    }
  }
  e.l2 = std::sqrt(sq);
  return e;
}

ErrorNorms error_norms(const SvState& state, const Problem& problem, double t) {
  return error_norms(reconstruct(state), problem.exact, t);
}

void write_snapshot(std::ostream& os, const SvState& state, int samples_per_element) {
  if (samples_per_element < 2) throw std::invalid_argument("write_snapshot: need at least 2 samples per element");
  const Reconstruction uh = reconstruct(state);
  const auto& mesh = state.space->mesh();
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << "# t=" << std::setprecision(17) << state.t << '\n';
  for (int i = 0; i < mesh.num_elements(); ++i) {
    for (int s = 0; s < samples_per_element; ++s) {
      const double y = -1.0 + 2.0 * s / (samples_per_element - 1);
      os << mesh.to_physical(i, y) << ' ' << uh.value(i, y) << '\n';
    }
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace rksv
