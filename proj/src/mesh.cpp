#include "rksv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rksv {

std::string_view to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::periodic ? "periodic" : "inflow_zero";
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

namespace {

std::size_t family_index(PointFamily f) { return static_cast<std::size_t>(f); }

PointFamily choose_family(SubdivisionRule rule, double alpha_left, double alpha_right) {
  switch (rule) {
    case SubdivisionRule::LSV: return PointFamily::gauss_legendre;
    case SubdivisionRule::RRSV: return PointFamily::right_radau;
    case SubdivisionRule::RSV_adaptive:
      // Both endpoints inflow from the left, or mixed signs: right Radau.
      // Left Radau only when the coefficient is negative at both endpoints.
      if (alpha_left < 0.0 && alpha_right < 0.0) return PointFamily::left_radau;
      return PointFamily::right_radau;
  }
  return PointFamily::gauss_legendre;
}

}  // namespace

Mesh1D::Mesh1D(std::vector<double> boundaries, SubdivisionRule rule, int k, BoundaryCondition bc,
               const Coefficient& coefficient)
    : boundaries_(std::move(boundaries)), rule_(rule), k_(k), bc_(bc) {
  if (boundaries_.size() < 3) throw std::invalid_argument("Mesh1D: need at least 2 elements");
  if (k < 1) throw std::invalid_argument("Mesh1D: degree k must be >= 1");
  for (std::size_t i = 1; i < boundaries_.size(); ++i) {
    if (!(boundaries_[i] > boundaries_[i - 1])) throw std::invalid_argument("Mesh1D: element boundaries must increase strictly");
  }
  if (rule == SubdivisionRule::RSV_adaptive && !coefficient) {
    throw std::invalid_argument("Mesh1D: adaptive subdivision needs the coefficient alpha(x)");
  }

  const int n = num_elements();
  families_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double al = rule == SubdivisionRule::RSV_adaptive ? coefficient(left(i)) : 0.0;
    const double ar = rule == SubdivisionRule::RSV_adaptive ? coefficient(right(i)) : 0.0;
    families_[static_cast<std::size_t>(i)] = choose_family(rule, al, ar);
  }
  for (PointFamily f : families_) {
    auto& pts = family_points_[family_index(f)];
    if (pts.empty()) pts = rksv::reference_points(f, k);
  }

  const auto stride = static_cast<std::size_t>(k + 2);
  cv_boundaries_.resize(static_cast<std::size_t>(n) * stride);
  for (int i = 0; i < n; ++i) {
    const auto y = reference_points(i);
    auto* out = cv_boundaries_.data() + static_cast<std::size_t>(i) * stride;
    out[0] = left(i);
    for (int j = 1; j <= k; ++j) out[j] = to_physical(i, y[static_cast<std::size_t>(j)]);
    out[k + 1] = right(i);
    for (int j = 1; j <= k + 1; ++j) {
      if (!(out[j] > out[j - 1])) throw std::runtime_error("Mesh1D: control-volume boundaries not increasing");
    }
  }
}

std::span<const double> Mesh1D::reference_points(PointFamily family) const {
  const auto& pts = family_points_[family_index(family)];
  if (pts.empty()) throw std::invalid_argument("Mesh1D: point family not used on this mesh");
  return pts;
}

std::span<const double> Mesh1D::reference_points(int i) const { return reference_points(family(i)); }

std::span<const double> Mesh1D::cv_boundaries(int i) const {
  const auto stride = static_cast<std::size_t>(k_ + 2);
  return {cv_boundaries_.data() + static_cast<std::size_t>(i) * stride, stride};
}

double Mesh1D::cv_width(int i, int j) const {
  const auto cv = cv_boundaries(i);
  return cv[static_cast<std::size_t>(j) + 1] - cv[static_cast<std::size_t>(j)];
}

double Mesh1D::h_min() const {
  double m = h(0);
  for (int i = 1; i < num_elements(); ++i) m = std::min(m, h(i));
  return m;
}

double Mesh1D::h_max() const {
  double m = h(0);
  for (int i = 1; i < num_elements(); ++i) m = std::max(m, h(i));
  return m;
}

Mesh1D uniform_mesh(double a, double b, int N, SubdivisionRule rule, int k, BoundaryCondition bc,
                    const Coefficient& coefficient) {
  if (!(a < b)) throw std::invalid_argument("uniform_mesh: requires a < b");
  if (N < 2) throw std::invalid_argument("uniform_mesh: N must be >= 2");
  std::vector<double> x(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / N;
  x.back() = b;
  return Mesh1D(std::move(x), rule, k, bc, coefficient);
}

Mesh1D perturbed_mesh(int N, std::uint64_t seed, SubdivisionRule rule, int k, BoundaryCondition bc,
                      const Coefficient& coefficient) {
  if (N < 4) throw std::invalid_argument("perturbed_mesh: N must be >= 4");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  SplitMix64 rng(seed);
  std::vector<double> x(static_cast<std::size_t>(N) + 1);
  x.front() = 0.0;
  x.back() = two_pi;
  for (int i = 1; i < N; ++i) {
    const double amplitude = std::sin(i * std::numbers::pi / N) / (100.0 * N);
    x[static_cast<std::size_t>(i)] = two_pi * i / N + amplitude * rng.uniform_open();
  }
  for (int i = 1; i <= N; ++i) {
    if (!(x[static_cast<std::size_t>(i)] > x[static_cast<std::size_t>(i) - 1])) {
      throw std::runtime_error("perturbed_mesh: perturbation broke monotonicity at node " + std::to_string(i));
    }
  }
  return Mesh1D(std::move(x), rule, k, bc, coefficient);
}

void write_mesh_table(std::ostream& os, const Mesh1D& mesh) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << "# rule=" << to_string(mesh.rule()) << " k=" << mesh.degree() << " N=" << mesh.num_elements()
     << " bc=" << to_string(mesh.boundary_condition()) << " h_max/h_min=" << std::setprecision(6)
     << mesh.regularity_ratio() << '\n';
  os << "# element left right family cv_boundaries...\n";
  os << std::setprecision(17);
  for (int i = 0; i < mesh.num_elements(); ++i) {
    os << i << ' ' << mesh.left(i) << ' ' << mesh.right(i) << ' ' << to_string(mesh.family(i));
    for (double x : mesh.cv_boundaries(i)) os << ' ' << x;
    os << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace rksv
