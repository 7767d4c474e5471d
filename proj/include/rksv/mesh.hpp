#pragma once

// One-dimensional spectral-volume partitions and their control-volume
// subdivisions.

#include "rksv/quadrature.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace rksv {

enum class BoundaryCondition { periodic, inflow_zero };

std::string_view to_string(BoundaryCondition bc);

using Coefficient = std::function<double(double)>;

/// SplitMix64 generator mapped to the open interval (0, 1):
///   u = ((next() >> 11) + 0.5) * 2^-53.
/// Pinned so that perturbed meshes are reproducible bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform_open();

 private:
  std::uint64_t state_;
};

/// Spectral volumes I_i = [x_{i-1/2}, x_{i+1/2}], i = 0..N-1 (zero based),
/// each split into k+1 control volumes C_{i,j} = [x_{i,j}, x_{i,j+1}] with
/// x_{i,j} = h_i/2 * y_j + x_i for the element's reference points y_j.
class Mesh1D {
 public:
  Mesh1D(std::vector<double> boundaries, SubdivisionRule rule, int k, BoundaryCondition bc,
         const Coefficient& coefficient = {});

  int num_elements() const { return static_cast<int>(boundaries_.size()) - 1; }
  int degree() const { return k_; }
  int cvs_per_element() const { return k_ + 1; }
  SubdivisionRule rule() const { return rule_; }
  BoundaryCondition boundary_condition() const { return bc_; }
  double a() const { return boundaries_.front(); }
  double b() const { return boundaries_.back(); }

  std::span<const double> boundaries() const { return boundaries_; }
  double left(int i) const { return boundaries_[static_cast<std::size_t>(i)]; }
  double right(int i) const { return boundaries_[static_cast<std::size_t>(i) + 1]; }
  double h(int i) const { return right(i) - left(i); }
  double center(int i) const { return 0.5 * (left(i) + right(i)); }

  PointFamily family(int i) const { return families_[static_cast<std::size_t>(i)]; }
  /// Reference points y_0..y_{k+1} used by element i.
  std::span<const double> reference_points(int i) const;
  std::span<const double> reference_points(PointFamily family) const;
  /// CV boundaries x_{i,0}..x_{i,k+1} of element i.
  std::span<const double> cv_boundaries(int i) const;
  double cv_width(int i, int j) const;

  double h_min() const;
  double h_max() const;
  double regularity_ratio() const { return h_max() / h_min(); }

  /// Physical coordinate of reference point y in element i.
  double to_physical(int i, double y) const { return 0.5 * h(i) * y + center(i); }
  double to_reference(int i, double x) const { return (x - center(i)) * 2.0 / h(i); }

 private:
  std::vector<double> boundaries_;
  SubdivisionRule rule_;
  int k_;
  BoundaryCondition bc_;
  std::vector<PointFamily> families_;
  std::array<std::vector<double>, 3> family_points_;
  std::vector<double> cv_boundaries_;  // N x (k+2), row major
};

/// N equal elements on [a, b].
Mesh1D uniform_mesh(double a, double b, int N, SubdivisionRule rule, int k, BoundaryCondition bc,
                    const Coefficient& coefficient = {});

/// Randomly perturbed partition of [0, 2*pi]:
///   x_i = 2 pi i / N + sin(i pi / N) / (100 N) * U_i,  U_i in (0, 1),
/// with U_1..U_{N-1} drawn in order from SplitMix64(seed).
Mesh1D perturbed_mesh(int N, std::uint64_t seed, SubdivisionRule rule, int k, BoundaryCondition bc,
                      const Coefficient& coefficient = {});

/// Plain-text table: element index, element boundaries, CV boundaries.
void write_mesh_table(std::ostream& os, const Mesh1D& mesh);

}  // namespace rksv
