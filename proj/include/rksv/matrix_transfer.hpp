#pragma once

// Exact matrix-transferring analysis of the fully discrete RK-SV energy and
// error equations: termination index, indicator factor, stability class and
// the CFL exponent needed for optimal error estimates.

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rksv {

/// Square matrix of exact rationals. Reads outside the index range return 0.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int n);

  int size() const { return n_; }
  mpq_class get(int p, int q) const;
  mpq_class& operator()(int p, int q);
  const mpq_class& operator()(int p, int q) const;
  void set_symmetric(int p, int q, const mpq_class& v);

  bool is_symmetric() const;
  bool operator==(const RationalMatrix& other) const;

  /// Leading principal submatrix of the given order.
  RationalMatrix leading(int order) const;

  static RationalMatrix from_integers(const std::vector<std::vector<long>>& rows);

 private:
  int n_ = 0;
  std::vector<mpq_class> a_;
};

/// Determinant by fraction-free (Bareiss) elimination after clearing the
/// denominators row by row.
mpq_class determinant(const RationalMatrix& m);

/// alpha_p = s!/p!, p = 0..s.
std::vector<mpq_class> alpha_vector(int s);

enum class StabilityClass { monotone, weak };

std::string_view to_string(StabilityClass c);

struct TransferReport {
  int s = 0;
  std::vector<mpq_class> alpha;
  int zeta = 0;
  int rho = 0;
  mpq_class c_diag;
  StabilityClass stability_class = StabilityClass::weak;
  std::optional<int> gamma;
  mpq_class cfl_error_exponent;

  /// Matrices after steps 0..zeta. Stability transfer: energy = A,
  /// spatial = B. Error transfer: energy = C, spatial = H, projection = D,
  /// truncation = G.
  std::vector<RationalMatrix> energy;
  std::vector<RationalMatrix> spatial;
  std::vector<RationalMatrix> projection;
  std::vector<RationalMatrix> truncation;
};

TransferReport stability_transfer(int s);
TransferReport error_transfer(int s);

/// Smallest kappa in 0..zeta-1 whose (kappa+1)-order leading minor of b is
/// nonpositive, or zeta.
int indicator_factor(const RationalMatrix& b, int zeta);

std::vector<TransferReport> key_factor_table(int s_max);

enum class TableFormat { md, csv, tex };

/// "τ = O(h^{4/3})" style string; tex gives "$\tau=\mathcal{O}(h^{4/3})$".
std::string cfl_condition(const mpq_class& exponent, TableFormat format);

void write_key_factor_table(std::ostream& os, const std::vector<TransferReport>& reports, TableFormat format);

/// Every matrix of the trace, step by step.
void write_matrix_trace(std::ostream& os, const TransferReport& report, TableFormat format);

}  // namespace rksv
