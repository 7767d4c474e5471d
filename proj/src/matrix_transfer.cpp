#include "rksv/matrix_transfer.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rksv {

// RationalMatrix -----------------------------------------------------------

RationalMatrix::RationalMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), mpq_class(0)) {
  if (n < 0) throw std::invalid_argument("RationalMatrix: negative size");
}

mpq_class RationalMatrix::get(int p, int q) const {
  if (p < 0 || q < 0 || p >= n_ || q >= n_) return 0;
  return (*this)(p, q);
}

mpq_class& RationalMatrix::operator()(int p, int q) {
  return a_[static_cast<std::size_t>(p) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(q)];
}

const mpq_class& RationalMatrix::operator()(int p, int q) const {
  return a_[static_cast<std::size_t>(p) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(q)];
}

void RationalMatrix::set_symmetric(int p, int q, const mpq_class& v) {
  (*this)(p, q) = v;
  (*this)(q, p) = v;
}

bool RationalMatrix::is_symmetric() const {
  for (int p = 0; p < n_; ++p) {
    for (int q = p + 1; q < n_; ++q) {
      if ((*this)(p, q) != (*this)(q, p)) return false;
    }
  }
  return true;
}

bool RationalMatrix::operator==(const RationalMatrix& other) const { return n_ == other.n_ && a_ == other.a_; }

RationalMatrix RationalMatrix::leading(int order) const {
  if (order < 0 || order > n_) throw std::out_of_range("RationalMatrix::leading: bad order");
  RationalMatrix m(order);
  for (int p = 0; p < order; ++p) {
    for (int q = 0; q < order; ++q) m(p, q) = (*this)(p, q);
  }
  return m;
}

RationalMatrix RationalMatrix::from_integers(const std::vector<std::vector<long>>& rows) {
  RationalMatrix m(static_cast<int>(rows.size()));
  for (int p = 0; p < m.size(); ++p) {
    const auto& r = rows[static_cast<std::size_t>(p)];
    if (static_cast<int>(r.size()) != m.size()) throw std::invalid_argument("RationalMatrix::from_integers: ragged rows");
    for (int q = 0; q < m.size(); ++q) m(p, q) = r[static_cast<std::size_t>(q)];
  }
  return m;
}

mpq_class determinant(const RationalMatrix& m) {
  const int n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<mpz_class>> a(static_cast<std::size_t>(n), std::vector<mpz_class>(static_cast<std::size_t>(n)));
  mpz_class scale = 1;
  for (int p = 0; p < n; ++p) {
    mpz_class l = 1;
    for (int q = 0; q < n; ++q) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(p, q).get_den_mpz_t());
    scale *= l;
    for (int q = 0; q < n; ++q) {
      const mpq_class v = m(p, q) * l;
      a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = v.get_num();
    }
  }

  int sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    auto uk = static_cast<std::size_t>(k);
    if (a[uk][uk] == 0) {
      int swap = -1;
      for (int r = k + 1; r < n; ++r) {
        if (a[static_cast<std::size_t>(r)][uk] != 0) {
          swap = r;
          break;
        }
      }
      if (swap < 0) return 0;
      std::swap(a[uk], a[static_cast<std::size_t>(swap)]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      auto ui = static_cast<std::size_t>(i);
      for (int j = k + 1; j < n; ++j) {
        auto uj = static_cast<std::size_t>(j);
        a[ui][uj] = (a[ui][uj] * a[uk][uk] - a[ui][uk] * a[uk][uj]) / prev;
      }
    }
    prev = a[uk][uk];
  }
  mpq_class det(a.back().back() * sign, scale);
  det.canonicalize();
  return det;
}

// Transfers ---------------------------------------------------------------

std::vector<mpq_class> alpha_vector(int s) {
  if (s < 1 || s > 12) throw std::invalid_argument("alpha_vector: s must lie in 1..12");
  std::vector<mpq_class> alpha(static_cast<std::size_t>(s) + 1);
  mpz_class v = 1;
  for (int p = s; p >= 0; --p) {
    alpha[static_cast<std::size_t>(p)] = v;
    v *= p == 0 ? 1 : p;
  }
  return alpha;
}

std::string_view to_string(StabilityClass c) { return c == StabilityClass::monotone ? "monotone" : "weak"; }

namespace {

RationalMatrix initial_energy(const std::vector<mpq_class>& alpha) {
  const int n = static_cast<int>(alpha.size());
  RationalMatrix a(n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) a(p, q) = alpha[static_cast<std::size_t>(p)] * alpha[static_cast<std::size_t>(q)];
  }
  a(0, 0) = 0;
  return a;
}

// Step l of the energy-matrix recursion; reads only from the previous matrix.
RationalMatrix transfer_energy(const RationalMatrix& old, int l) {
  const int s = old.size() - 1;
  RationalMatrix next = old;
  for (int q = 0; q <= s; ++q) next.set_symmetric(l - 1, q, 0);
  next(l, l) = old.get(l, l) - 2 * old.get(l + 1, l - 1);
  for (int p = l + 1; p <= s - 1; ++p) next.set_symmetric(p, l, old.get(p, l) - old.get(p + 1, l - 1));
  return next;
}

// Deposit of step l into the bilinear-form matrix: b_{p,l-1} = 2 a_{p+1,l-1}, p = l-1..s-1.
RationalMatrix transfer_spatial(const RationalMatrix& old_b, const RationalMatrix& old_a, int l) {
  const int s = old_a.size() - 1;
  RationalMatrix next = old_b;
  for (int p = l - 1; p <= s - 1; ++p) next.set_symmetric(p, l - 1, 2 * old_a.get(p + 1, l - 1));
  return next;
}

void classify(TransferReport& r) {
  const RationalMatrix& a = r.energy.back();
  r.c_diag = a(r.zeta, r.zeta);
  r.rho = indicator_factor(r.spatial.back(), r.zeta);
  if (sgn(r.c_diag) < 0 && r.rho == r.zeta) {
    r.stability_class = StabilityClass::monotone;
    r.gamma.reset();
    r.cfl_error_exponent = 1;
    return;
  }
  r.stability_class = StabilityClass::weak;
  const int g = sgn(r.c_diag) < 0 ? 2 * r.rho + 1 : std::min(2 * r.zeta, 2 * r.rho + 1);
  r.gamma = g;
  r.cfl_error_exponent = mpq_class(g, g - 1);
  r.cfl_error_exponent.canonicalize();
}

}  // namespace

int indicator_factor(const RationalMatrix& b, int zeta) {
  for (int kappa = 0; kappa < zeta; ++kappa) {
    if (sgn(determinant(b.leading(kappa + 1))) <= 0) return kappa;
  }
  return zeta;
}

TransferReport stability_transfer(int s) {
  TransferReport r;
  r.s = s;
  r.alpha = alpha_vector(s);
  r.energy.push_back(initial_energy(r.alpha));
  r.spatial.emplace_back(s + 1);
  for (int l = 1;; ++l) {
    if (l > s) throw std::logic_error("stability_transfer: no nonzero diagonal within s steps");
    const RationalMatrix& a = r.energy.back();
    RationalMatrix b = transfer_spatial(r.spatial.back(), a, l);
    RationalMatrix next = transfer_energy(a, l);
    r.spatial.push_back(std::move(b));
    r.energy.push_back(std::move(next));
    if (sgn(r.energy.back()(l, l)) != 0) {
      r.zeta = l;
      break;
    }
  }
  classify(r);
  return r;
}

TransferReport error_transfer(int s) {
  TransferReport r;
  r.s = s;
  r.alpha = alpha_vector(s);
  const auto& beta = r.alpha;
  r.energy.push_back(initial_energy(beta));
  RationalMatrix d(s + 1);
  for (int p = 0; p <= s; ++p) {
    for (int q = 0; q <= s; ++q) d(p, q) = -beta[static_cast<std::size_t>(p)] * beta[static_cast<std::size_t>(q)];
  }
  d(s, s) = 0;
  r.projection.push_back(std::move(d));
  r.spatial.emplace_back(s + 1);
  r.truncation.emplace_back(s + 1);

  for (int l = 1;; ++l) {
    if (l > s) throw std::logic_error("error_transfer: no nonzero diagonal within s steps");
    const RationalMatrix& c = r.energy.back();
    RationalMatrix dn = r.projection.back();
    RationalMatrix gn = r.truncation.back();
    for (int p = l; p <= s; ++p) {
      dn.set_symmetric(p, l - 1, dn(p, l - 1) + c(p, l - 1));
      gn.set_symmetric(p, l - 1, 2 * c(p, l - 1));
    }
    RationalMatrix h = transfer_spatial(r.spatial.back(), c, l);
    RationalMatrix next = transfer_energy(c, l);
    r.projection.push_back(std::move(dn));
    r.truncation.push_back(std::move(gn));
    r.spatial.push_back(std::move(h));
    r.energy.push_back(std::move(next));
    if (sgn(r.energy.back()(l, l)) != 0) {
      r.zeta = l;
      break;
    }
  }
  classify(r);
  return r;
}

std::vector<TransferReport> key_factor_table(int s_max) {
  if (s_max < 1 || s_max > 12) throw std::invalid_argument("key_factor_table: s_max must lie in 1..12");
  std::vector<TransferReport> rows;
  for (int s = 1; s <= s_max; ++s) rows.push_back(stability_transfer(s));
  return rows;
}

// Rendering -----------------------------------------------------------------

std::string cfl_condition(const mpq_class& exponent, TableFormat format) {
  std::string power;
  if (exponent == 1) {
    power = "h";
  } else if (exponent.get_den() == 1) {
    power = "h^" + exponent.get_num().get_str();
  } else {
    power = "h^{" + exponent.get_str() + "}";
  }
  if (format == TableFormat::tex) return "$\\tau=\\mathcal{O}(" + power + ")$";
  return "τ = O(" + power + ")";
}

namespace {

std::string gamma_text(const TransferReport& r) { return r.gamma ? std::to_string(*r.gamma) : "-"; }

void write_matrix(std::ostream& os, const RationalMatrix& m, TableFormat format) {
  const int n = m.size();
  if (format == TableFormat::tex) {
    os << "\\left[\\begin{array}{" << std::string(static_cast<std::size_t>(n), 'c') << "}\n";
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) os << (q ? " & " : "  ") << m(p, q).get_str();
      os << (p + 1 < n ? " \\\\\n" : "\n");
    }
    os << "\\end{array}\\right]\n";
    return;
  }
  const char sep = format == TableFormat::csv ? ',' : ' ';
  std::size_t width = 1;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) width = std::max(width, m(p, q).get_str().size());
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (q) os << sep;
      if (format == TableFormat::csv) {
        os << m(p, q).get_str();
      } else {
        os << std::setw(static_cast<int>(width)) << m(p, q).get_str();
      }
    }
    os << '\n';
  }
}

void write_trace(std::ostream& os, const char* name, const std::vector<RationalMatrix>& trace, TableFormat format) {
  for (std::size_t l = 0; l < trace.size(); ++l) {
    if (format == TableFormat::tex) {
      os << "% " << name << "^(" << l << ")\n";
    } else {
      os << "# " << name << "^(" << l << ")\n";
    }
    write_matrix(os, trace[l], format);
  }
}

}  // namespace

void write_key_factor_table(std::ostream& os, const std::vector<TransferReport>& reports, TableFormat format) {
  switch (format) {
    case TableFormat::md:
      os << "| Scheme | s | c_zz | zeta | rho | gamma | CFL condition |\n";
      os << "|---|---|---|---|---|---|---|\n";
      for (const auto& r : reports) {
        os << "| RKSV(" << r.s << ",k) | " << r.s << " | " << r.c_diag.get_str() << " | " << r.zeta << " | " << r.rho
           << " | " << gamma_text(r) << " | " << cfl_condition(r.cfl_error_exponent, format) << " |\n";
      }
      break;
    case TableFormat::csv:
      os << "s,c_zeta_zeta,zeta,rho,gamma,cfl_exponent,stability\n";
      for (const auto& r : reports) {
        os << r.s << ',' << r.c_diag.get_str() << ',' << r.zeta << ',' << r.rho << ',' << gamma_text(r) << ','
           << r.cfl_error_exponent.get_str() << ',' << to_string(r.stability_class) << '\n';
      }
      break;
    case TableFormat::tex:
      os << "\\begin{tabular}{ccccccc}\n\\toprule\n";
      os << "Schemes & $s$ & $c_{\\zeta \\zeta}^{(\\zeta)}$ & $\\zeta$ & $\\rho$ & $\\gamma$ & CFL condition \\\\\n\\midrule\n";
      for (const auto& r : reports) {
        os << "RKSV$(" << r.s << ",k)$ & " << r.s << " & " << r.c_diag.get_str() << " & " << r.zeta << " & " << r.rho
           << " & " << gamma_text(r) << " & " << cfl_condition(r.cfl_error_exponent, format) << " \\\\\n";
      }
      os << "\\bottomrule\n\\end{tabular}\n";
      break;
  }
}

void write_matrix_trace(std::ostream& os, const TransferReport& report, TableFormat format) {
  const bool error = !report.projection.empty();
  write_trace(os, error ? "C" : "A", report.energy, format);
  write_trace(os, error ? "H" : "B", report.spatial, format);
  if (error) {
    write_trace(os, "D", report.projection, format);
    write_trace(os, "G", report.truncation, format);
  }
}

}  // namespace rksv
