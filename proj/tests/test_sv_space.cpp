#include "rksv/petrov_galerkin.hpp"
#include "rksv/sv_space.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

using namespace rksv;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SpacePtr periodic_space(SubdivisionRule rule, int k, int N, double a = 0.0, double b = kTwoPi) {
  return make_space(uniform_mesh(a, b, N, rule, k, BoundaryCondition::periodic));
}

// Exact CV integrals of a polynomial given by its monomial coefficients.
SvState integrals_of(const SpacePtr& space, const std::vector<double>& mono) {
  auto antiderivative = [&](double x) {
    double s = 0.0;
    for (std::size_t m = 0; m < mono.size(); ++m) s += mono[m] * std::pow(x, static_cast<double>(m + 1)) / static_cast<double>(m + 1);
    return s;
  };
  SvState st(space);
  for (int i = 0; i < space->num_elements(); ++i) {
    const auto xc = space->mesh().cv_boundaries(i);
    for (int j = 0; j <= space->degree(); ++j) {
      st.at(i, j) = antiderivative(xc[static_cast<std::size_t>(j) + 1]) - antiderivative(xc[static_cast<std::size_t>(j)]);
    }
  }
  return st;
}

double poly(const std::vector<double>& mono, double x) {
  double s = 0.0;
  for (std::size_t m = mono.size(); m-- > 0;) s = s * x + mono[m];
  return s;
}

}  // namespace

TEST_CASE("CV mass matrices") {
  const auto lsv = cv_mass_matrix(SubdivisionRule::LSV, 1);
  CHECK(lsv(0, 0) == doctest::Approx(1.0));
  CHECK(lsv(0, 1) == doctest::Approx(-0.5));
  CHECK(lsv(1, 0) == doctest::Approx(1.0));
  CHECK(lsv(1, 1) == doctest::Approx(0.5));

  const auto rrsv = cv_mass_matrix(SubdivisionRule::RRSV, 1);
  CHECK(rrsv(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(rrsv(0, 1) == doctest::Approx(-4.0 / 9.0).epsilon(1e-14));
  CHECK(rrsv(1, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(rrsv(1, 1) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));

  for (auto family : {PointFamily::gauss_legendre, PointFamily::right_radau, PointFamily::left_radau}) {
    for (int k = 1; k <= 8; ++k) {
      const auto y = reference_points(family, k);
      const auto M = cv_mass_matrix(y, k);
      for (int j = 0; j <= k; ++j) {
        CHECK(M(j, 0) == doctest::Approx(y[static_cast<std::size_t>(j) + 1] - y[static_cast<std::size_t>(j)]).epsilon(1e-14));
      }
      // each column integrates L_m over [-1, 1]: 2 for m = 0, else 0
      for (int m = 0; m <= k; ++m) CHECK(std::abs(M.col(m).sum() - (m == 0 ? 2.0 : 0.0)) < 1e-13);
    }
  }
  CHECK_THROWS(cv_mass_matrix(SubdivisionRule::RSV_adaptive, 2));
  const std::vector<double> degenerate{-1.0, 0.0, 0.0, 1.0};
  CHECK_THROWS(cv_mass_matrix(degenerate, 2));
}

TEST_CASE("reconstruction") {
  SUBCASE("unit function") {
    const auto space = periodic_space(SubdivisionRule::RRSV, 3, 6);
    SvState st(space);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j <= 3; ++j) st.at(i, j) = space->mesh().cv_width(i, j);
    }
    const auto uh = reconstruct(st);
    for (int i = 0; i < 6; ++i) {
      const auto c = uh.coefficients(i);
      CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-13));
      for (int m = 1; m <= 3; ++m) CHECK(std::abs(c[static_cast<std::size_t>(m)]) < 1e-13);
    }
  }
  SUBCASE("direct 2x2 solve") {
    // on [0, 1]: integrals (h/2) * integral of c0 + c1 y over [-1, 0] and [0, 1]
    const auto space = make_space(uniform_mesh(0.0, 2.0, 2, SubdivisionRule::LSV, 1, BoundaryCondition::periodic));
    SvState st(space);
    st.at(0, 0) = 0.2;
    st.at(0, 1) = 0.3;
    st.at(1, 0) = 0.0;
    st.at(1, 1) = 0.0;
    // 0.5 (c0 - c1/2) = 0.2, 0.5 (c0 + c1/2) = 0.3
    const auto uh = reconstruct(st);
    const auto c = uh.coefficients(0);
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c[1] == doctest::Approx(0.2).epsilon(1e-14));
  }
  SUBCASE("polynomials of degree k are reproduced") {
    for (auto rule : {SubdivisionRule::LSV, SubdivisionRule::RRSV}) {
      for (int k = 1; k <= 5; ++k) {
        const auto space = make_space(uniform_mesh(-1.0, 2.0, 5, rule, k, BoundaryCondition::inflow_zero));
        std::vector<double> mono(static_cast<std::size_t>(k) + 1);
        for (int m = 0; m <= k; ++m) mono[static_cast<std::size_t>(m)] = 0.3 * (m + 1) * (m % 2 == 0 ? 1 : -1);
        const auto uh = reconstruct(integrals_of(space, mono));
        for (double x = -1.0; x < 2.0; x += 0.0371) CHECK(std::abs(uh(x) - poly(mono, x)) < 1e-12);
      }
    }
  }
  SUBCASE("round trip on a perturbed adaptive mesh") {
    auto mesh = perturbed_mesh(16, 3, SubdivisionRule::RSV_adaptive, 4, BoundaryCondition::periodic,
                               [](double x) { return std::sin(x); });
    const auto space = make_space(std::move(mesh));
    SvState st(space);
    SplitMix64 rng(11);
    for (auto& v : st.values) v = rng.uniform_open() - 0.5;
    const auto back = reconstruct(st).cv_integrals();
    for (std::size_t q = 0; q < st.values.size(); ++q) {
      CHECK(std::abs(back.values[q] - st.values[q]) <= 1e-12 * std::max(1.0, std::abs(st.values[q])));
    }
  }
}

TEST_CASE("transport operator") {
  Problem advect;
  SUBCASE("constants are preserved") {
    for (auto rule : {SubdivisionRule::LSV, SubdivisionRule::RRSV}) {
      const auto space = periodic_space(rule, 3, 8);
      SvState st(space);
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j <= 3; ++j) st.at(i, j) = space->mesh().cv_width(i, j);
      }
      for (double f : apply_L(st, advect, 0.0)) CHECK(std::abs(f) < 1e-13);
    }
  }
  SUBCASE("periodic fluxes telescope") {
    const auto space = periodic_space(SubdivisionRule::RRSV, 2, 10);
    SvState st(space);
    SplitMix64 rng(5);
    for (auto& v : st.values) v = rng.uniform_open();
    const auto F = apply_L(st, advect, 0.0);
    CHECK(std::abs(std::accumulate(F.begin(), F.end(), 0.0)) < 1e-13);
  }
  SUBCASE("linear data under inflow") {
    const auto space = make_space(uniform_mesh(0.0, 1.0, 4, SubdivisionRule::LSV, 2, BoundaryCondition::inflow_zero));
    const auto F = apply_L(integrals_of(space, {0.0, 1.0}), advect, 0.0);
    for (int i = 0; i < 4; ++i) {
      const auto xc = space->mesh().cv_boundaries(i);
      for (int j = 0; j <= 2; ++j) {
        if (i == 0 && j == 0) continue;  // the inflow face sees the zero ghost
        const double expected = xc[static_cast<std::size_t>(j)] - xc[static_cast<std::size_t>(j) + 1];
        CHECK(F[static_cast<std::size_t>(i * 3 + j)] == doctest::Approx(expected).epsilon(1e-12));
      }
    }
    CHECK(F[0] == doctest::Approx(-space->mesh().cv_boundaries(0)[1]).epsilon(1e-12));
  }
  SUBCASE("negative coefficient upwinds from the right") {
    Problem back;
    back.alpha = [](double) { return -1.0; };
    const auto space = make_space(uniform_mesh(0.0, 1.0, 4, SubdivisionRule::LSV, 1, BoundaryCondition::inflow_zero));
    const auto F = apply_L(integrals_of(space, {0.0, 1.0}), back, 0.0);
    // interior CVs: -x_{i,j} + x_{i,j+1}; the last CV has zero exterior state at x = 1
    const auto xc = space->mesh().cv_boundaries(3);
    CHECK(F[7] == doctest::Approx(-xc[1]).epsilon(1e-12));
    const auto x0 = space->mesh().cv_boundaries(1);
    CHECK(F[2] == doctest::Approx(x0[1] - x0[0]).epsilon(1e-12));
  }
  SUBCASE("source integrals") {
    Problem forced;
    forced.source = [](double x, double t) { return x + t; };
    const auto space = make_space(uniform_mesh(0.0, 1.0, 2, SubdivisionRule::LSV, 1, BoundaryCondition::periodic));
    const auto q = source_integrals(*space, forced, 2.0);
    // CV [0, 1/4]: integral of x + 2
    CHECK(q[0] == doctest::Approx(0.25 * 0.25 / 2 + 0.5).epsilon(1e-14));
    const auto none = source_integrals(*space, advect, 0.0);
    for (double v : none) CHECK(v == 0.0);
  }
}

TEST_CASE("initial projection") {
  Problem p;
  p.initial = [](double) { return 1.0; };
  const auto space = periodic_space(SubdivisionRule::RRSV, 2, 4);
  const auto one = project_initial(p, space);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= 2; ++j) CHECK(one.at(i, j) == doctest::Approx(space->mesh().cv_width(i, j)).epsilon(1e-14));
  }
  CHECK(one.t == 0.0);

  p.initial = [](double x) { return std::sin(x); };
  CHECK(std::abs(project_initial(p, periodic_space(SubdivisionRule::LSV, 3, 8)).total_mass()) < 1e-12);

  // [0.1, 0.5] split at its midpoint: the first CV is [0.1, 0.3]
  p.initial = [](double x) { return x * x; };
  const auto sq = project_initial(p, make_space(uniform_mesh(0.1, 0.9, 2, SubdivisionRule::LSV, 1, BoundaryCondition::periodic)));
  CHECK(sq.at(0, 0) == doctest::Approx((0.027 - 0.001) / 3).epsilon(1e-14));
}

TEST_CASE("error norms") {
  const auto space = make_space(uniform_mesh(0.0, 2.0, 4, SubdivisionRule::RRSV, 2, BoundaryCondition::inflow_zero));
  const std::vector<double> mono{0.5, -1.0, 0.75};
  const auto st = integrals_of(space, mono);
  Problem p;
  p.exact = [&](double x, double) { return poly(mono, x); };
  const auto zero = error_norms(st, p, 0.0);
  CHECK(zero.l2 < 1e-13);
  CHECK(zero.linf < 1e-13);

  p.exact = [&](double x, double) { return poly(mono, x) + 0.25; };
  const auto off = error_norms(st, p, 0.0);
  CHECK(off.l2 == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(off.linf == doctest::Approx(0.25).epsilon(1e-12));

  Problem missing;
  CHECK_THROWS(error_norms(st, missing, 0.0));

  // projection of sin with k = 2 on 32 cells: h^3-scale error around 1e-4
  Problem s;
  s.initial = [](double x) { return std::sin(x); };
  s.exact = [](double x, double) { return std::sin(x); };
  const auto proj = project_initial(s, periodic_space(SubdivisionRule::RRSV, 2, 32));
  const double l2 = error_norms(proj, s, 0.0).l2;
  CHECK(l2 > 1e-4 / 3);
  CHECK(l2 < 1e-4 * 3);
}

TEST_CASE("conservation under Euler updates") {
  const auto space = periodic_space(SubdivisionRule::LSV, 3, 12);
  Problem p;
  p.initial = [](double x) { return std::exp(std::sin(x)); };
  auto st = project_initial(p, space);
  const double mass = st.total_mass();
  for (int n = 0; n < 20; ++n) {
    const auto F = apply_L(st, p, 0.0);
    for (std::size_t q = 0; q < F.size(); ++q) st.values[q] += 0.01 * F[q];
    CHECK(std::abs(st.total_mass() - mass) < 1e-12);
  }
}

TEST_CASE("snapshot export") {
  Problem p;
  p.initial = [](double x) { return x; };
  const auto st = project_initial(p, periodic_space(SubdivisionRule::LSV, 1, 3, 0.0, 3.0));
  std::ostringstream os;
  write_snapshot(os, st, 4);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header.rfind("# t=", 0) == 0);
  int records = 0;
  double x = 0.0;
  double u = 0.0;
  while (is >> x >> u) {
    CHECK(u == doctest::Approx(x).epsilon(1e-12));
    ++records;
  }
  CHECK(records == 12);
}
