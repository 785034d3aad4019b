#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "efdyn/errors.hpp"
#include "efdyn/spectra.hpp"

using namespace efdyn;
using Catch::Approx;

namespace {

SystemParams random_standing(std::mt19937& gen) {
  std::uniform_real_distribution<double> U(0, 1);
  for (;;) {
    SystemParams P;
    P.N = 3 + 5 * U(gen);
    P.p = 1.2 + (P.N - 1.4) * U(gen);
    P.q = 1.2 + (P.N - 1.4) * U(gen);
    P.a = U(gen) - 0.5;
    P.b = U(gen) - 0.5;
    P.s = 2 * U(gen);
    P.m = 2 * U(gen);
    P.delta = 0.2 + 4 * U(gen);
    P.mu = 0.2 + 4 * U(gen);
    if (validate_params(P, Regime::Source).ok) return P;
  }
}

SystemParams hamiltonian(double N, double delta, double mu) {
  SystemParams P;
  P.N = N;
  P.delta = delta;
  P.mu = mu;
  return P;
}

Mat4 fd_jacobian(const SystemParams& P, const Vec4& x) {
  Mat4 J;
  for (int j = 0; j < 4; ++j) {
    const double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
    Vec4 a = x, b = x;
    a[j] += h;
    b[j] -= h;
    const Vec4 fa = vector_field(P, a), fb = vector_field(P, b);
    for (int i = 0; i < 4; ++i) J(i, j) = (fa[i] - fb[i]) / (2 * h);
  }
  return J;
}

} // namespace

TEST_CASE("analytic Jacobian matches central differences") {
  std::mt19937 gen(21);
  for (int k = 0; k < 100; ++k) {
    const auto P = random_standing(gen);
    const Vec4 x{0.3 + gen() % 7 * 0.1, 0.5, 1.7, 2.2};
    const Mat4 J = jacobian_at(P, x), F = fd_jacobian(P, x);
    CHECK((J - F).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, J.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("critical Hamiltonian quartic has roots +-2 sqrt 3 and +-2i") {
  const auto P = hamiltonian(6, 2, 2);
  const auto q = m0_characteristic(P);
  CHECK(q.E == Approx(0).margin(1e-12));
  CHECK(q.G == Approx(0).margin(1e-12));
  const auto r = quartic_roots(q);
  const double s = 2 * std::sqrt(3.0);
  std::array<cplx, 4> expect{cplx(-s, 0), cplx(0, -2), cplx(0, 2), cplx(s, 0)};
  CHECK(eigenvalue_mismatch(r, expect) < 1e-12);
  CHECK(eigenvalue_mismatch(r, numeric_eigenvalues(fd_jacobian(P, fixed_point(P, Label::M0).coords))) < 1e-7);
  const auto sp = spectrum_at(P, fixed_point(P, Label::M0));
  CHECK(sp.stableDim == 1);
  CHECK(sp.unstableDim == 1);
  CHECK(sp.centerDim == 2);
  const auto osc = oscillation_condition(P);
  CHECK(osc.imaginaryPair);
  CHECK(osc.numericImaginary);
  CHECK(osc.branch == OscBranch::CaseI);
  CHECK(osc.hsApplicable);
  CHECK(osc.onHs);
}

TEST_CASE("closed-form spectra agree with the Jacobian everywhere in the catalog") {
  std::mt19937 gen(8);
  int n = 0;
  for (int k = 0; k < 300; ++k) {
    const auto P = random_standing(gen);
    for (const auto& fp : fixed_point_catalog(P)) {
      if (!fp.defined || fp.nearDegenerate) continue;
      const auto sp = spectrum_at(P, fp);
      const auto ref = numeric_eigenvalues(fd_jacobian(P, fp.coords));
      CHECK(eigenvalue_mismatch(sp.eigenvalues, ref) < 1e-5);
      CHECK(sp.stableDim + sp.unstableDim + sp.centerDim == 4);
      ++n;
    }
  }
  CHECK(n > 3000);
}

TEST_CASE("polynomial roots") {
  std::vector<cplx> r = polynomial_roots({-6, 11, -6});
  REQUIRE(r.size() == 3);
  CHECK(r[0].real() == Approx(1));
  CHECK(r[1].real() == Approx(2));
  CHECK(r[2].real() == Approx(3));
  for (auto z : r) CHECK(z.imag() == Approx(0).margin(1e-12));
  r = polynomial_roots({1, 0});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(r[1] - cplx(0, 1)) < 1e-14);
  // double root
  r = polynomial_roots({4, -4});
  CHECK(std::abs(r[0] - 2.0) < 1e-7);
  CHECK(std::abs(r[1] - 2.0) < 1e-7);
}

TEST_CASE("non-oscillating M0 away from the critical hyperbola") {
  const auto P = hamiltonian(6, 3, 3);
  const auto osc = oscillation_condition(P);
  CHECK_FALSE(osc.imaginaryPair);
  CHECK_FALSE(osc.onHs);
}

TEST_CASE("local verdicts at N0, A0 and M0") {
  const auto P = hamiltonian(6, 2, 2);
  const auto n0 = local_verdicts(P, fixed_point(P, Label::N0));
  REQUIRE(n0.size() == 2);
  CHECK(n0[0].direction == Direction::TowardZero);
  CHECK(n0[0].exists == Existence::Yes);
  CHECK(n0[1].exists == Existence::No);

  const auto a0 = local_verdicts(P, fixed_point(P, Label::A0));
  CHECK(a0[0].exists == Existence::No);
  CHECK(a0[1].exists == Existence::Yes);
  CHECK(a0[1].profile.uExponent == Approx(4));

  const auto m0 = local_verdicts(P, fixed_point(P, Label::M0));
  CHECK(m0[0].exists == Existence::Yes);
  CHECK(m0[1].exists == Existence::Yes);
  CHECK(m0[1].profile.uExponent == Approx(2));

  // subcritical: M0 merges with A0 on Z = W = 0
  const auto Q = hamiltonian(6, 1.5, 1.5);
  const auto m0b = local_verdicts(Q, fixed_point(Q, Label::M0));
  CHECK(m0b[0].exists != Existence::Yes);
}

TEST_CASE("undefined points are rejected") {
  SystemParams P;
  P.N = 4;
  P.delta = 0.5;
  P.mu = 2;
  const auto m0 = fixed_point(P, Label::M0);
  CHECK_FALSE(m0.defined);
  CHECK_THROWS_AS(spectrum_at(P, m0), UndefinedPoint);
  CHECK_THROWS_AS(local_verdicts(P, m0), UndefinedPoint);
}
