#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "efdyn/errors.hpp"
#include "efdyn/model.hpp"

using namespace efdyn;
using Catch::Approx;

namespace {

SystemParams hamiltonian(double N, double delta, double mu) {
  SystemParams P;
  P.N = N;
  P.delta = delta;
  P.mu = mu;
  return P;
}

} // namespace

TEST_CASE("derived exponents of the Hamiltonian system") {
  const auto e = derive_exponents(hamiltonian(6, 2, 2));
  CHECK(e.D == Approx(3));
  CHECK(e.gamma == Approx(2));
  CHECK(e.xi == Approx(2));
  // gamma = 2(delta+1)/(delta mu - 1)
  const auto f = derive_exponents(hamiltonian(6, 3, 3));
  CHECK(f.gamma == Approx(1));
  CHECK(f.xi == Approx(1));
  const auto g = derive_exponents(hamiltonian(5, 1.5, 3));
  CHECK(g.gamma == Approx(2 * 2.5 / 3.5));
  CHECK(g.xi == Approx(2 * 4.0 / 3.5));
}

TEST_CASE("zero discriminant is rejected") {
  SystemParams P;
  P.N = 4;
  P.delta = 0.5;
  P.mu = 2; // delta mu = 1 = (p-1-s)(q-1-m)
  CHECK(discriminant(P) == Approx(0).margin(1e-15));
  CHECK_THROWS_AS(derive_exponents(P), ZeroDiscriminant);
}

TEST_CASE("validation names the failing inequalities") {
  SystemParams P = hamiltonian(6, 2, 2);
  CHECK(validate_params(P, Regime::Source).ok);
  P.p = 7;
  P.s = -0.5;
  const auto rep = validate_params(P, Regime::Source);
  CHECK_FALSE(rep.ok);
  const auto f = rep.failures();
  CHECK(std::find(f.begin(), f.end(), "1 < p < N") != f.end());
  CHECK(std::find(f.begin(), f.end(), "s >= 0") != f.end());
  CHECK(validate_params(P, Regime::Standing).ok);
}

TEST_CASE("explicit scalar ground state maps to X = r^2/(1+r^2), Z = 3/(1+r^2)") {
  // u = 3^{1/4} (1+r^2)^{-1/2} solves -Δu = u^5 in R^3; embed with u = v
  ScalarParams S{3, 2, 0, 5, 1};
  const SystemParams P = embed_scalar(S);
  for (double r : {1e-2, 0.3, 1.0, 4.0, 50.0}) {
    const double u = std::pow(3.0, 0.25) / std::sqrt(1 + r * r);
    const double du = -std::pow(3.0, 0.25) * r * std::pow(1 + r * r, -1.5);
    const auto ps = to_phase(P, RadialState{r, u, u, du, du});
    CHECK(ps.X == Approx(r * r / (1 + r * r)).epsilon(1e-13));
    CHECK(ps.Z == Approx(3 / (1 + r * r)).epsilon(1e-13));
    CHECK(ps.Y == Approx(ps.X).epsilon(1e-15));
    CHECK(ps.W == Approx(ps.Z).epsilon(1e-15));
    const auto sp = scalar_to_phase(S, ScalarRadial{r, u, du});
    CHECK(sp.X == Approx(ps.X).epsilon(1e-14));
    CHECK(sp.Z == Approx(ps.Z).epsilon(1e-13));
    // dX/dt = 2 r^2 / (1+r^2)^2 and dZ/dt = -6 r^2/(1+r^2)^2 along the curve
    const auto f = vector_field(P, ps);
    const double w = r * r / ((1 + r * r) * (1 + r * r));
    // growth factors cancel terms of size ~N+a, so compare on that scale
    CHECK(f[0] == Approx(2 * w).epsilon(1e-12).margin(1e-14));
    CHECK(f[2] == Approx(-6 * w).epsilon(1e-12).margin(1e-14));
  }
  const double u1 = std::pow(3.0, 0.25) / std::sqrt(2.0);
  const auto at1 = to_phase(P, RadialState{1, u1, u1, -u1 / 2, -u1 / 2});
  CHECK(at1.X == Approx(0.5));
  CHECK(at1.Z == Approx(1.5));
}

TEST_CASE("phase chart round trip") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 200; ++k) {
    SystemParams P;
    P.N = 3 + 4 * U(gen);
    P.p = 1.3 + (P.N - 1.5) * U(gen);
    P.q = 1.3 + (P.N - 1.5) * U(gen);
    P.a = U(gen) - 0.4;
    P.b = U(gen) - 0.4;
    P.s = U(gen);
    P.m = U(gen);
    P.delta = 0.5 + 3 * U(gen);
    P.mu = 0.5 + 3 * U(gen);
    if (std::fabs(discriminant(P)) < 1e-3) continue;
    RadialState rs{0.1 + 5 * U(gen), 0.2 + 2 * U(gen), 0.2 + 2 * U(gen), -(0.05 + U(gen)), -(0.05 + U(gen))};
    const auto back = from_phase(P, to_phase(P, rs));
    CHECK(back.r == Approx(rs.r).epsilon(1e-12));
    CHECK(back.u == Approx(rs.u).epsilon(1e-9));
    CHECK(back.v == Approx(rs.v).epsilon(1e-9));
    CHECK(back.du == Approx(rs.du).epsilon(1e-9));
    CHECK(back.dv == Approx(rs.dv).epsilon(1e-9));
  }
}

TEST_CASE("chart rejects points off the admissible domain") {
  const SystemParams P = hamiltonian(6, 2, 2);
  CHECK_THROWS_AS(to_phase(P, RadialState{1, 0, 1, -1, -1}), DegeneratePoint);
  CHECK_THROWS_AS(to_phase(P, RadialState{1, 1, 1, 0, -1}), DegeneratePoint);
  CHECK_THROWS_AS(from_phase(P, PhaseState{0, 1, 0, 1, 1}), ZeroCoordinate);
}

TEST_CASE("vector field matches the derivative of the chart along the power solution") {
  // u = A r^-gamma, v = B r^-xi with A = B = 4 for N = 6, delta = mu = 2
  const SystemParams P = hamiltonian(6, 2, 2);
  for (double r : {0.5, 2.0, 10.0}) {
    const RadialState rs{r, 4 / (r * r), 4 / (r * r), -8 / (r * r * r), -8 / (r * r * r)};
    const auto ps = to_phase(P, rs);
    CHECK(ps.X == Approx(2));
    CHECK(ps.Z == Approx(2));
    for (double f : vector_field(P, ps)) CHECK(std::fabs(f) < 1e-12);
  }
}

TEST_CASE("rescaling multiplies the field by k^2 on the mapped point") {
  SystemParams P = hamiltonian(5, 1.7, 2.3);
  P.a = P.b = 0.6;
  const auto R = eliminate_weight(P);
  CHECK(R.params.a == Approx(0).margin(1e-14));
  const PhaseState s{0.3, 0.7, 0.9, 2.1, 1.4};
  const auto f = vector_field(P, s);
  const auto g = vector_field(R.params, R.map(s));
  for (int i = 0; i < 4; ++i) CHECK(g[i] == Approx(R.k * R.k * f[i]).epsilon(1e-12));
  const auto one = reduce_to_dimension_one(P);
  CHECK(one.params.N == Approx(1));
}

TEST_CASE("scalar thresholds and embedding") {
  ScalarParams S{3, 2, 0, 4, 1};
  const auto th = scalar_thresholds(S);
  CHECK(th.Q1 == Approx(3));
  CHECK(th.Q2 == Approx(5));
  CHECK(scalar_gamma(S) == Approx(2.0 / 3.0));
  const auto P = embed_scalar(S);
  CHECK(P.delta == 4);
  CHECK(P.mu == 4);
  CHECK(P.s == 0);
  // the diagonal X = Y, Z = W carries the scalar field
  const auto f = vector_field(P, Vec4{0.4, 0.4, 1.1, 1.1});
  const auto g = scalar_field(S, 0.4, 1.1);
  CHECK(f[0] == Approx(g[0]));
  CHECK(f[2] == Approx(g[1]));
  CHECK_THROWS_AS(scalar_gamma(ScalarParams{3, 2, 0, 1, 1}), PreconditionViolated);
}

TEST_CASE("swap is an involution") {
  SystemParams P = hamiltonian(5, 1.2, 3.4);
  P.p = 1.7;
  P.s = 0.2;
  P.eps2 = -1;
  CHECK(swapped(swapped(P)) == P);
  CHECK(swapped(P).delta == 3.4);
  CHECK(swapped(P).eps1 == -1);
}
