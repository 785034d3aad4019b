#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "efdyn/energies.hpp"
#include "efdyn/errors.hpp"

using namespace efdyn;
using Catch::Approx;

namespace {

std::mt19937 gen(17);
double U() { return std::uniform_real_distribution<double>(0, 1)(gen); }

// (u'', v'') from the radial equations at a state
std::array<double, 2> second_derivatives(const SystemParams& P, const RadialState& s) {
  const double r = s.r;
  auto one = [&](double p, double a, double e, double du, double src) {
    const double phi = std::copysign(std::pow(std::fabs(du), p - 1), du);
    const double dphi = -(P.N - 1) / r * phi - e * std::pow(r, a) * src;
    return dphi / ((p - 1) * std::pow(std::fabs(du), p - 2));
  };
  return {one(P.p, P.a, P.eps1, s.du, std::pow(s.u, P.s) * std::pow(s.v, P.delta)),
          one(P.q, P.b, P.eps2, s.dv, std::pow(s.u, P.mu) * std::pow(s.v, P.m))};
}

// dE/dr along the solution through `s`, by central differences on the tangent line
// corrected to second order with the equation.
double fd_derivative(const EnergySpec& e, const SystemParams& P, const RadialState& s) {
  const auto dd = second_derivatives(P, s);
  auto at = [&](double h) {
    RadialState x = s;
    x.r += h;
    x.u += h * s.du + 0.5 * h * h * dd[0];
    x.v += h * s.dv + 0.5 * h * h * dd[1];
    x.du += h * dd[0];
    x.dv += h * dd[1];
    return energy_value(e, P, x);
  };
  // step resolves the fastest of r, u', v'
  const double h = 1e-4 * std::min({s.r, std::fabs(s.du / dd[0]), std::fabs(s.dv / dd[1])});
  // Richardson extrapolation on the symmetric quotient
  const double d1 = (at(h) - at(-h)) / (2 * h);
  const double d2 = (at(h / 2) - at(-h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

RadialState random_state() {
  return {0.3 + 2 * U(), 0.3 + 2 * U(), 0.3 + 2 * U(), -(0.1 + U()), -(0.1 + U())};
}

SystemParams laplacian(double N, double delta, double mu) {
  SystemParams P;
  P.N = N;
  P.delta = delta;
  P.mu = mu;
  return P;
}

void check_forms(const EnergySpec& e, const SystemParams& P, int draws) {
  for (int k = 0; k < draws; ++k) {
    const RadialState s = random_state();
    const PhaseState ps = to_phase(P, s);
    const double Er = energy_value(e, P, s), Ep = energy_value(e, P, ps);
    CHECK(Ep == Approx(Er).epsilon(1e-9).margin(1e-12));
    const double dr = energy_derivative(e, P, s), dp = energy_derivative(e, P, ps);
    CHECK(dp == Approx(dr).epsilon(1e-9).margin(1e-12));
    const double fd = fd_derivative(e, P, s);
    INFO(to_string(e.kind) << " N=" << P.N << " p=" << P.p << " q=" << P.q << " s=" << P.s << " m=" << P.m << " delta=" << P.delta << " mu=" << P.mu << " a=" << P.a);
    const double scale = std::fabs(Er) / s.r + std::fabs(dr);
    CHECK(std::fabs(fd - dr) <= 1e-6 * std::max(scale, 1e-12));
  }
}

} // namespace

TEST_CASE("Hamiltonian energy: phase form, derivative") {
  for (int k = 0; k < 10; ++k) {
    SystemParams P = laplacian(3 + 4 * U(), 0.5 + 3 * U(), 0.5 + 3 * U());
    P.a = U() - 0.3;
    P.b = U() - 0.3;
    check_forms(EnergySpec::hamiltonian(), P, 10);
  }
}

TEST_CASE("nonvariational energies: phase form, derivative") {
  for (int k = 0; k < 10; ++k) {
    SystemParams P = laplacian(3 + 4 * U(), 0.5 + 3 * U(), 0.5 + 3 * U());
    P.s = P.m = 0.1 + U();
    P.a = P.b = U() - 0.3;
    check_forms(EnergySpec::nonvariational(P), P, 8);
    check_forms(EnergySpec::nonvariational(U(), U(), 3 * U(), 3 * U()), P, 8);
    check_forms(EnergySpec::phi(), P, 8);
  }
}

TEST_CASE("potential and system Pohozaev energies: phase form, derivative") {
  for (int k = 0; k < 10; ++k) {
    SystemParams P;
    P.N = 3 + 4 * U();
    P.p = 1.4 + (P.N - 1.6) * U();
    P.q = 1.4 + (P.N - 1.6) * U();
    P.s = U();
    P.m = U();
    P.delta = P.m + 1;
    P.mu = P.s + 1;
    P.a = P.b = U() - 0.3;
    if (std::fabs(discriminant(P)) < 1e-2) continue;
    check_forms(EnergySpec::potential(), P, 8);
    P.delta += U();
    check_forms(EnergySpec::system_pohozaev(), P, 8);
  }
}

TEST_CASE("energy families are enforced") {
  SystemParams P = laplacian(5, 2, 2);
  P.s = 0.3;
  P.m = 0.3;
  CHECK_THROWS_AS(energy_value(EnergySpec::hamiltonian(), P, random_state()), PreconditionViolated);
  P.p = 2.5;
  CHECK_THROWS_AS(energy_value(EnergySpec::phi(), P, random_state()), PreconditionViolated);
  CHECK_THROWS_AS(energy_value(EnergySpec::hamiltonian(), laplacian(5, 2, 2), RadialState{1, 0, 1, -1, -1}),
                  DegenerateState);
}

TEST_CASE("Hamiltonian energy vanishes on the explicit biharmonic ground state") {
  // N = 5, delta = 1, mu = 9 lies on H0; u = c (K+r^2)^{-1/2}, K^2 = c^8/105
  const SystemParams P = laplacian(5, 1, 9);
  CHECK(hamiltonian_coefficient(P) == Approx(0).margin(1e-15));
  const double c = 1.3, K = std::pow(c, 4) / std::sqrt(105.0);
  for (double r : {0.05, 0.5, 1.0, 3.0, 20.0}) {
    const double w = K + r * r;
    const RadialState s{r, c / std::sqrt(w), c * (5 * K + 2 * r * r) * std::pow(w, -2.5),
                        -c * r * std::pow(w, -1.5), -3 * c * r * (7 * K + 2 * r * r) * std::pow(w, -3.5)};
    // the closed form satisfies v'' = -(N-1)/r v' - u^9
    const auto dd = second_derivatives(P, s);
    const double h = 1e-4 * r;
    auto vAt = [&](double rr) { const double ww = K + rr * rr; return c * (5 * K + 2 * rr * rr) * std::pow(ww, -2.5); };
    const double vpp = (vAt(r + h) - 2 * vAt(r) + vAt(r - h)) / (h * h);
    CHECK(vpp == Approx(dd[1]).epsilon(1e-5));

    const PhaseState ps = to_phase(P, s);
    CHECK(ps.X == Approx(r * r / w).epsilon(1e-12));
    CHECK(3 * ps.X + ps.Z == Approx(5).epsilon(1e-12));
    const double scale = std::pow(r, P.N) * (std::fabs(s.du * s.dv) + std::pow(s.u, 10) / 10 +
                                             s.v * s.v / 2 + std::fabs(2.5 * s.v * s.du / r) +
                                             std::fabs(0.5 * s.u * s.dv / r));
    CHECK(std::fabs(energy_value(EnergySpec::hamiltonian(), P, s)) <= 1e-12 * scale);
  }
  const auto prof = predict_asymptotics(P);
  CHECK(prof.uExponent == Approx(1));
  CHECK(prof.vExponent == Approx(3));
  CHECK(prof.logTarget == LogTarget::None);
}

TEST_CASE("scalar Pohozaev energy vanishes on the explicit scalar ground state") {
  const ScalarParams S{3, 2, 0, 5, 1};
  const auto e = EnergySpec::scalar(0.5);
  for (double r : {0.1, 1.0, 7.0}) {
    const double u = std::pow(3.0, 0.25) / std::sqrt(1 + r * r);
    const double du = -std::pow(3.0, 0.25) * r * std::pow(1 + r * r, -1.5);
    const ScalarRadial rs{r, u, du};
    const double scale = std::pow(r, 3) * (du * du + std::pow(u, 6) / 6 + std::fabs(u * du / r));
    CHECK(std::fabs(energy_value(e, S, rs)) <= 1e-13 * scale);
    CHECK(std::fabs(energy_derivative(e, S, rs)) <= 1e-13 * scale / r);
    CHECK(energy_value(e, S, scalar_to_phase(S, rs)) == Approx(energy_value(e, S, rs)).margin(1e-13 * scale));
  }
}

TEST_CASE("region map and existence verdicts") {
  auto v = predict_existence(laplacian(6, 2, 2));
  CHECK(v.verdict == Verdict::GSExists);
  CHECK(v.source == "hamiltonian-critical-hyperbola");
  CHECK(classify_region(laplacian(6, 2, 2)).at(CurveKind::H0).side == Side::On);
  CHECK(classify_region(laplacian(6, 3, 3)).at(CurveKind::H0).side == Side::Above);
  v = predict_existence(laplacian(6, 1.5, 1.5));
  CHECK(v.verdict == Verdict::NoGSDirichletExists);
  CHECK(classify_region(laplacian(6, 1.5, 1.5)).at(CurveKind::H0).side == Side::Below);

  // potential system on line D: m = s = 1/2, N = 6
  SystemParams Pot = laplacian(6, 1.5, 1.5);
  Pot.s = Pot.m = 0.5;
  CHECK(potential_coefficient(Pot) == Approx(0).margin(1e-14));
  CHECK(classify_region(Pot).at(CurveKind::LineD).side == Side::On);
  v = predict_existence(Pot);
  CHECK(v.verdict == Verdict::GSExists);
  CHECK(v.source == "potential-critical-line");

  // nonvariational, s = m = 1/2, N = 6
  SystemParams Sn = laplacian(6, 2.5, 2.5);
  Sn.s = Sn.m = 0.5;
  v = predict_existence(Sn);
  CHECK(v.verdict == Verdict::GSExists);
  Sn.delta = Sn.mu = 0.9;
  v = predict_existence(Sn);
  CHECK(v.verdict == Verdict::NoGSDirichletExists);
  CHECK(v.source == "symmetric-reduction");
  Sn.delta = 0.8;
  Sn.mu = 1.0;
  v = predict_existence(Sn);
  CHECK(v.verdict == Verdict::NoGSDirichletExists);
  CHECK(v.source == "nonvariational-under-Zs");

  SystemParams bad = laplacian(6, 2, 2);
  bad.p = 7;
  CHECK(predict_existence(bad).verdict == Verdict::Unknown);
  CHECK_THROWS_AS(predict_asymptotics(laplacian(6, 3, 3)), NotCritical);
}

TEST_CASE("diagonal crossings of the s-curves") {
  SystemParams P = laplacian(6, 2, 2);
  P.s = P.m = 0.5;
  CHECK(diagonal_crossing(CurveKind::H0, P) == Approx(2));
  CHECK(diagonal_crossing(CurveKind::Hs, P) == Approx(1.5));
  CHECK(diagonal_crossing(CurveKind::Zs, P) == Approx(1));
  // Zs through the diagonal: 2/(delta+1) = (N-2)/(N-(N-2)s) at delta = 1
  P.delta = P.mu = 1;
  CHECK(classify_region(P).at(CurveKind::Zs).side == Side::On);
}

TEST_CASE("cubic B is positive where the Phi energy decreases") {
  SystemParams P = laplacian(6, 2.5, 2.5);
  P.s = P.m = 0.5;
  for (int i = 1; i < 20; ++i)
    for (int j = 1; j < 20; ++j) CHECK(cubic_B(P, 4.0 * i / 20, 4.0 * j / 20) > 0);
}
