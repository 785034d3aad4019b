#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <random>

#include "efdyn/equilibria.hpp"
#include "efdyn/errors.hpp"

using namespace efdyn;
using Catch::Approx;

namespace {

SystemParams random_source(std::mt19937& gen) {
  std::uniform_real_distribution<double> U(0, 1);
  for (;;) {
    SystemParams P;
    P.N = 3 + 5 * U(gen);
    P.p = 1.2 + (P.N - 1.4) * U(gen);
    P.q = 1.2 + (P.N - 1.4) * U(gen);
    P.a = U(gen) - 0.5 * U(gen);
    P.b = U(gen) - 0.5 * U(gen);
    P.s = 2 * U(gen);
    P.m = 2 * U(gen);
    P.delta = 0.2 + 4 * U(gen);
    P.mu = 0.2 + 4 * U(gen);
    if (validate_params(P, Regime::Source).ok) return P;
  }
}

// Kolmogorov structure: on the face where the coordinates in `mask` are nonzero,
// the equilibrium solves the linear growth-factor equations for those indices.
std::optional<Vec4> face_equilibrium(const SystemParams& P, unsigned mask) {
  Eigen::Matrix4d A;
  Eigen::Vector4d c;
  A << 1, 0, 1 / (P.p - 1), 0,   //
      0, 1, 0, 1 / (P.q - 1),    //
      P.s, P.delta, 1, 0,        //
      P.mu, P.m, 0, 1;
  c << (P.N - P.p) / (P.p - 1), (P.N - P.q) / (P.q - 1), P.N + P.a, P.N + P.b;
  std::vector<int> idx;
  for (int i = 0; i < 4; ++i)
    if (mask & (1u << i)) idx.push_back(i);
  Vec4 out{0, 0, 0, 0};
  if (idx.empty()) return out;
  Eigen::MatrixXd S(idx.size(), idx.size());
  Eigen::VectorXd rhs(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    rhs(i) = c(idx[i]);
    for (std::size_t j = 0; j < idx.size(); ++j) S(i, j) = A(idx[i], idx[j]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::VectorXd x = lu.solve(rhs);
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = x(i);
  return out;
}

unsigned support(const Vec4& v) {
  unsigned m = 0;
  for (int i = 0; i < 4; ++i)
    if (v[i] != 0.0) m |= 1u << i;
  return m;
}

} // namespace

TEST_CASE("catalog equals the sixteen face equilibria of the Kolmogorov system") {
  std::mt19937 gen(11);
  for (int k = 0; k < 300; ++k) {
    const auto P = random_source(gen);
    const auto cat = fixed_point_catalog(P);
    REQUIRE(cat.size() == 16);
    std::map<unsigned, Vec4> byFace;
    for (const auto& fp : cat) {
      if (!fp.defined) continue;
      byFace[support(fp.coords)] = fp.coords;
    }
    for (unsigned mask = 0; mask < 16; ++mask) {
      const auto ref = face_equilibrium(P, mask);
      if (!ref) continue;
      if (support(*ref) != mask) continue; // a coordinate vanished by accident
      REQUIRE(byFace.count(mask) == 1);
      for (int i = 0; i < 4; ++i) {
        const double scale = std::max(1.0, std::fabs((*ref)[i]));
        CHECK(std::fabs(byFace[mask][i] - (*ref)[i]) <= 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("catalog points for the critical Hamiltonian system") {
  SystemParams P;
  P.N = 6;
  P.delta = P.mu = 2;
  const auto M0 = fixed_point(P, Label::M0);
  CHECK(M0.coords[0] == Approx(2));
  CHECK(M0.coords[1] == Approx(2));
  CHECK(M0.coords[2] == Approx(2));
  CHECK(M0.coords[3] == Approx(2));
  CHECK(M0.admissible);
  const auto A0 = fixed_point(P, Label::A0);
  CHECK(A0.coords == Vec4{4, 4, 0, 0});
  CHECK(fixed_point(P, Label::N0).coords == Vec4{0, 0, 6, 6});
  for (const auto& fp : fixed_point_catalog(P))
    if (fp.defined)
      for (double f : vector_field(P, fp.coords)) CHECK(std::fabs(f) < 1e-12);
}

TEST_CASE("exchange symmetry maps each point to its partner") {
  std::mt19937 gen(3);
  for (int k = 0; k < 100; ++k) {
    const auto P = random_source(gen);
    const auto Q = swapped(P);
    for (Label l : kAllLabels) {
      const auto a = fixed_point(P, l);
      const auto b = fixed_point(Q, partner(l));
      REQUIRE(a.defined == b.defined);
      if (!a.defined) continue;
      const auto c = swap_coords(b.coords);
      for (int i = 0; i < 4; ++i) CHECK(a.coords[i] == Approx(c[i]).epsilon(1e-12).margin(1e-12));
    }
  }
}

TEST_CASE("undefined points carry a reason") {
  SystemParams P;
  P.N = 5;
  P.q = 2.5;
  P.m = 1.5; // q - 1 - m = 0
  P.delta = 1.3;
  P.mu = 1.1;
  const auto p0 = fixed_point(P, Label::P0);
  CHECK_FALSE(p0.defined);
  CHECK(p0.notes.find("q-1-m") != std::string::npos);
}

TEST_CASE("label names round trip") {
  for (Label l : kAllLabels) {
    const auto back = label_from_string(to_string(l));
    REQUIRE(back);
    CHECK(*back == l);
    CHECK(partner(partner(l)) == l);
  }
  CHECK_FALSE(label_from_string("Z9"));
}

TEST_CASE("power solution solves the radial system") {
  std::mt19937 gen(5);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const auto P = random_source(gen);
    PowerSolution ps;
    try {
      ps = particular_solution(P);
    } catch (const NotApplicable&) {
      continue;
    }
    ++checked;
    // -Δ_p (A r^-g) = (gA)^{p-1} (N-p-g(p-1)) r^{-1-(g+1)(p-1)}
    const double g = ps.gamma, x = ps.xi;
    const double lhsU = std::pow(g * ps.A, P.p - 1) * (P.N - P.p - g * (P.p - 1));
    const double rhsU = std::pow(ps.A, P.s) * std::pow(ps.B, P.delta);
    CHECK(lhsU == Approx(rhsU).epsilon(1e-9));
    CHECK(-1 - (g + 1) * (P.p - 1) == Approx(P.a - g * P.s - x * P.delta).epsilon(1e-10));
    const double lhsV = std::pow(x * ps.B, P.q - 1) * (P.N - P.q - x * (P.q - 1));
    const double rhsV = std::pow(ps.A, P.mu) * std::pow(ps.B, P.m);
    CHECK(lhsV == Approx(rhsV).epsilon(1e-9));
  }
  CHECK(checked > 20);

  SystemParams H;
  H.N = 6;
  H.delta = H.mu = 2;
  const auto ps = particular_solution(H);
  CHECK(ps.A == Approx(4));
  CHECK(ps.B == Approx(4));
}

TEST_CASE("admissibility names violated inequalities") {
  SystemParams P;
  P.N = 6;
  P.delta = P.mu = 1.5; // subcritical: gamma = xi = 4 = Ap, M0 sits on Z = 0
  const auto m0 = fixed_point(P, Label::M0);
  const auto rep = admissibility(m0, P);
  CHECK_FALSE(rep.admissible);
  CHECK_FALSE(rep.violations.empty());
}
