#include "efdyn/model.hpp"

#include <cmath>
#include <sstream>

#include "efdyn/errors.hpp"
#include "efdyn/numerics.hpp"

namespace efdyn {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

} // namespace

SystemParams swapped(const SystemParams& P) {
  SystemParams S = P;
  S.p = P.q;
  S.q = P.p;
  S.delta = P.mu;
  S.mu = P.delta;
  S.s = P.m;
  S.m = P.s;
  S.a = P.b;
  S.b = P.a;
  S.eps1 = P.eps2;
  S.eps2 = P.eps1;
  return S;
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name);
  return out;
}

double discriminant(const SystemParams& P) {
  return P.delta * P.mu - (P.p - 1 - P.s) * (P.q - 1 - P.m);
}

ValidationReport validate_params(const SystemParams& P, Regime regime) {
  ValidationReport rep;
  rep.D = discriminant(P);
  auto add = [&](const std::string& name, bool ok, const std::string& detail) {
    rep.checks.push_back({name, ok, detail});
    rep.ok = rep.ok && ok;
  };
  const double vals[] = {P.N, P.p, P.q, P.a, P.b, P.s, P.m, P.delta, P.mu};
  bool finite = true;
  for (double v : vals) finite = finite && std::isfinite(v);
  add("finite parameters", finite, finite ? "all finite" : "non-finite entry");
  add("eps1 in {-1,+1}", P.eps1 == 1 || P.eps1 == -1, "eps1 = " + std::to_string(P.eps1));
  add("eps2 in {-1,+1}", P.eps2 == 1 || P.eps2 == -1, "eps2 = " + std::to_string(P.eps2));
  add("p != 1", P.p != 1.0, "p = " + fmt(P.p));
  add("q != 1", P.q != 1.0, "q = " + fmt(P.q));
  add("D != 0", rep.D != 0.0, "D = " + fmt(rep.D));
  if (regime == Regime::Source) {
    add("1 < p < N", P.p > 1 && P.p < P.N, "p = " + fmt(P.p) + ", N = " + fmt(P.N));
    add("1 < q < N", P.q > 1 && P.q < P.N, "q = " + fmt(P.q) + ", N = " + fmt(P.N));
    add("p + a > 0", P.p + P.a > 0, "p + a = " + fmt(P.p + P.a));
    add("q + b > 0", P.q + P.b > 0, "q + b = " + fmt(P.q + P.b));
    add("delta > 0", P.delta > 0, "delta = " + fmt(P.delta));
    add("mu > 0", P.mu > 0, "mu = " + fmt(P.mu));
    add("s >= 0", P.s >= 0, "s = " + fmt(P.s));
    add("m >= 0", P.m >= 0, "m = " + fmt(P.m));
    add("D > 0", rep.D > 0, "D = " + fmt(rep.D));
    add("eps1 = eps2 = +1", P.eps1 == 1 && P.eps2 == 1,
        "eps1 = " + std::to_string(P.eps1) + ", eps2 = " + std::to_string(P.eps2));
  }
  return rep;
}

DerivedExponents derive_exponents(const SystemParams& P) {
  const double D = discriminant(P);
  if (D == 0.0) throw ZeroDiscriminant("D = delta*mu - (p-1-s)(q-1-m) vanishes");
  DerivedExponents e;
  e.D = D;
  e.gamma = ((P.p + P.a) * (P.q - 1 - P.m) + (P.q + P.b) * P.delta) / D;
  e.xi = ((P.q + P.b) * (P.p - 1 - P.s) + (P.p + P.a) * P.mu) / D;
  e.pConj = P.p / (P.p - 1);
  e.qConj = P.q / (P.q - 1);
  return e;
}

double xbound(const SystemParams& P) { return (P.N - P.p) / (P.p - 1); }
double ybound(const SystemParams& P) { return (P.N - P.q) / (P.q - 1); }

Vec4 vector_field(const SystemParams& P, const Vec4& x) {
  // extended precision keeps the residual at catalog points down to coordinate rounding
  using L = long double;
  const L X = x[0], Y = x[1], Z = x[2], W = x[3];
  const L p1 = L(P.p) - 1, q1 = L(P.q) - 1;
  return {static_cast<double>(X * (X - (L(P.N) - P.p) / p1 + Z / p1)),
          static_cast<double>(Y * (Y - (L(P.N) - P.q) / q1 + W / q1)),
          static_cast<double>(Z * (L(P.N) + P.a - L(P.s) * X - L(P.delta) * Y - Z)),
          static_cast<double>(W * (L(P.N) + P.b - L(P.mu) * X - L(P.m) * Y - W))};
}

PhaseState to_phase(const SystemParams& P, const RadialState& rs) {
  if (!(rs.r > 0)) throw DegeneratePoint("radius must be positive");
  if (!(rs.u > 0) || !(rs.v > 0)) throw DegeneratePoint("u and v must be positive");
  if (rs.du == 0.0) throw DegeneratePoint("du = 0 lies outside the chart");
  if (rs.dv == 0.0) throw DegeneratePoint("dv = 0 lies outside the chart");
  const double lr = std::log(rs.r), lu = std::log(rs.u), lv = std::log(rs.v);
  PhaseState ps;
  ps.t = lr;
  ps.X = -rs.r * rs.du / rs.u;
  ps.Y = -rs.r * rs.dv / rs.v;
  ps.Z = -P.eps1 * sgn(rs.du) *
         std::exp((1 + P.a) * lr + P.s * lu + P.delta * lv + (1 - P.p) * std::log(std::fabs(rs.du)));
  ps.W = -P.eps2 * sgn(rs.dv) *
         std::exp((1 + P.b) * lr + P.mu * lu + P.m * lv + (1 - P.q) * std::log(std::fabs(rs.dv)));
  return ps;
}

RadialState from_phase(const SystemParams& P, const PhaseState& ps) {
  if (ps.X == 0.0 || ps.Y == 0.0 || ps.Z == 0.0 || ps.W == 0.0)
    throw ZeroCoordinate("from_phase needs X, Y, Z, W all nonzero");
  const auto e = derive_exponents(P);
  const double l1 = (P.p - 1) * std::log(std::fabs(ps.X)) + std::log(std::fabs(ps.Z));
  const double l2 = (P.q - 1) * std::log(std::fabs(ps.Y)) + std::log(std::fabs(ps.W));
  RadialState rs;
  rs.r = std::exp(ps.t);
  rs.u = std::exp(-e.gamma * ps.t + ((P.q - 1 - P.m) * l1 + P.delta * l2) / e.D);
  rs.v = std::exp(-e.xi * ps.t + (P.mu * l1 + (P.p - 1 - P.s) * l2) / e.D);
  rs.du = -ps.X * rs.u / rs.r;
  rs.dv = -ps.Y * rs.v / rs.r;
  return rs;
}

PhaseState Rescaling::map(const PhaseState& s) const {
  return {s.t / k, k * s.X, k * s.Y, k * s.Z, k * s.W};
}

Rescaling rescale_system(const SystemParams& P, double k) {
  const double tol = numerics().identityTol;
  if (!near(P.p, P.q, tol)) throw PreconditionViolated("rescaling needs p = q");
  if (!near(P.a, P.b, tol)) throw PreconditionViolated("rescaling needs a = b");
  if (k == 0.0) throw PreconditionViolated("rescaling factor k must be nonzero");
  Rescaling R;
  R.k = k;
  R.params = P;
  R.params.N = P.p + k * (P.N - P.p);
  R.params.a = k * (P.N + P.a) - R.params.N;
  R.params.b = R.params.a;
  return R;
}

Rescaling eliminate_weight(const SystemParams& P) {
  if (P.p + P.a == 0.0) throw PreconditionViolated("p + a = 0");
  return rescale_system(P, P.p / (P.p + P.a));
}

Rescaling reduce_to_dimension_one(const SystemParams& P) {
  if (P.N == P.p) throw PreconditionViolated("N = p");
  return rescale_system(P, -(P.p - 1) / (P.N - P.p));
}

ScalarThresholds scalar_thresholds(const ScalarParams& S) {
  return {(S.N + S.a) * (S.p - 1) / (S.N - S.p),
          (S.N * (S.p - 1) + S.p + S.p * S.a) / (S.N - S.p)};
}

double scalar_gamma(const ScalarParams& S) {
  const double den = S.Q + 1 - S.p;
  if (den == 0.0) throw PreconditionViolated("Q = p - 1");
  return (S.p + S.a) / den;
}

SystemParams embed_scalar(const ScalarParams& S) {
  SystemParams P;
  P.N = S.N;
  P.p = P.q = S.p;
  P.a = P.b = S.a;
  P.s = P.m = 0.0;
  P.delta = P.mu = S.Q;
  P.eps1 = P.eps2 = S.eps;
  return P;
}

std::array<double, 2> scalar_field(const ScalarParams& S, double X, double Z) {
  return {X * (X - (S.N - S.p) / (S.p - 1) + Z / (S.p - 1)), Z * (S.N + S.a - S.Q * X - Z)};
}

ScalarPhase scalar_to_phase(const ScalarParams& S, const ScalarRadial& rs) {
  if (!(rs.r > 0)) throw DegeneratePoint("radius must be positive");
  if (rs.u == 0.0) throw DegeneratePoint("u = 0 lies outside the chart");
  if (rs.du == 0.0) throw DegeneratePoint("du = 0 lies outside the chart");
  ScalarPhase ps;
  ps.t = std::log(rs.r);
  ps.X = -rs.r * rs.du / rs.u;
  ps.Z = -S.eps * sgn(rs.u) * sgn(rs.du) *
         std::exp((1 + S.a) * ps.t + S.Q * std::log(std::fabs(rs.u)) +
                  (1 - S.p) * std::log(std::fabs(rs.du)));
  return ps;
}

ScalarRadial scalar_from_phase(const ScalarParams& S, const ScalarPhase& ps) {
  if (ps.X == 0.0 || ps.Z == 0.0) throw ZeroCoordinate("scalar_from_phase needs X, Z nonzero");
  const double g = scalar_gamma(S);
  ScalarRadial rs;
  rs.r = std::exp(ps.t);
  const double l = (S.p - 1) * std::log(std::fabs(ps.X)) + std::log(std::fabs(ps.Z));
  rs.u = std::exp(-g * ps.t + l / (S.Q + 1 - S.p));
  rs.du = -ps.X * rs.u / rs.r;
  return rs;
}

} // namespace efdyn
