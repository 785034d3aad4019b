#include "efdyn/energies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "efdyn/equilibria.hpp"
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

bool eq(double a, double b) { return near(a, b, numerics().identityTol); }

double apow(double x, double e) { return std::pow(std::fabs(x), e); }

// |x|^{k-2} x
double spow(double x, double k) { return x == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(x), k - 1), x); }

bool nonvariational_family(const SystemParams& P) {
  return eq(P.p, 2) && eq(P.q, 2) && eq(P.s, P.m) && eq(P.a, P.b);
}

bool hamiltonian_family(const SystemParams& P) {
  return eq(P.p, 2) && eq(P.q, 2) && P.s == 0.0 && P.m == 0.0;
}

bool potential_family(const SystemParams& P) {
  return eq(P.delta, P.m + 1) && eq(P.mu, P.s + 1) && eq(P.a, P.b);
}

// Effective dimension after removing the common weight r^a (p = q = 2).
double nhat(const SystemParams& P) { return 2 * (P.N + P.a) / (2 + P.a); }

void need_positive(const RadialState& rs) {
  if (!(rs.r > 0)) throw DegenerateState("radius must be positive");
  if (!(rs.u > 0) || !(rs.v > 0)) throw DegenerateState("u and v must be positive");
}

PhaseState phase_of(const SystemParams& P, const RadialState& rs) {
  try {
    return to_phase(P, rs);
  } catch (const DegeneratePoint& e) {
    throw DegenerateState(e.what());
  }
}

void need_nonzero(const PhaseState& ps) {
  if (ps.X == 0.0 || ps.Y == 0.0 || ps.Z == 0.0 || ps.W == 0.0)
    throw DegenerateState("phase form needs X, Y, Z, W nonzero");
}

double psi0(const EnergySpec& e, const PhaseState& s) {
  return s.X * s.Y + e.alpha * s.W * s.Y + e.beta * s.Z * s.X - e.sigma * s.X - e.theta * s.Y;
}

// r^{3-N}(uv)^{-1} E_N'
double nonvar_rate(const EnergySpec& e, const SystemParams& P, const PhaseState& s) {
  const double X = s.X, Y = s.Y, Z = s.Z, W = s.W, Na = P.N + P.a;
  return (e.sigma + e.theta - (P.N - 2)) * X * Y + (e.alpha * Na - e.theta) * Y * W +
         (e.beta * Na - e.sigma) * X * Z - (e.alpha * (P.mu + 1) - 1) * X * Y * W -
         (e.beta * (P.delta + 1) - 1) * X * Y * Z - e.alpha * P.s * Y * Y * W -
         e.beta * P.s * X * X * Z;
}

EnergySpec phi_params(const SystemParams& P) {
  EnergySpec e = EnergySpec::phi();
  e.alpha = 1 / (P.mu + 1);
  e.beta = 1 / (P.delta + 1);
  e.theta = (P.N + P.a) * e.alpha;
  e.sigma = (P.N + P.a) * e.beta;
  return e;
}

// r^{N-(gamma+1)p} X^lx Y^ly Z^{ez+dz} W^{ew+dw}: psi ZW times Z^{dz} W^{dw}, where
// psi = r^{N+a} u^{s+1} v^{m+1} / (ZW) in monomial form. A zero base with a positive
// exponent wins over any singular factor.
double potential_monomial(const SystemParams& P, const PhaseState& s, double dz, double dw) {
  const double p = P.p, q = P.q, D = discriminant(P);
  const auto ex = derive_exponents(P);
  const double eZ = 1 + p * (q - P.m - 1) / D + dz, eW = 1 + q * (p - P.s - 1) / D + dw;
  const double lx = q * (P.s + 1) * (p - 1) / D, ly = p * (P.m + 1) * (q - 1) / D;
  if ((s.Z == 0.0 && eZ > 0) || (s.W == 0.0 && eW > 0)) return 0.0;
  const double rpow = P.N - (ex.gamma + 1) * p;
  return std::exp(rpow * s.t) * apow(s.X, lx) * apow(s.Y, ly) * apow(s.Z, eZ) * apow(s.W, eW);
}

} // namespace

std::string_view to_string(EnergyKind k) {
  switch (k) {
  case EnergyKind::ScalarPohozaev: return "ScalarPohozaev";
  case EnergyKind::Hamiltonian: return "Hamiltonian";
  case EnergyKind::Nonvariational: return "Nonvariational";
  case EnergyKind::NonvariationalPhi: return "NonvariationalPhi";
  case EnergyKind::Potential: return "Potential";
  case EnergyKind::SystemPohozaev: return "SystemPohozaev";
  }
  return "?";
}

EnergySpec EnergySpec::scalar(double sigma) {
  EnergySpec e;
  e.kind = EnergyKind::ScalarPohozaev;
  e.sigma = sigma;
  return e;
}

EnergySpec EnergySpec::hamiltonian() {
  EnergySpec e;
  e.kind = EnergyKind::Hamiltonian;
  return e;
}

EnergySpec EnergySpec::potential() {
  EnergySpec e;
  e.kind = EnergyKind::Potential;
  return e;
}

EnergySpec EnergySpec::system_pohozaev() {
  EnergySpec e;
  e.kind = EnergyKind::SystemPohozaev;
  return e;
}

EnergySpec EnergySpec::phi() {
  EnergySpec e;
  e.kind = EnergyKind::NonvariationalPhi;
  return e;
}

EnergySpec EnergySpec::nonvariational(const SystemParams& P) {
  const double c = P.N + P.a - (P.N - 2) * P.s;
  return nonvariational(1 / (P.mu + 1), 1 / (P.delta + 1), c / (P.delta + 1), c / (P.mu + 1));
}

EnergySpec EnergySpec::nonvariational(double alpha, double beta, double sigma, double theta) {
  EnergySpec e;
  e.kind = EnergyKind::Nonvariational;
  e.alpha = alpha;
  e.beta = beta;
  e.sigma = sigma;
  e.theta = theta;
  return e;
}

void check_energy_family(const EnergySpec& e, const SystemParams& P) {
  switch (e.kind) {
  case EnergyKind::Hamiltonian:
    if (!hamiltonian_family(P)) throw PreconditionViolated("E_H needs p = q = 2 and s = m = 0");
    break;
  case EnergyKind::Nonvariational:
  case EnergyKind::NonvariationalPhi:
    if (!nonvariational_family(P)) throw PreconditionViolated("E_N needs p = q = 2, s = m, a = b");
    if (e.kind == EnergyKind::NonvariationalPhi && P.s == 0.0)
      throw PreconditionViolated("Phi needs s > 0");
    break;
  case EnergyKind::Potential:
    if (!potential_family(P))
      throw PreconditionViolated("E_P needs delta = m + 1, mu = s + 1, a = b");
    break;
  case EnergyKind::SystemPohozaev: break;
  case EnergyKind::ScalarPohozaev:
    throw PreconditionViolated("F_sigma is evaluated with scalar parameters");
  }
}

double hamiltonian_coefficient(const SystemParams& P) {
  return (P.N + P.a) / (P.delta + 1) + (P.N + P.b) / (P.mu + 1) - (P.N - 2);
}

double potential_coefficient(const SystemParams& P) {
  return P.N + P.a - (P.s + 1) * (P.N - P.p) / P.p - (P.m + 1) * (P.N - P.q) / P.q;
}

double uv_product(const SystemParams& P, const PhaseState& s) {
  if (s.X == 0.0 || s.Y == 0.0 || s.Z == 0.0 || s.W == 0.0)
    throw DegenerateState("uv needs X, Y, Z, W nonzero");
  const auto e = derive_exponents(P);
  const double l1 = (P.p - 1) * std::log(std::fabs(s.X)) + std::log(std::fabs(s.Z));
  const double l2 = (P.q - 1) * std::log(std::fabs(s.Y)) + std::log(std::fabs(s.W));
  return std::exp(-(e.gamma + e.xi) * s.t +
                  ((P.q - 1 - P.m + P.mu) * l1 + (P.delta + P.p - 1 - P.s) * l2) / e.D);
}

double energy_value(const EnergySpec& e, const SystemParams& P, const RadialState& rs) {
  check_energy_family(e, P);
  need_positive(rs);
  const double r = rs.r, u = rs.u, v = rs.v, du = rs.du, dv = rs.dv, N = P.N;
  const double rN = std::pow(r, N);
  switch (e.kind) {
  case EnergyKind::Hamiltonian:
    return rN * (du * dv + std::pow(r, P.b) * std::pow(u, P.mu + 1) / (P.mu + 1) +
                 std::pow(r, P.a) * std::pow(v, P.delta + 1) / (P.delta + 1) +
                 (N + P.a) / (P.delta + 1) * v * du / r + (N + P.b) / (P.mu + 1) * u * dv / r);
  case EnergyKind::Nonvariational:
  case EnergyKind::NonvariationalPhi: {
    const EnergySpec f = e.kind == EnergyKind::Nonvariational ? e : phi_params(P);
    const double ra = std::pow(r, P.a);
    double val = du * dv + f.alpha * ra * std::pow(u, P.mu + 1) * std::pow(v, P.s) +
                 f.beta * ra * std::pow(v, P.delta + 1) * std::pow(u, P.s) + f.sigma * v * du / r +
                 f.theta * u * dv / r;
    if (e.kind == EnergyKind::NonvariationalPhi)
      val += P.s / 2 * (f.beta * v * du * du / u + f.alpha * u * dv * dv / v);
    return rN * val;
  }
  case EnergyKind::Potential: {
    const double pc = P.p / (P.p - 1), qc = P.q / (P.q - 1);
    return rN * ((P.s + 1) * (apow(du, P.p) / pc + (N - P.p) / P.p * u * spow(du, P.p) / r) +
                 (P.m + 1) * (apow(dv, P.q) / qc + (N - P.q) / P.q * v * spow(dv, P.q) / r) +
                 std::pow(r, P.a) * std::pow(u, P.s + 1) * std::pow(v, P.m + 1));
  }
  case EnergyKind::SystemPohozaev: {
    const double pc = P.p / (P.p - 1);
    return rN * (apow(du, P.p) / pc +
                 std::pow(r, P.a) * std::pow(u, P.s + 1) * std::pow(v, P.delta) / (P.s + 1) +
                 (N - P.p) / P.p * u * spow(du, P.p) / r);
  }
  case EnergyKind::ScalarPohozaev: break;
  }
  return 0.0;
}

double energy_value(const EnergySpec& e, const SystemParams& P, const PhaseState& s) {
  check_energy_family(e, P);
  const double r = std::exp(s.t), N = P.N;
  switch (e.kind) {
  case EnergyKind::Hamiltonian:
    need_nonzero(s);
    return std::pow(r, N - 2) * uv_product(P, s) *
           (s.X * s.Y - s.Y * (N + P.b - s.W) / (P.mu + 1) - (N + P.a - s.Z) * s.X / (P.delta + 1));
  case EnergyKind::Nonvariational:
    need_nonzero(s);
    return std::pow(r, N - 2) * uv_product(P, s) * psi0(e, s);
  case EnergyKind::NonvariationalPhi: {
    need_nonzero(s);
    const EnergySpec f = phi_params(P);
    return std::pow(r, N - 2) * uv_product(P, s) *
           (psi0(f, s) + P.s / 2 * (f.beta * s.X * s.X + f.alpha * s.Y * s.Y));
  }
  case EnergyKind::Potential: {
    if (s.X == 0.0 || s.Y == 0.0) throw DegenerateState("E_P phase form needs X, Y nonzero");
    const double zw = potential_monomial(P, s, 0, 0);
    const double w = potential_monomial(P, s, -1, 0) * (N - P.p - (P.p - 1) * s.X);
    const double z = potential_monomial(P, s, 0, -1) * (N - P.q - (P.q - 1) * s.Y);
    return zw - (P.s + 1) / P.p * w - (P.m + 1) / P.q * z;
  }
  case EnergyKind::SystemPohozaev: {
    const RadialState rs = from_phase(P, s);
    return std::pow(r, N - P.p) * std::pow(rs.u, P.p) * spow(s.X, P.p) *
           (s.X / (P.p / (P.p - 1)) + s.Z / (P.s + 1) - (N - P.p) / P.p);
  }
  case EnergyKind::ScalarPohozaev: break;
  }
  return 0.0;
}

double energy_derivative(const EnergySpec& e, const SystemParams& P, const RadialState& rs) {
  check_energy_family(e, P);
  need_positive(rs);
  const double r = rs.r, N = P.N;
  switch (e.kind) {
  case EnergyKind::Hamiltonian:
    return std::pow(r, N - 1) * rs.du * rs.dv * hamiltonian_coefficient(P);
  case EnergyKind::Potential:
    return potential_coefficient(P) * std::pow(r, N - 1 + P.a) * std::pow(rs.u, P.s + 1) *
           std::pow(rs.v, P.m + 1);
  case EnergyKind::SystemPohozaev:
    return std::pow(r, N - 1 + P.a) * std::pow(rs.v, P.delta) * std::pow(rs.u, P.s + 1) *
           ((N + P.a) / (P.s + 1) - (N - P.p) / P.p + P.delta / (P.s + 1) * r * rs.dv / rs.v);
  case EnergyKind::Nonvariational:
  case EnergyKind::NonvariationalPhi: {
    const PhaseState s = phase_of(P, rs);
    const double pre = std::pow(r, N - 3) * rs.u * rs.v;
    if (e.kind == EnergyKind::Nonvariational) return pre * nonvar_rate(e, P, s);
    return -P.s / 2 * pre * cubic_B(P, s.X, s.Y);
  }
  case EnergyKind::ScalarPohozaev: break;
  }
  return 0.0;
}

double energy_derivative(const EnergySpec& e, const SystemParams& P, const PhaseState& s) {
  check_energy_family(e, P);
  const double r = std::exp(s.t), N = P.N;
  switch (e.kind) {
  case EnergyKind::Hamiltonian:
    need_nonzero(s);
    return std::pow(r, N - 3) * uv_product(P, s) * s.X * s.Y * hamiltonian_coefficient(P);
  case EnergyKind::Nonvariational:
    need_nonzero(s);
    return std::pow(r, N - 3) * uv_product(P, s) * nonvar_rate(e, P, s);
  case EnergyKind::NonvariationalPhi:
    need_nonzero(s);
    return -P.s / 2 * std::pow(r, N - 3) * uv_product(P, s) * cubic_B(P, s.X, s.Y);
  case EnergyKind::Potential:
    if (s.X == 0.0 || s.Y == 0.0) throw DegenerateState("E_P phase form needs X, Y nonzero");
    return potential_coefficient(P) * potential_monomial(P, s, 0, 0) / r;
  case EnergyKind::SystemPohozaev: {
    const RadialState rs = from_phase(P, s);
    return std::pow(r, N - 1 + P.a) * std::pow(rs.v, P.delta) * std::pow(rs.u, P.s + 1) *
           ((N + P.a) / (P.s + 1) - (N - P.p) / P.p - P.delta * s.Y / (P.s + 1));
  }
  case EnergyKind::ScalarPohozaev: break;
  }
  return 0.0;
}

double energy_value(const EnergySpec& e, const ScalarParams& S, const ScalarRadial& rs) {
  if (e.kind != EnergyKind::ScalarPohozaev)
    throw PreconditionViolated("scalar parameters only carry F_sigma");
  if (!(rs.r > 0)) throw DegenerateState("radius must be positive");
  const double r = rs.r, pc = S.p / (S.p - 1);
  return std::pow(r, S.N) * (apow(rs.du, S.p) / pc +
                             S.eps * std::pow(r, S.a) * apow(rs.u, S.Q + 1) / (S.Q + 1) +
                             e.sigma * rs.u * spow(rs.du, S.p) / r);
}

double energy_value(const EnergySpec& e, const ScalarParams& S, const ScalarPhase& ps) {
  if (e.kind != EnergyKind::ScalarPohozaev)
    throw PreconditionViolated("scalar parameters only carry F_sigma");
  if (ps.X == 0.0 || ps.Z == 0.0) throw DegenerateState("phase form needs X, Z nonzero");
  const ScalarRadial rs = scalar_from_phase(S, ps);
  return std::pow(rs.r, S.N - S.p) * apow(rs.u, S.p) * spow(ps.X, S.p) *
         (ps.X / (S.p / (S.p - 1)) + ps.Z / (S.Q + 1) - e.sigma);
}

double energy_derivative(const EnergySpec& e, const ScalarParams& S, const ScalarRadial& rs) {
  if (e.kind != EnergyKind::ScalarPohozaev)
    throw PreconditionViolated("scalar parameters only carry F_sigma");
  if (!(rs.r > 0)) throw DegenerateState("radius must be positive");
  const double r = rs.r;
  return std::pow(r, S.N - 1) * apow(rs.du, S.p) * (e.sigma - (S.N - S.p) / S.p) +
         S.eps * std::pow(r, S.N - 1 + S.a) * apow(rs.u, S.Q + 1) *
             ((S.N + S.a) / (S.Q + 1) - e.sigma);
}

double energy_derivative(const EnergySpec& e, const ScalarParams& S, const ScalarPhase& ps) {
  if (ps.X == 0.0 || ps.Z == 0.0) throw DegenerateState("phase form needs X, Z nonzero");
  return energy_derivative(e, S, scalar_from_phase(S, ps));
}

double cubic_B(const SystemParams& P, double X, double Y) {
  if (!(P.s > 0)) throw PreconditionViolated("cubic B needs s > 0");
  const double al = 1 / (P.mu + 1), be = 1 / (P.delta + 1), n2 = P.N - 2;
  return be * X * X * (n2 - X) + al * Y * Y * (n2 - Y) +
         X * Y * (be * X + al * Y + 2 / P.s * (n2 - (P.N + P.a) * (al + be)));
}

std::string_view to_string(CurveKind k) {
  switch (k) {
  case CurveKind::H0: return "H0";
  case CurveKind::Hs: return "Hs";
  case CurveKind::Zs: return "Zs";
  case CurveKind::Cs: return "Cs";
  case CurveKind::Ls: return "Ls";
  case CurveKind::LineD: return "LineD";
  case CurveKind::ScalarQ1: return "ScalarQ1";
  case CurveKind::ScalarQ2: return "ScalarQ2";
  }
  return "?";
}

std::string_view to_string(Side s) {
  switch (s) {
  case Side::Above: return "above";
  case Side::On: return "on";
  case Side::Below: return "below";
  case Side::NotApplicable: return "not-applicable";
  }
  return "?";
}

namespace {

CurveStatus side_of(double lhs, double rhs) {
  CurveStatus c;
  c.lhs = lhs;
  c.rhs = rhs;
  if (std::fabs(lhs - rhs) <= numerics().identityTol * std::max({1.0, std::fabs(lhs), std::fabs(rhs)}))
    c.side = Side::On;
  else
    c.side = lhs < rhs ? Side::Above : Side::Below;
  return c;
}

CurveStatus not_applicable(std::string why) {
  CurveStatus c;
  c.note = std::move(why);
  return c;
}

} // namespace

RegionMap classify_region(const SystemParams& P) {
  RegionMap out;
  const bool lap = eq(P.p, 2) && eq(P.q, 2);
  out[CurveKind::H0] = lap ? side_of((P.N + P.a) / (P.delta + 1) + (P.N + P.b) / (P.mu + 1), P.N - 2)
                           : not_applicable("needs p = q = 2");

  const bool sn = nonvariational_family(P);
  const double Nh = nhat(P);
  if (sn && P.s < Nh / (Nh - 2) && P.delta + 1 - P.s > 0 && P.mu + 1 - P.s > 0)
    out[CurveKind::Hs] = side_of(1 / (P.delta + 1 - P.s) + 1 / (P.mu + 1 - P.s),
                                 (Nh - 2) / (Nh - (Nh - 2) * P.s));
  else
    out[CurveKind::Hs] = not_applicable("needs p = q = 2, s = m < N/(N-2), delta, mu > s - 1");

  if (sn && P.s < Nh / (Nh - 2) && std::min(P.delta, P.mu) > std::fabs(P.s - 1))
    out[CurveKind::Zs] =
        side_of(1 / (P.delta + 1) + 1 / (P.mu + 1), (Nh - 2) / (Nh - (Nh - 2) * P.s));
  else
    out[CurveKind::Zs] = not_applicable("needs p = q = 2, s = m < N/(N-2), min(delta, mu) > |s-1|");

  if (sn && P.s > 0) {
    const double al = 1 / (P.mu + 1), be = 1 / (P.delta + 1);
    out[CurveKind::Cs] = side_of((al + be) * Nh / (Nh - 2) - P.s / 2 * std::min(al, be), 1.0);
  } else {
    out[CurveKind::Cs] = not_applicable("needs p = q = 2, s = m > 0, a = b");
  }

  if (sn && P.s > 0 && Nh - (Nh - 2) * P.s / 2 > 0)
    out[CurveKind::Ls] =
        side_of(1 / (P.delta + 1) + 1 / (P.mu + 1), (Nh - 2) / (Nh - (Nh - 2) * P.s / 2));
  else
    out[CurveKind::Ls] = not_applicable("needs p = q = 2, s = m > 0, N - (N-2)s/2 > 0");

  if (potential_family(P))
    out[CurveKind::LineD] = side_of(P.N + P.a, (P.m + 1) * (P.N - P.q) / P.q +
                                                   (P.s + 1) * (P.N - P.p) / P.p);
  else
    out[CurveKind::LineD] = not_applicable("needs delta = m + 1, mu = s + 1, a = b");

  if (eq(P.p, P.q) && eq(P.a, P.b) && eq(P.s, P.m) && eq(P.delta, P.mu)) {
    const ScalarParams S{P.N, P.p, P.a, P.s + P.delta, P.eps1};
    const RegionMap sc = classify_region(S);
    out[CurveKind::ScalarQ1] = sc.at(CurveKind::ScalarQ1);
    out[CurveKind::ScalarQ2] = sc.at(CurveKind::ScalarQ2);
  } else {
    out[CurveKind::ScalarQ1] = not_applicable("needs the symmetric diagonal reduction");
    out[CurveKind::ScalarQ2] = not_applicable("needs the symmetric diagonal reduction");
  }
  return out;
}

RegionMap classify_region(const ScalarParams& S) {
  RegionMap out;
  const auto th = scalar_thresholds(S);
  out[CurveKind::ScalarQ1] = side_of(th.Q1, S.Q);
  out[CurveKind::ScalarQ2] = side_of(th.Q2, S.Q);
  return out;
}

double diagonal_crossing(CurveKind k, const SystemParams& P) {
  const double Nh = nhat(P), base = (Nh + 2) / (Nh - 2);
  switch (k) {
  case CurveKind::H0: return base;
  case CurveKind::Hs:
  case CurveKind::Ls: return base - P.s;
  case CurveKind::Cs: return base - P.s / 2;
  case CurveKind::Zs: return base - 2 * P.s;
  default: throw PreconditionViolated("no diagonal crossing for this curve");
  }
}

std::string_view to_string(Verdict v) {
  switch (v) {
  case Verdict::GSExists: return "GS-exists";
  case Verdict::NoGSDirichletExists: return "no-GS(Dirichlet-exists)";
  case Verdict::AllRegularAreGS: return "all-regular-are-GS";
  case Verdict::Unknown: return "unknown";
  }
  return "?";
}

ExistenceVerdict predict_existence(const SystemParams& P) {
  ExistenceVerdict out;
  auto& C = out.conditions;
  auto note = [&](const std::string& name, bool ok, const std::string& detail) {
    C.push_back({name, ok, detail});
    return ok;
  };
  auto done = [&](Verdict v, std::string src) {
    out.verdict = v;
    out.source = std::move(src);
    return out;
  };

  const ValidationReport vr = validate_params(P, Regime::Source);
  if (!note("source regime", vr.ok, vr.ok ? "all constraints hold" : "violated"))
    return done(Verdict::Unknown, "none");
  if (!note("source signs", P.eps1 == 1 && P.eps2 == 1, "eps1 = eps2 = +1 required"))
    return done(Verdict::Unknown, "none");

  const RegionMap reg = classify_region(P);
  const auto e = derive_exponents(P);
  const double Ap = xbound(P), Aq = ybound(P);

  if (hamiltonian_family(P)) {
    const CurveStatus& h = reg.at(CurveKind::H0);
    note("Hamiltonian system", true, "p = q = 2, s = m = 0");
    const bool gs = h.side != Side::Below;
    note("(delta, mu) above or on H0", gs,
         "(N+a)/(delta+1)+(N+b)/(mu+1) = " + fmt(h.lhs) + " vs N-2 = " + fmt(h.rhs));
    return done(gs ? Verdict::GSExists : Verdict::NoGSDirichletExists, "hamiltonian-critical-hyperbola");
  }
  if (potential_family(P)) {
    const CurveStatus& d = reg.at(CurveKind::LineD);
    note("potential system", true, "delta = m+1, mu = s+1, a = b");
    const bool gs = d.side != Side::Below;
    note("(m, s) above or on line D", gs,
         "N+a = " + fmt(d.lhs) + " vs (m+1)(N-q)/q+(s+1)(N-p)/p = " + fmt(d.rhs));
    return done(gs ? Verdict::GSExists : Verdict::NoGSDirichletExists, "potential-critical-line");
  }

  const bool sn = nonvariational_family(P);
  const bool lap = eq(P.p, 2) && eq(P.q, 2);
  const double Nh = nhat(P);
  if (sn && P.s > 0) {
    const CurveStatus& c = reg.at(CurveKind::Cs);
    if (note("(delta, mu) above or on Cs", c.side != Side::Below,
             "lhs = " + fmt(c.lhs) + " vs 1"))
      return done(Verdict::GSExists, "nonvariational-curve-Cs");
    const double h0 = 1 / (P.delta + 1) + 1 / (P.mu + 1);
    if (note("(delta, mu) above H0", h0 < (Nh - 2) / Nh,
             "1/(delta+1)+1/(mu+1) = " + fmt(h0) + " vs (N-2)/N = " + fmt((Nh - 2) / Nh)))
      return done(Verdict::GSExists, "nonvariational-above-H0");
  }
  if (lap) {
    const bool cd = fixed_point(P, Label::M0).admissible;
    const double b1 = (P.N + 2 + 2 * P.a) / (P.N - 2), b2 = (P.N + 2 + 2 * P.b) / (P.N - 2);
    if (note("M0 admissible and delta+s, mu+m above the critical exponents",
             cd && P.delta + P.s >= b1 && P.mu + P.m >= b2,
             "delta+s = " + fmt(P.delta + P.s) + " vs " + fmt(b1) + ", mu+m = " +
                 fmt(P.mu + P.m) + " vs " + fmt(b2)))
      return done(Verdict::GSExists, "moving-spheres-bound");
  }
  if (sn && eq(P.delta, P.mu)) {
    const double Q2 = scalar_thresholds({P.N, 2.0, P.a, 1.0, 1}).Q2;
    if (note("diagonal: s + delta >= Q2", P.s + P.delta >= Q2,
             "s+delta = " + fmt(P.s + P.delta) + " vs Q2 = " + fmt(Q2)))
      return done(Verdict::GSExists, "symmetric-reduction");
    if (note("diagonal: s <= delta and 1-s < delta < Q2-s",
             P.s <= P.delta && 1 - P.s < P.delta && P.delta < Q2 - P.s,
             "delta = " + fmt(P.delta) + ", Q2-s = " + fmt(Q2 - P.s)))
      return done(Verdict::NoGSDirichletExists, "symmetric-reduction");
  }
  if (sn) {
    const CurveStatus& z = reg.at(CurveKind::Zs);
    const bool hyp = P.s < Nh / (Nh - 2) && P.delta + 1 - P.s > 0 && P.mu + 1 - P.s > 0;
    if (note("under Zs", hyp && z.side == Side::Below,
             z.side == Side::NotApplicable ? z.note : "lhs = " + fmt(z.lhs) + " vs " + fmt(z.rhs)))
      return done(Verdict::NoGSDirichletExists, "nonvariational-under-Zs");
  }

  // nonexistence through decay estimates
  const double cA = P.s * Ap + P.delta * Aq - (P.N + P.a);
  const double cB = P.mu * Ap + P.m * Aq - (P.N + P.b);
  const double gA = e.gamma - Ap, xB = e.xi - Aq;
  if (note("p < s+1, q < m+1, min(...) <= 0",
           P.p < P.s + 1 && P.q < P.m + 1 && std::min(cA, cB) <= 0,
           "min = " + fmt(std::min(cA, cB))))
    return done(Verdict::NoGSDirichletExists, "dirichlet-corollary-(i)");
  if (note("p < s+1, q > m+1, (s Ap + delta Aq <= N+a or gamma > Ap)",
           P.p < P.s + 1 && P.q > P.m + 1 && (cA <= 0 || gA > 0),
           "s Ap + delta Aq - (N+a) = " + fmt(cA) + ", gamma - Ap = " + fmt(gA)))
    return done(Verdict::NoGSDirichletExists, "dirichlet-corollary-(ii)");
  if (note("q < m+1, p > s+1, (mu Ap + m Aq <= N+b or xi > Aq)",
           P.q < P.m + 1 && P.p > P.s + 1 && (cB <= 0 || xB > 0),
           "mu Ap + m Aq - (N+b) = " + fmt(cB) + ", xi - Aq = " + fmt(xB)))
    return done(Verdict::NoGSDirichletExists, "dirichlet-corollary-(ii)-exchanged");
  if (note("p > s+1, q > m+1, max(gamma - Ap, xi - Aq) >= 0",
           P.p > P.s + 1 && P.q > P.m + 1 && std::max(gA, xB) >= 0,
           "max = " + fmt(std::max(gA, xB))))
    return done(Verdict::NoGSDirichletExists, "dirichlet-corollary-(iii)");
  if (note("p >= s+1, q >= m+1, max(gamma - Ap, xi - Aq) > 0",
           P.p >= P.s + 1 && P.q >= P.m + 1 && std::max(gA, xB) > 0,
           "max = " + fmt(std::max(gA, xB))))
    return done(Verdict::NoGSDirichletExists, "dirichlet-corollary-(iv)");

  {
    const double lhs = P.s + P.p * (P.N - P.q) / ((P.q - 1) * (P.N - P.p)) * P.delta;
    const double rhs = (P.N * (P.p - 1) + P.p * P.a + P.p) / (P.N - P.p);
    const bool pre = P.s + 1 > P.p || e.gamma > (P.N - P.p) / P.p;
    if (note("Pohozaev bound on the u equation", pre && lhs < rhs,
             "s + p(N-q)delta/((q-1)(N-p)) = " + fmt(lhs) + " vs " + fmt(rhs)))
      return done(Verdict::NoGSDirichletExists, "pohozaev-subcritical");
    const double lhs2 = P.m + P.q * (P.N - P.p) / ((P.p - 1) * (P.N - P.q)) * P.mu;
    const double rhs2 = (P.N * (P.q - 1) + P.q * P.b + P.q) / (P.N - P.q);
    const bool pre2 = P.m + 1 > P.q || e.xi > (P.N - P.q) / P.q;
    if (note("Pohozaev bound on the v equation", pre2 && lhs2 < rhs2,
             "m + q(N-p)mu/((p-1)(N-q)) = " + fmt(lhs2) + " vs " + fmt(rhs2)))
      return done(Verdict::NoGSDirichletExists, "pohozaev-subcritical-exchanged");
  }

  const double s2 = (P.N * (P.p - 1) + P.p + P.p * P.a) / (P.N - P.p);
  const double m2 = (P.N * (P.q - 1) + P.q + P.q * P.b) / (P.N - P.q);
  if (note("s and m at least the scalar critical exponents", P.s >= s2 && P.m >= m2,
           "s = " + fmt(P.s) + " vs " + fmt(s2) + ", m = " + fmt(P.m) + " vs " + fmt(m2)))
    return done(Verdict::AllRegularAreGS, "all-regular-ground-states");

  return done(Verdict::Unknown, "none");
}

AsymptoticProfile predict_asymptotics(const SystemParams& P) {
  const double tol = numerics().identityTol;
  if (hamiltonian_family(P)) {
    const double c = hamiltonian_coefficient(P);
    if (std::fabs(c) > tol * std::max(1.0, P.N)) throw NotCritical("(delta, mu) is not on H0");
    // pick the component whose exponent exceeds (N+a)/(N-2); the other one follows
    const double ex1 = P.delta - (P.N + P.a) / (P.N - 2);
    const double ex2 = P.mu - (P.N + P.b) / (P.N - 2);
    const bool flip = ex2 > ex1;
    const double muEff = flip ? P.delta : P.mu;
    const double bEff = flip ? P.a : P.b;
    const double crit = (P.N + bEff) / (P.N - 2);
    double other = P.N - 2, logp = 0.0;
    if (std::fabs(muEff - crit) <= tol * std::max(1.0, crit)) logp = 1.0;
    else if (muEff < crit) other = (P.N - 2) * muEff - (2 + bEff);
    AsymptoticProfile a;
    a.uExponent = flip ? other : P.N - 2;
    a.vExponent = flip ? P.N - 2 : other;
    a.logCorrectionPower = logp;
    a.logTarget = logp == 0.0 ? LogTarget::None : (flip ? LogTarget::U : LogTarget::V);
    return a;
  }
  if (potential_family(P)) {
    const double c = potential_coefficient(P);
    if (std::fabs(c) > tol * std::max(1.0, P.N)) throw NotCritical("(m, s) is not on line D");
    const bool flip = P.q > P.p;
    const SystemParams Q = flip ? swapped(P) : P;
    const double Ap = xbound(Q), Aq = ybound(Q);
    const double lam = Q.N + Q.a - (Q.s + 1) * Ap - Q.m * Aq;
    double other = Aq, logp = 0.0;
    if (std::fabs(lam) <= tol * std::max(1.0, Q.N)) logp = 1 / (Q.q - 1 - Q.m);
    else if (lam > 0) other = (Ap * Q.mu - (Q.q + Q.b)) / (Q.q - 1 - Q.m);
    AsymptoticProfile a;
    a.uExponent = flip ? other : Ap;
    a.vExponent = flip ? Ap : other;
    a.logCorrectionPower = logp;
    a.logTarget = logp == 0.0 ? LogTarget::None : (flip ? LogTarget::U : LogTarget::V);
    return a;
  }
  throw NotCritical("asymptotics are given only for the Hamiltonian and potential critical cases");
}

} // namespace efdyn
