#pragma once

#include <array>
#include <string>
#include <vector>

namespace efdyn {

using Vec4 = std::array<double, 4>;

// Exponents and signs of the radial system
//   -Δ_p u = eps1 r^a u^s v^delta,   -Δ_q v = eps2 r^b u^mu v^m.
struct SystemParams {
  double N = 3.0;
  double p = 2.0;
  double q = 2.0;
  double a = 0.0;
  double b = 0.0;
  double s = 0.0;
  double m = 0.0;
  double delta = 1.0;
  double mu = 1.0;
  int eps1 = 1;
  int eps2 = 1;

  bool operator==(const SystemParams&) const = default;
};

// Exchange (p,delta,s,a,eps1) <-> (q,mu,m,b,eps2).
SystemParams swapped(const SystemParams& P);

enum class Regime {
  Standing, // p != 1, q != 1, D != 0
  Source    // standing plus 1<p,q<N, p+a>0, q+b>0, delta,mu>0, s,m>=0, D>0, eps=+1
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  double D = 0.0;
  std::vector<Check> checks;
  std::vector<std::string> failures() const;
};

ValidationReport validate_params(const SystemParams& P, Regime regime);

struct DerivedExponents {
  double D = 0.0;
  double gamma = 0.0;
  double xi = 0.0;
  double pConj = 0.0;
  double qConj = 0.0;
};

double discriminant(const SystemParams& P);
DerivedExponents derive_exponents(const SystemParams& P);

// (N-p)/(p-1) and (N-q)/(q-1)
double xbound(const SystemParams& P);
double ybound(const SystemParams& P);

struct PhaseState {
  double t = 0.0;
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;
  double W = 0.0;

  Vec4 coords() const { return {X, Y, Z, W}; }
  static PhaseState from(double t, const Vec4& c) { return {t, c[0], c[1], c[2], c[3]}; }
};

struct RadialState {
  double r = 1.0;
  double u = 0.0;
  double v = 0.0;
  double du = 0.0;
  double dv = 0.0;
};

Vec4 vector_field(const SystemParams& P, const Vec4& x);
inline Vec4 vector_field(const SystemParams& P, const PhaseState& s) {
  return vector_field(P, s.coords());
}

PhaseState to_phase(const SystemParams& P, const RadialState& rs);

// Recovers (u,v) at r = e^t and the derivatives du = -X u / r, dv = -Y v / r.
RadialState from_phase(const SystemParams& P, const PhaseState& ps);

// Change t = k t̂ for p = q, a = b. The phase map multiplies every coordinate by k.
struct Rescaling {
  SystemParams params;
  double k = 1.0;
  PhaseState map(const PhaseState& s) const;
};

Rescaling rescale_system(const SystemParams& P, double k);
Rescaling eliminate_weight(const SystemParams& P);  // k = p/(p+a), â = 0
Rescaling reduce_to_dimension_one(const SystemParams& P); // k = -(p-1)/(N-p), N̂ = 1

// Scalar equation -Δ_p u = eps r^a |u|^{Q-1} u.
struct ScalarParams {
  double N = 3.0;
  double p = 2.0;
  double a = 0.0;
  double Q = 1.0;
  int eps = 1;
};

struct ScalarThresholds {
  double Q1 = 0.0;
  double Q2 = 0.0;
};

ScalarThresholds scalar_thresholds(const ScalarParams& S);
double scalar_gamma(const ScalarParams& S);

// s = m = 0, delta = mu = Q, p = q, a = b: the diagonal u = v carries the scalar equation.
SystemParams embed_scalar(const ScalarParams& S);

std::array<double, 2> scalar_field(const ScalarParams& S, double X, double Z);

struct ScalarPhase {
  double t = 0.0;
  double X = 0.0;
  double Z = 0.0;
};

struct ScalarRadial {
  double r = 1.0;
  double u = 0.0;
  double du = 0.0;
};

ScalarPhase scalar_to_phase(const ScalarParams& S, const ScalarRadial& rs);
ScalarRadial scalar_from_phase(const ScalarParams& S, const ScalarPhase& ps);

} // namespace efdyn
