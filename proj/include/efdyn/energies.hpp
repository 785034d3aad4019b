#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "efdyn/model.hpp"
#include "efdyn/spectra.hpp"

namespace efdyn {

enum class EnergyKind {
  ScalarPohozaev,    // F_sigma for the scalar equation
  Hamiltonian,       // E_H, p = q = 2, s = m = 0
  Nonvariational,    // E_N with free alpha, beta, sigma, theta; p = q = 2, s = m, a = b
  NonvariationalPhi, // Phi, the E_N variant with X^2, Y^2 terms
  Potential,         // E_P, delta = m+1, mu = s+1, a = b
  SystemPohozaev     // F = r^N [|u'|^p/p' + r^a u^{s+1} v^delta/(s+1) + (N-p)/p u|u'|^{p-2}u'/r]
};

std::string_view to_string(EnergyKind k);

struct EnergySpec {
  EnergyKind kind = EnergyKind::Hamiltonian;
  double sigma = 0.0;
  double theta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  static EnergySpec scalar(double sigma);
  static EnergySpec hamiltonian();
  static EnergySpec potential();
  static EnergySpec system_pohozaev();
  static EnergySpec phi();
  // alpha = 1/(mu+1), beta = 1/(delta+1), sigma, theta = (N+a-(N-2)s)·(beta, alpha)
  static EnergySpec nonvariational(const SystemParams& P);
  static EnergySpec nonvariational(double alpha, double beta, double sigma, double theta);
};

// Throws PreconditionViolated when the parameters do not belong to the kind's family.
void check_energy_family(const EnergySpec& e, const SystemParams& P);

double energy_value(const EnergySpec& e, const SystemParams& P, const RadialState& rs);
double energy_value(const EnergySpec& e, const SystemParams& P, const PhaseState& ps);
double energy_derivative(const EnergySpec& e, const SystemParams& P, const RadialState& rs);
double energy_derivative(const EnergySpec& e, const SystemParams& P, const PhaseState& ps);

double energy_value(const EnergySpec& e, const ScalarParams& S, const ScalarRadial& rs);
double energy_value(const EnergySpec& e, const ScalarParams& S, const ScalarPhase& ps);
double energy_derivative(const EnergySpec& e, const ScalarParams& S, const ScalarRadial& rs);
double energy_derivative(const EnergySpec& e, const ScalarParams& S, const ScalarPhase& ps);

// Constant factor of E_H' = r^{N-1} u'v' c and of E_P' = c r^{N-1+a} u^{s+1} v^{m+1}.
double hamiltonian_coefficient(const SystemParams& P);
double potential_coefficient(const SystemParams& P);

// uv expressed through the phase coordinates and t.
double uv_product(const SystemParams& P, const PhaseState& ps);

double cubic_B(const SystemParams& P, double X, double Y);

enum class CurveKind { H0, Hs, Zs, Cs, Ls, LineD, ScalarQ1, ScalarQ2 };
enum class Side { Above, On, Below, NotApplicable };

std::string_view to_string(CurveKind k);
std::string_view to_string(Side s);

struct CurveStatus {
  Side side = Side::NotApplicable;
  double lhs = 0.0; // decreasing in (delta, mu) for the hyperbolas
  double rhs = 0.0;
  std::string note;
};

using RegionMap = std::map<CurveKind, CurveStatus>;

RegionMap classify_region(const SystemParams& P);
RegionMap classify_region(const ScalarParams& S);

// Diagonal delta = mu crossing of each s-curve for p = q = 2, s = m, a = b.
double diagonal_crossing(CurveKind k, const SystemParams& P);

enum class Verdict { GSExists, NoGSDirichletExists, AllRegularAreGS, Unknown };
std::string_view to_string(Verdict v);

struct ExistenceVerdict {
  Verdict verdict = Verdict::Unknown;
  std::string source;
  std::vector<Check> conditions;
};

ExistenceVerdict predict_existence(const SystemParams& P);

// Ground-state decay at infinity in the critical cases.
AsymptoticProfile predict_asymptotics(const SystemParams& P);

} // namespace efdyn
