#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "efdyn/equilibria.hpp"
#include "efdyn/model.hpp"

namespace efdyn {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4d;

Mat4 jacobian_at(const SystemParams& P, const Vec4& x);

// f(λ) = λ^4 + E λ^3 + F λ^2 + G λ - H at M0
struct QuarticCoeffs {
  double E = 0.0;
  double F = 0.0;
  double G = 0.0;
  double H = 0.0;
};

QuarticCoeffs m0_characteristic(const SystemParams& P);

// Roots of the monic polynomial λ^n + c[n-1] λ^{n-1} + ... + c[0], sorted by (Re, Im).
std::vector<cplx> polynomial_roots(const std::vector<double>& lowToHigh);
std::array<cplx, 4> quartic_roots(const QuarticCoeffs& c);

std::array<cplx, 4> numeric_eigenvalues(const Mat4& J);
void sort_roots(std::vector<cplx>& r);

struct Spectrum {
  Label label = Label::O;
  std::array<cplx, 4> eigenvalues{};
  int stableDim = 0;
  int unstableDim = 0;
  int centerDim = 0;
  double crossCheckError = 0.0; // max relative mismatch against the Jacobian eigenvalues
};

Spectrum spectrum_at(const SystemParams& P, const FixedPoint& fp);

// Greedy multiset distance, each term scaled by 1/(1+|λ|).
double eigenvalue_mismatch(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b);

enum class OscBranch { None, CaseI, CaseII, Resonance };
std::string_view to_string(OscBranch b);

struct OscillationReport {
  QuarticCoeffs coeffs;
  bool imaginaryPair = false;    // algebraic condition
  bool numericImaginary = false; // from the computed roots
  OscBranch branch = OscBranch::None;
  bool hsApplicable = false; // p = q = 2, s = m < N/(N-2)
  bool onHs = false;         // gamma + xi = N - 2
};

OscillationReport oscillation_condition(const SystemParams& P);

enum class Direction { TowardZero, TowardInfinity };
enum class Existence { Yes, No, BoundaryCase };
enum class LogTarget { None, U, V };

std::string_view to_string(Direction d);
std::string_view to_string(Existence e);

// u ~ r^{-uExponent}, v ~ r^{-vExponent}, with |ln r|^{logCorrectionPower} on logTarget.
struct AsymptoticProfile {
  double uExponent = 0.0;
  double vExponent = 0.0;
  double logCorrectionPower = 0.0;
  LogTarget logTarget = LogTarget::None;
  std::string limits = "(alpha, beta)";
};

struct LocalVerdict {
  Label point = Label::O;
  Direction direction = Direction::TowardZero;
  Existence exists = Existence::No;
  AsymptoticProfile profile;
  std::string reason;
};

std::vector<LocalVerdict> local_verdicts(const SystemParams& P, const FixedPoint& fp);

} // namespace efdyn
