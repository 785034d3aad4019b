#include "efdyn/spectra.hpp"

#include <algorithm>
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

bool is_center(const cplx& l) {
  return std::fabs(l.real()) < numerics().centerTol * (1.0 + std::abs(l));
}

double param_scale(const SystemParams& P) {
  return std::max({1.0, std::fabs(P.N), std::fabs(P.a), std::fabs(P.b), std::fabs(P.delta),
                   std::fabs(P.mu), std::fabs(P.s), std::fabs(P.m)});
}

cplx horner(const std::vector<double>& c, cplx z) {
  // monic, c low to high
  cplx acc = 1.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

cplx horner_deriv(const std::vector<double>& c, cplx z) {
  const std::size_t n = c.size();
  cplx acc = static_cast<double>(n);
  for (std::size_t i = n; i-- > 1;) acc = acc * z + static_cast<double>(i) * c[i];
  return acc;
}

// roots of λ^2 - tr λ + det
std::array<cplx, 2> quad_roots(double tr, double det) {
  const double disc = tr * tr - 4 * det;
  if (disc >= 0) {
    const double sq = std::sqrt(disc);
    const double big = tr >= 0 ? (tr + sq) / 2 : (tr - sq) / 2;
    if (big == 0.0) return {cplx(0), cplx(0)};
    return {cplx(big), cplx(det / big)};
  }
  const double im = std::sqrt(-disc) / 2;
  return {cplx(tr / 2, -im), cplx(tr / 2, im)};
}

std::array<cplx, 4> sorted4(std::array<cplx, 4> a) {
  std::vector<cplx> v(a.begin(), a.end());
  sort_roots(v);
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

// Closed-form eigenvalues for the P-side labels and the unpaired ones.
std::array<cplx, 4> closed_form(const SystemParams& P, const FixedPoint& fp) {
  const double Ap = xbound(P), Aq = ybound(P);
  const auto& c = fp.coords;
  switch (fp.label) {
  case Label::M0: return quartic_roots(m0_characteristic(P));
  case Label::O: return {-Ap, -Aq, P.N + P.a, P.N + P.b};
  case Label::N0:
    return {(P.p + P.a) / (P.p - 1), (P.q + P.b) / (P.q - 1), -(P.N + P.a), -(P.N + P.b)};
  case Label::A0:
    return {Ap, Aq, P.N + P.a - P.s * Ap - P.delta * Aq, P.N + P.b - P.mu * Ap - P.m * Aq};
  case Label::I0: return {Ap, -Aq, P.N + P.a - P.s * Ap, P.N + P.b - P.mu * Ap};
  case Label::K0: return {(P.p + P.a) / (P.p - 1), -Aq, -(P.N + P.a), P.N + P.b};
  case Label::G0:
    return {Ap, (P.q + P.b - Ap * P.mu) / (P.q - 1), P.N + P.a - P.s * Ap,
            -(P.N + P.b - Ap * P.mu)};
  case Label::P0:
  case Label::C0:
  case Label::R0: {
    const double Ys = c[1], Ws = c[3];
    const auto qr = quad_roots(Ys - Ws, (P.m + 1 - P.q) / (P.q - 1) * Ys * Ws);
    if (fp.label == Label::P0) return {Ap, P.N + P.a - P.s * Ap - P.delta * Ys, qr[0], qr[1]};
    if (fp.label == Label::C0) return {-Ap, P.N + P.a - P.delta * Ys, qr[0], qr[1]};
    return {(P.p + P.a - P.delta * Ys) / (P.p - 1), -c[2], qr[0], qr[1]};
  }
  default: {
    FixedPoint img = fixed_point(swapped(P), partner(fp.label));
    return closed_form(swapped(P), img);
  }
  }
}

// Growth factor f_i at a point, so that the i-th component of the field is x_i f_i.
Vec4 factors(const SystemParams& P, const Vec4& x) {
  return {x[0] - xbound(P) + x[2] / (P.p - 1), x[1] - ybound(P) + x[3] / (P.q - 1),
          P.N + P.a - P.s * x[0] - P.delta * x[1] - x[2],
          P.N + P.b - P.mu * x[0] - P.m * x[1] - x[3]};
}

} // namespace

Mat4 jacobian_at(const SystemParams& P, const Vec4& x) {
  const double X = x[0], Y = x[1], Z = x[2], W = x[3];
  Mat4 J;
  J << 2 * X - xbound(P) + Z / (P.p - 1), 0, X / (P.p - 1), 0,
      0, 2 * Y - ybound(P) + W / (P.q - 1), 0, Y / (P.q - 1),
      -P.s * Z, -P.delta * Z, P.N + P.a - P.s * X - P.delta * Y - 2 * Z, 0,
      -P.mu * W, -P.m * W, 0, P.N + P.b - P.mu * X - P.m * Y - 2 * W;
  return J;
}

QuarticCoeffs m0_characteristic(const SystemParams& P) {
  const FixedPoint fp = fixed_point(P, Label::M0);
  if (!fp.defined) throw UndefinedPoint("M0 is not defined (D = 0)");
  const double X0 = fp.coords[0], Y0 = fp.coords[1], Z0 = fp.coords[2], W0 = fp.coords[3];
  // [(λ-X0)(λ+Z0) + s/(p-1) X0 Z0][(λ-Y0)(λ+W0) + m/(q-1) Y0 W0] - δμ/((p-1)(q-1)) X0Y0Z0W0
  const double c1 = -(P.p - 1 - P.s) / (P.p - 1) * X0 * Z0;
  const double c2 = -(P.q - 1 - P.m) / (P.q - 1) * Y0 * W0;
  QuarticCoeffs q;
  q.E = Z0 - X0 + W0 - Y0;
  q.F = (Z0 - X0) * (W0 - Y0) + c1 + c2;
  q.G = (Z0 - X0) * c2 + (W0 - Y0) * c1;
  q.H = discriminant(P) * X0 * Y0 * Z0 * W0 / ((P.p - 1) * (P.q - 1));
  return q;
}

void sort_roots(std::vector<cplx>& r) {
  std::sort(r.begin(), r.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

std::vector<cplx> polynomial_roots(const std::vector<double>& c) {
  const std::size_t n = c.size();
  if (n == 0) return {};
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < n; ++i) C(i, n - 1) = -c[i];
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  std::vector<cplx> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx z = es.eigenvalues()[i];
    // Newton polish, kept only when it lowers the residual
    for (int it = 0; it < 3; ++it) {
      const cplx f = horner(c, z), df = horner_deriv(c, z);
      if (std::abs(df) == 0.0) break;
      const cplx zn = z - f / df;
      if (std::abs(horner(c, zn)) < std::abs(f)) z = zn;
      else break;
    }
    // exact real or imaginary parts are common here; drop roundoff dust
    if (std::fabs(z.imag()) < 1e-14 * (1 + std::abs(z))) z.imag(0.0);
    if (std::fabs(z.real()) < 1e-14 * (1 + std::abs(z))) z.real(0.0);
    r[i] = z;
  }
  sort_roots(r);
  return r;
}

std::array<cplx, 4> quartic_roots(const QuarticCoeffs& q) {
  const auto v = polynomial_roots({-q.H, q.G, q.F, q.E});
  return {v[0], v[1], v[2], v[3]};
}

std::array<cplx, 4> numeric_eigenvalues(const Mat4& J) {
  Eigen::EigenSolver<Mat4> es(J, false);
  std::array<cplx, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = es.eigenvalues()[i];
  return sorted4(out);
}

double eigenvalue_mismatch(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b) {
  std::array<bool, 4> used{};
  double worst = 0.0;
  for (const cplx& x : a) {
    int best = -1;
    double bd = INFINITY;
    for (int j = 0; j < 4; ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, bd / std::max(1.0, std::abs(x)));
  }
  return worst;
}

Spectrum spectrum_at(const SystemParams& P, const FixedPoint& fp) {
  if (!fp.defined) throw UndefinedPoint(std::string(to_string(fp.label)) + " is not defined");
  Spectrum sp;
  sp.label = fp.label;
  sp.eigenvalues = sorted4(closed_form(P, fp));
  const auto num = numeric_eigenvalues(jacobian_at(P, fp.coords));
  sp.crossCheckError = eigenvalue_mismatch(sp.eigenvalues, num);
  for (const cplx& l : sp.eigenvalues) {
    if (is_center(l)) ++sp.centerDim;
    else if (l.real() < 0) ++sp.stableDim;
    else ++sp.unstableDim;
  }
  return sp;
}

std::string_view to_string(OscBranch b) {
  switch (b) {
  case OscBranch::None: return "none";
  case OscBranch::CaseI: return "E=G=0 case (i)";
  case OscBranch::CaseII: return "E=G=0 case (ii)";
  case OscBranch::Resonance: return "EG>0 resonance";
  }
  return "none";
}

OscillationReport oscillation_condition(const SystemParams& P) {
  const FixedPoint fp = fixed_point(P, Label::M0);
  if (!fp.defined) throw UndefinedPoint("M0 is not defined (D = 0)");
  OscillationReport rep;
  rep.coeffs = m0_characteristic(P);
  const auto& q = rep.coeffs;
  const auto& c = fp.coords;
  const double sc = std::max({1.0, std::fabs(c[0]), std::fabs(c[1]), std::fabs(c[2]), std::fabs(c[3])});
  const double tol = numerics().identityTol;
  const bool eZero = std::fabs(q.E) <= tol * sc;
  const bool gZero = std::fabs(q.G) <= tol * sc * sc * sc;
  if (eZero && gZero) {
    rep.imaginaryPair = true;
    const bool same = std::fabs(c[2] - c[0]) <= tol * sc && std::fabs(c[3] - c[1]) <= tol * sc;
    rep.branch = same ? OscBranch::CaseI : OscBranch::CaseII;
  } else if (q.E * q.G > 0) {
    const double res = q.G * q.G - q.E * q.F * q.G - q.E * q.E * q.H;
    const double mag = q.G * q.G + std::fabs(q.E * q.F * q.G) + q.E * q.E * std::fabs(q.H);
    if (std::fabs(res) <= 1e-9 * mag) {
      rep.imaginaryPair = true;
      rep.branch = OscBranch::Resonance;
    }
  }
  for (const cplx& l : quartic_roots(q))
    if (is_center(l) && std::fabs(l.imag()) > numerics().centerTol) rep.numericImaginary = true;

  rep.hsApplicable = P.p == 2 && P.q == 2 && P.s == P.m && P.N > 2 && P.s < P.N / (P.N - 2) &&
                     P.delta + 1 - P.s > 0 && P.mu + 1 - P.s > 0;
  if (rep.hsApplicable) {
    const auto e = derive_exponents(P);
    rep.onHs = std::fabs(e.gamma + e.xi - (P.N - 2)) <= tol * std::max(1.0, P.N);
  }
  return rep;
}

std::string_view to_string(Direction d) {
  return d == Direction::TowardZero ? "r->0" : "r->inf";
}

std::string_view to_string(Existence e) {
  switch (e) {
  case Existence::Yes: return "yes";
  case Existence::No: return "no";
  case Existence::BoundaryCase: return "boundary-case";
  }
  return "no";
}

std::vector<LocalVerdict> local_verdicts(const SystemParams& P, const FixedPoint& fp) {
  if (!fp.defined) throw UndefinedPoint(std::string(to_string(fp.label)) + " is not defined");
  const auto& c = fp.coords;
  AsymptoticProfile prof;
  prof.uExponent = c[0];
  prof.vExponent = c[1];

  auto make = [&](Direction d, Existence e, std::string why) {
    LocalVerdict v;
    v.point = fp.label;
    v.direction = d;
    v.exists = e;
    v.profile = prof;
    v.reason = std::move(why);
    return v;
  };

  const AdmissibilityReport adm = admissibility(fp, P);
  if (!adm.admissible) {
    std::string why = "not in the admissible region:";
    for (const auto& s : adm.violations) why += " " + s + ";";
    return {make(Direction::TowardZero, Existence::No, why),
            make(Direction::TowardInfinity, Existence::No, why)};
  }

  const double zt = numerics().identityTol * param_scale(P);
  if (fp.label == Label::M0) {
    // the quartic has a negative constant term, so both real directions exist
    const auto q = m0_characteristic(P);
    if (!(q.H > zt))
      return {make(Direction::TowardZero, Existence::BoundaryCase, "M0 on the boundary of R"),
              make(Direction::TowardInfinity, Existence::BoundaryCase, "M0 on the boundary of R")};
    return {make(Direction::TowardZero, Existence::Yes, "unstable manifold meets R"),
            make(Direction::TowardInfinity, Existence::Yes, "stable manifold meets R")};
  }

  // Admissible convergence needs every vanishing coordinate to decay along the flow:
  // the eigenvalue carried by each zero coordinate is its growth factor at the point.
  static const char* names[4] = {"X", "Y", "Z", "W"};
  const Vec4 f = factors(P, c);
  bool allNeg = true, allPos = true, boundary = false;
  std::string detail;
  for (int i = 0; i < 4; ++i) {
    if (c[i] != 0.0) continue;
    detail += std::string(" lambda_") + names[i] + " = " + fmt(f[i]) + ";";
    if (std::fabs(f[i]) <= zt) boundary = true;
    allNeg = allNeg && f[i] < 0;
    allPos = allPos && f[i] > 0;
  }
  if (adm.boundary) boundary = true;
  // the internal quadratic at P0, C0, R0 (and images) must not be a center pair
  if (!boundary) {
    const Spectrum sp = spectrum_at(P, fp);
    if (sp.centerDim > 0) {
      boundary = true;
      detail += " center eigenvalues present;";
    }
  }
  if (boundary)
    return {make(Direction::TowardZero, Existence::BoundaryCase, "equality case:" + detail),
            make(Direction::TowardInfinity, Existence::BoundaryCase, "equality case:" + detail)};
  return {make(Direction::TowardZero, allPos ? Existence::Yes : Existence::No,
               (allPos ? "all transverse eigenvalues positive:" : "a transverse eigenvalue is negative:") + detail),
          make(Direction::TowardInfinity, allNeg ? Existence::Yes : Existence::No,
               (allNeg ? "all transverse eigenvalues negative:" : "a transverse eigenvalue is positive:") + detail)};
}

} // namespace efdyn
