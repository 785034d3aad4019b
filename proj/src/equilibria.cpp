#include "efdyn/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "efdyn/errors.hpp"
#include "efdyn/numerics.hpp"

namespace efdyn {

namespace {

constexpr std::array<std::string_view, 16> kNames = {"M0", "O",  "N0", "A0", "I0", "J0",
                                                     "K0", "L0", "G0", "H0", "P0", "C0",
                                                     "R0", "Q0", "D0", "S0"};

double scale_of(const SystemParams& P) {
  return std::max({1.0, std::fabs(P.N), std::fabs(P.a), std::fabs(P.b), std::fabs(P.delta),
                   std::fabs(P.mu), std::fabs(P.s), std::fabs(P.m)});
}

// Points whose formulas live on the "P side"; the Q side is the exchange image.
FixedPoint p_side(const SystemParams& P, Label l) {
  const double Ap = xbound(P);
  const double den = P.q - 1 - P.m;
  FixedPoint fp;
  fp.label = l;
  fp.defined = den != 0.0;
  fp.nearDegenerate = std::fabs(den) < numerics().degeneracyBand * scale_of(P);
  if (!fp.defined) {
    fp.notes = "undefined: q-1-m = 0";
    fp.coords = {NAN, NAN, NAN, NAN};
    return fp;
  }
  using L = long double;
  const L Apl = (L(P.N) - P.p) / (L(P.p) - 1);
  const L dl = L(P.q) - 1 - P.m;
  const L Wc = ((L(P.N) + P.b) * (L(P.q) - 1) - L(P.m) * (L(P.N) - P.q)) / dl;
  const L Yc = -(L(P.q) + P.b) / dl;
  switch (l) {
  case Label::P0: {
    const L Yp = (Apl * P.mu - (L(P.q) + P.b)) / dl;
    fp.coords = {Ap, static_cast<double>(Yp), 0.0,
                 static_cast<double>(((L(P.q) - 1) * (L(P.N) + P.b - Apl * P.mu) -
                                      L(P.m) * (L(P.N) - P.q)) / dl)};
    break;
  }
  case Label::C0:
    fp.coords = {0.0, static_cast<double>(Yc), 0.0, static_cast<double>(Wc)};
    break;
  case Label::R0:
    fp.coords = {0.0, static_cast<double>(Yc),
                 static_cast<double>(L(P.N) + P.a + L(P.delta) * (L(P.b) + P.q) / dl),
                 static_cast<double>(Wc)};
    break;
  default:
    break;
  }
  if (fp.nearDegenerate) fp.notes = "near-degenerate: |q-1-m| small";
  return fp;
}

FixedPoint compute(const SystemParams& P, Label l) {
  const double Ap = xbound(P), Aq = ybound(P);
  FixedPoint fp;
  fp.label = l;
  switch (l) {
  case Label::M0: {
    const double D = discriminant(P);
    fp.nearDegenerate = std::fabs(D) < numerics().degeneracyBand * scale_of(P) * scale_of(P);
    if (D == 0.0) {
      fp.defined = false;
      fp.coords = {NAN, NAN, NAN, NAN};
      fp.notes = "undefined: D = 0";
      return fp;
    }
    using L = long double;
    const L Dl = L(P.delta) * P.mu - (L(P.p) - 1 - P.s) * (L(P.q) - 1 - P.m);
    const L g = ((L(P.p) + P.a) * (L(P.q) - 1 - P.m) + (L(P.q) + P.b) * P.delta) / Dl;
    const L x = ((L(P.q) + P.b) * (L(P.p) - 1 - P.s) + (L(P.p) + P.a) * P.mu) / Dl;
    fp.coords = {static_cast<double>(g), static_cast<double>(x),
                 static_cast<double>(L(P.N) - P.p - (L(P.p) - 1) * g),
                 static_cast<double>(L(P.N) - P.q - (L(P.q) - 1) * x)};
    if (fp.nearDegenerate) fp.notes = "near-degenerate: |D| small";
    return fp;
  }
  case Label::O:
    fp.coords = {0, 0, 0, 0};
    return fp;
  case Label::N0:
    fp.coords = {0, 0, P.N + P.a, P.N + P.b};
    return fp;
  case Label::A0:
    fp.coords = {Ap, Aq, 0, 0};
    return fp;
  case Label::I0:
    fp.coords = {Ap, 0, 0, 0};
    return fp;
  case Label::K0:
    fp.coords = {0, 0, P.N + P.a, 0};
    return fp;
  case Label::G0:
    fp.coords = {Ap, 0, 0,
                 static_cast<double>((long double)P.N + P.b - (long double)P.mu * ((long double)P.N - P.p) / ((long double)P.p - 1))};
    return fp;
  case Label::P0:
  case Label::C0:
  case Label::R0:
    return p_side(P, l);
  case Label::J0:
  case Label::L0:
  case Label::H0:
  case Label::Q0:
  case Label::D0:
  case Label::S0: {
    FixedPoint img = compute(swapped(P), partner(l));
    img.label = l;
    if (img.defined) img.coords = swap_coords(img.coords);
    if (!img.defined) img.notes = "undefined: p-1-s = 0";
    else if (img.nearDegenerate) img.notes = "near-degenerate: |p-1-s| small";
    return img;
  }
  }
  return fp;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

} // namespace

std::string_view to_string(Label l) { return kNames[static_cast<int>(l)]; }

std::optional<Label> label_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == s) return kAllLabels[i];
  return std::nullopt;
}

Label partner(Label l) {
  switch (l) {
  case Label::I0: return Label::J0;
  case Label::J0: return Label::I0;
  case Label::K0: return Label::L0;
  case Label::L0: return Label::K0;
  case Label::G0: return Label::H0;
  case Label::H0: return Label::G0;
  case Label::P0: return Label::Q0;
  case Label::Q0: return Label::P0;
  case Label::C0: return Label::D0;
  case Label::D0: return Label::C0;
  case Label::R0: return Label::S0;
  case Label::S0: return Label::R0;
  default: return l;
  }
}

Vec4 swap_coords(const Vec4& c) { return {c[1], c[0], c[3], c[2]}; }

FixedPoint fixed_point(const SystemParams& P, Label l) {
  FixedPoint fp = compute(P, l);
  if (fp.defined) fp.admissible = admissibility(fp, P).admissible;
  return fp;
}

std::vector<FixedPoint> fixed_point_catalog(const SystemParams& P) {
  std::vector<FixedPoint> out;
  out.reserve(kAllLabels.size());
  for (Label l : kAllLabels) out.push_back(fixed_point(P, l));
  return out;
}

AdmissibilityReport admissibility(const FixedPoint& fp, const SystemParams& P) {
  if (!fp.defined) throw UndefinedPoint(std::string(to_string(fp.label)) + " is not defined");
  AdmissibilityReport rep;
  const double tol = numerics().boundaryTol * scale_of(P);
  const auto& c = fp.coords;
  const double signed_[4] = {c[0], c[1], P.eps1 * c[2], P.eps2 * c[3]};
  static const char* names[4] = {"X", "Y", "Z", "W"};
  if (fp.label == Label::M0) {
    const double Ap = xbound(P), Aq = ybound(P);
    // strict interior, equivalent to 0 < gamma < (N-p)/(p-1), 0 < xi < (N-q)/(q-1) for (S)
    if (!(c[0] > 0)) rep.violations.push_back("gamma > 0 (gamma = " + fmt(c[0]) + ")");
    if (!(c[1] > 0)) rep.violations.push_back("xi > 0 (xi = " + fmt(c[1]) + ")");
    if (P.eps1 == 1 && !(c[0] < Ap))
      rep.violations.push_back("gamma < (N-p)/(p-1) (gamma = " + fmt(c[0]) + ")");
    if (P.eps2 == 1 && !(c[1] < Aq))
      rep.violations.push_back("xi < (N-q)/(q-1) (xi = " + fmt(c[1]) + ")");
    if (P.eps1 == -1 && !(c[2] < 0))
      rep.violations.push_back("gamma > (N-p)/(p-1) for eps1 = -1 (gamma = " + fmt(c[0]) + ")");
    if (P.eps2 == -1 && !(c[3] < 0))
      rep.violations.push_back("xi > (N-q)/(q-1) for eps2 = -1 (xi = " + fmt(c[1]) + ")");
  } else {
    for (int i = 0; i < 4; ++i) {
      if (signed_[i] < -tol) {
        std::string lhs = (i >= 2 && (i == 2 ? P.eps1 : P.eps2) == -1) ? std::string("-") + names[i]
                                                                       : std::string(names[i]);
        rep.violations.push_back(lhs + " >= 0 (" + names[i] + " = " + fmt(c[i]) + ")");
      }
    }
  }
  rep.admissible = rep.violations.empty();
  for (Label other : kAllLabels) {
    if (other == fp.label) continue;
    const FixedPoint o = compute(P, other);
    if (!o.defined) continue;
    bool same = true;
    for (int i = 0; i < 4; ++i) same = same && std::fabs(o.coords[i] - c[i]) <= tol;
    if (same) rep.coincidesWith.push_back(other);
  }
  rep.boundary = !rep.coincidesWith.empty();
  return rep;
}

PowerSolution particular_solution(const SystemParams& P) {
  const auto e = derive_exponents(P);
  // A^{s+1-p} B^delta = c1 and A^mu B^{m+1-q} = c2
  const double c1 = P.eps1 * std::pow(std::fabs(e.gamma), P.p - 2) * e.gamma *
                    (P.N - P.p - (P.p - 1) * e.gamma);
  const double c2 = P.eps2 * std::pow(std::fabs(e.xi), P.q - 2) * e.xi *
                    (P.N - P.q - (P.q - 1) * e.xi);
  if (!(c1 > 0) || !(c2 > 0))
    throw NotApplicable("no power solution for these signs: bases " + fmt(c1) + ", " + fmt(c2));
  const double l1 = std::log(c1), l2 = std::log(c2);
  PowerSolution ps;
  ps.gamma = e.gamma;
  ps.xi = e.xi;
  ps.A = std::exp(((P.q - 1 - P.m) * l1 + P.delta * l2) / e.D);
  ps.B = std::exp(((P.p - 1 - P.s) * l2 + P.mu * l1) / e.D);
  return ps;
}

} // namespace efdyn
