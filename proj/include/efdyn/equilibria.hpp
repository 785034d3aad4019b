#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efdyn/model.hpp"

namespace efdyn {

enum class Label { M0, O, N0, A0, I0, J0, K0, L0, G0, H0, P0, C0, R0, Q0, D0, S0 };

inline constexpr std::array<Label, 16> kAllLabels = {
    Label::M0, Label::O,  Label::N0, Label::A0, Label::I0, Label::J0, Label::K0, Label::L0,
    Label::G0, Label::H0, Label::P0, Label::C0, Label::R0, Label::Q0, Label::D0, Label::S0};

std::string_view to_string(Label l);
std::optional<Label> label_from_string(std::string_view s);

// Image of a label under (p,delta,s,a) <-> (q,mu,m,b) with X<->Y, Z<->W.
Label partner(Label l);

Vec4 swap_coords(const Vec4& c);

struct FixedPoint {
  Label label = Label::O;
  Vec4 coords{0, 0, 0, 0};
  bool defined = true;
  bool admissible = false;
  bool nearDegenerate = false;
  std::string notes;
};

// All sixteen equilibria, in kAllLabels order.
std::vector<FixedPoint> fixed_point_catalog(const SystemParams& P);
FixedPoint fixed_point(const SystemParams& P, Label l);

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<std::string> violations; // named inequalities that fail
  std::vector<Label> coincidesWith;    // other defined points at the same location
  bool boundary = false;               // defined but merged with another point
};

// Closure of the region where u, v decrease for the given signs:
// X >= 0, Y >= 0, eps1 Z >= 0, eps2 W >= 0. M0 uses the strict form.
AdmissibilityReport admissibility(const FixedPoint& fp, const SystemParams& P);

struct PowerSolution {
  double A = 0.0;
  double B = 0.0;
  double gamma = 0.0;
  double xi = 0.0;
};

// (A r^-gamma, B r^-xi) solving the radial system.
PowerSolution particular_solution(const SystemParams& P);

} // namespace efdyn
