#pragma once

namespace efdyn {

// Process-wide tolerances. Set once at startup; read-only afterwards.
struct Numerics {
  double identityTol = 1e-10;   // relative slack for exact identities
  double degeneracyBand = 1e-8; // |denominator| below this (scaled) is flagged
  double centerTol = 1e-9;      // |Re λ| < centerTol·(1+|λ|) counts as center
  double boundaryTol = 1e-12;   // equality test for inequality boundaries
};

const Numerics& numerics();
void set_numerics(const Numerics& n);

// True when |a-b| <= tol·max(1,|a|,|b|).
bool near(double a, double b, double tol);

} // namespace efdyn
