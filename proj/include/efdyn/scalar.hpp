#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "efdyn/integrator.hpp"
#include "efdyn/model.hpp"

namespace efdyn {

enum class ScalarRegime { BelowQ1, AtQ1, Between, AtQ2, AboveQ2 };
enum class ScalarBehavior {
  SignChanging,      // regular trajectory crosses X = (N-p)/(p-1): u vanishes
  GroundStateCritical, // regular trajectory runs along the invariant line into A0
  GroundStateToM0,   // r^gamma u -> A
  Positive,          // stays positive, no limit identified within the horizon
  BlowsUp,           // |X| grows past the threshold with u > 0 (eps = -1 large solutions)
  Inconclusive
};

std::string_view to_string(ScalarRegime r);
std::string_view to_string(ScalarBehavior b);

struct ScalarPoint {
  std::string label;
  double X = 0.0;
  double Z = 0.0;
};

// M0, N0, A0, O of the planar system; M0 only when Q != p-1.
std::vector<ScalarPoint> scalar_fixed_points(const ScalarParams& S);

struct ScalarConnection {
  bool found = false;
  double exponentAtZero = 0.0;     // fitted -d ln u / d ln r as r -> 0
  double exponentAtInfinity = 0.0; // fitted as r -> infinity
  double expectedAtZero = 0.0;     // (N-p)/(p-1)
  double expectedAtInfinity = 0.0; // gamma
  std::vector<ScalarPhase> path;
};

struct ScalarReport {
  ScalarParams params;
  ScalarThresholds thresholds;
  double gamma = 0.0;
  ScalarRegime regime = ScalarRegime::Between;
  bool boundaryCase = false;
  ScalarBehavior regular = ScalarBehavior::Inconclusive;
  double signChangeT = 0.0;  // t where X reaches (N-p)/(p-1)
  double lineDrift = 0.0;    // max |(N+a) X/Ap + Z - (N+a)| along the regular path, Q = Q2
  double limitRatio = 0.0;   // r^gamma u / A at the end of the regular path
  std::vector<ScalarPhase> regularPath;
  ScalarConnection connection; // eps = -1, Q < Q1
  bool returnSampled = false;
  bool periodicOrbitFound = false;
  int returnSamples = 0;
  std::string note;
};

struct ScalarOptions {
  IntegratorOptions ode;
  double rho = 1e-4;
  double horizon = 60.0;
};

ScalarReport scalar_classify(const ScalarParams& S, const ScalarOptions& opt = {});

} // namespace efdyn
