#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efdyn/equilibria.hpp"
#include "efdyn/integrator.hpp"
#include "efdyn/model.hpp"

namespace efdyn {

enum class Termination { BlowUpX, BlowUpY, BlowUpBoth, BlowUpOther, ConvergedTo, MaxTime, EventHit, StepFailure };
std::string_view to_string(Termination t);

struct TimedEvent {
  double t = 0.0;
  std::string id;
};

struct Trajectory {
  std::vector<PhaseState> samples;
  Termination termination = Termination::MaxTime;
  std::optional<Label> convergedTo; // set with ConvergedTo
  std::string eventId;              // set with EventHit
  std::string failure;              // set with StepFailure
  std::vector<TimedEvent> events;
};

struct PhaseEvent {
  std::string id;
  std::function<double(const PhaseState&)> g;
  int direction = 0;
  bool terminal = false;
};

struct DynamicsOptions {
  IntegratorOptions ode;
  bool detectConvergence = true;
  double convergenceTol = 1e-8;
  int convergenceSteps = 5;
  double simultaneousWindow = 1e-6; // S3 / M3 window in t
  double hopfTol = 0.05;
};

// Integrates system (M) from init.t to tEnd (either direction).
Trajectory integrate_m(const SystemParams& P, const PhaseState& init, double tEnd,
                       const std::vector<PhaseEvent>& events = {}, const DynamicsOptions& opt = {});

enum class RadialStop { ZeroU, ZeroV, ZeroBoth, MaxRadius, Failure };
std::string_view to_string(RadialStop s);

struct RadialTrajectory {
  std::vector<RadialState> samples;
  RadialStop stop = RadialStop::MaxRadius;
  double rZero = 0.0; // radius of the first zero when stop is ZeroU, ZeroV or ZeroBoth
  std::string failure;
};

struct RadialOptions {
  double r0 = 1e-6;
  double rtol = 1e-12;
  double atol = 1e-20;
  double maxStep = 0.05;
};

// Radial system in (u, v, |u'|^{p-2}u', |v'|^{q-2}v') over t = ln r, started from the
// first-order series at r0.
RadialTrajectory integrate_radial(const SystemParams& P, double u0, double v0, double rMax,
                                  const RadialOptions& opt = {});

// Leading behaviour near N0 of the regular solution with data (u0, v0):
// X ~ kappa r^{lambda1}, Y ~ ell r^{lambda2}.
struct RegularGerm {
  double kappa = 0.0;
  double ell = 0.0;
  double lambda1 = 0.0; // (p+a)/(p-1)
  double lambda2 = 0.0; // (q+b)/(q-1)
};

RegularGerm regular_germ(const SystemParams& P, double u0, double v0);
// Inverse of regular_germ at r = 1: the data (u0, v0) whose germ is (x, y).
std::pair<double, double> data_from_germ(const SystemParams& P, double x, double y);

// Point on the unstable manifold of N0 with first-order correction, at t = 0.
PhaseState launch_regular(const SystemParams& P, double x, double y, double rho);

enum class SClass { S1, S2, S3, S, Inconclusive };
enum class MClass { M1, M2, M3, GS, Inconclusive };
std::string_view to_string(SClass c);
std::string_view to_string(MClass c);

struct ShotOptions {
  DynamicsOptions dyn;
  double horizon = 40.0;
  int retries = 2; // horizon doublings when the end state drifts along the rectangle edge
  // A pass this close (inf-norm, relative to max(1, |c|)) to an equilibrium with X, Y > 0
  // before either bound is crossed counts as convergence: saddles such as A0 repel the
  // numerical trajectory long before convergenceTol is reached.
  double approachTol = 1e-4;
};

struct ShotOutcome {
  double x = 0.0;
  double y = 0.0;
  SClass sClass = SClass::Inconclusive;
  MClass mClass = MClass::Inconclusive;
  std::optional<double> tX; // X reaches (N-p)/(p-1)
  std::optional<double> tY; // Y reaches (N-q)/(q-1)
  double blowUpRatio = 0.0; // X/Y at the blow-up threshold
  Termination termination = Termination::MaxTime;
  std::optional<Label> convergedTo;
  double horizonUsed = 0.0;
  bool secondCrossing() const { return tX.has_value() && tY.has_value(); }
};

ShotOutcome classify_shot(const SystemParams& P, double x, double y, const ShotOptions& opt = {});
// Same, returning the integrated trajectory as well.
ShotOutcome classify_shot(const SystemParams& P, double x, double y, const ShotOptions& opt,
                          Trajectory* path);

struct SearchOptions {
  ShotOptions shot;
  int grid = 16;
  double rho = 1e-4;
  double angleTol = 1e-10;
};

struct Witness {
  double theta = 0.0;
  double x = 0.0;
  double y = 0.0;
  ShotOutcome shot;
  bool direct = false; // the shot itself is S (or S3); otherwise a resolved boundary
};

struct GroundStateSearch {
  bool found = false;
  std::vector<Witness> groundStates;
  std::vector<Witness> dirichletSeeds;
  std::vector<double> boundaryAngles;
  std::vector<ShotOutcome> grid;
  std::vector<double> gridAngles;
};

GroundStateSearch search_ground_state(const SystemParams& P, const SearchOptions& opt = {});

struct DirichletResult {
  bool found = false;
  double R = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;
  double mismatch = 0.0; // |rU - rV| / R at the final bracket
  std::string reason;
  RadialTrajectory profile;
};

struct DirichletOptions {
  SearchOptions search;
  double u0 = 1.0;
  double rMax = 1e6;
  double relTol = 1e-13;
};

DirichletResult search_dirichlet(const SystemParams& P, const DirichletOptions& opt = {});

} // namespace efdyn
