#include "efdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "efdyn/errors.hpp"
#include "efdyn/numerics.hpp"

namespace efdyn {

std::string_view to_string(Termination t) {
  switch (t) {
  case Termination::BlowUpX: return "BlowUpX";
  case Termination::BlowUpY: return "BlowUpY";
  case Termination::BlowUpBoth: return "BlowUpBoth";
  case Termination::BlowUpOther: return "BlowUpOther";
  case Termination::ConvergedTo: return "ConvergedTo";
  case Termination::MaxTime: return "MaxTime";
  case Termination::EventHit: return "EventHit";
  case Termination::StepFailure: return "StepFailure";
  }
  return "?";
}

std::string_view to_string(RadialStop s) {
  switch (s) {
  case RadialStop::ZeroU: return "ZeroU";
  case RadialStop::ZeroV: return "ZeroV";
  case RadialStop::ZeroBoth: return "ZeroBoth";
  case RadialStop::MaxRadius: return "MaxRadius";
  case RadialStop::Failure: return "Failure";
  }
  return "?";
}

std::string_view to_string(SClass c) {
  switch (c) {
  case SClass::S1: return "S1";
  case SClass::S2: return "S2";
  case SClass::S3: return "S3";
  case SClass::S: return "S";
  case SClass::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string_view to_string(MClass c) {
  switch (c) {
  case MClass::M1: return "M1";
  case MClass::M2: return "M2";
  case MClass::M3: return "M3";
  case MClass::GS: return "GS";
  case MClass::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

using S4 = StateN<4>;

Vec4 as_vec(const S4& x) { return {x[0], x[1], x[2], x[3]}; }

double vmax(const Vec4& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::fabs(v));
  return m;
}

double dist_inf(const S4& x, const Vec4& c) {
  double d = 0.0;
  for (int i = 0; i < 4; ++i) d = std::max(d, std::fabs(x[i] - c[i]));
  return d;
}

void require_source(const SystemParams& P) {
  const auto rep = validate_params(P, Regime::Source);
  if (!rep.ok) {
    std::string msg = "source regime required:";
    for (const auto& f : rep.failures()) msg += " " + f;
    throw PreconditionViolated(msg);
  }
}

} // namespace

Trajectory integrate_m(const SystemParams& P, const PhaseState& init, double tEnd,
                       const std::vector<PhaseEvent>& events, const DynamicsOptions& opt) {
  const S4 x0{init.X, init.Y, init.Z, init.W};
  for (double v : x0)
    if (!std::isfinite(v)) throw PreconditionViolated("initial state must be finite");

  std::vector<EventSpec<4>> specs;
  specs.reserve(events.size());
  for (const auto& e : events) {
    auto g = e.g;
    specs.push_back({e.id, [g](const S4& x) { return g(PhaseState{0.0, x[0], x[1], x[2], x[3]}); },
                     e.direction, e.terminal});
  }

  std::vector<FixedPoint> targets;
  if (opt.detectConvergence) {
    for (const auto& fp : fixed_point_catalog(P)) {
      bool finite = fp.defined;
      for (double c : fp.coords) finite = finite && std::isfinite(c);
      if (finite) targets.push_back(fp);
    }
  }
  int streak = 0;
  std::optional<Label> candidate;
  std::optional<Label> converged;
  auto afterStep = [&](double, const S4& x) {
    if (targets.empty()) return false;
    std::optional<Label> hit;
    for (const auto& fp : targets)
      if (dist_inf(x, fp.coords) < opt.convergenceTol) {
        hit = fp.label;
        break;
      }
    if (hit && hit == candidate) {
      ++streak;
    } else {
      candidate = hit;
      streak = hit ? 1 : 0;
    }
    if (hit && streak >= opt.convergenceSteps) {
      converged = hit;
      return true;
    }
    return false;
  };

  auto rhs = [&P](const S4& x, S4& dx, double) {
    const Vec4 f = vector_field(P, as_vec(x));
    for (int i = 0; i < 4; ++i) dx[i] = f[i];
  };
  auto run = run_ode<4>(rhs, init.t, x0, tEnd, opt.ode, specs,
                        std::function<bool(double, const S4&)>(afterStep));

  Trajectory tr;
  tr.samples.reserve(run.t.size());
  for (std::size_t i = 0; i < run.t.size(); ++i)
    tr.samples.push_back(PhaseState{run.t[i], run.x[i][0], run.x[i][1], run.x[i][2], run.x[i][3]});
  for (const auto& e : run.events) tr.events.push_back({e.t, e.id});

  switch (run.stop) {
  case StopKind::Horizon: tr.termination = Termination::MaxTime; break;
  case StopKind::Callback:
    tr.termination = Termination::ConvergedTo;
    tr.convergedTo = converged;
    break;
  case StopKind::Event:
    tr.termination = Termination::EventHit;
    tr.eventId = run.detail;
    break;
  case StopKind::Failure:
    tr.termination = Termination::StepFailure;
    tr.failure = run.detail;
    break;
  case StopKind::BlowUp: {
    const auto& e = tr.samples.back();
    const double ax = std::fabs(e.X), ay = std::fabs(e.Y);
    const double big = std::max({ax, ay, std::fabs(e.Z), std::fabs(e.W)});
    if (ax < big && ay < big) {
      tr.termination = Termination::BlowUpOther;
    } else if (ay > 0 && std::fabs(ax / ay - 1.0) < opt.hopfTol) {
      tr.termination = Termination::BlowUpBoth;
    } else {
      tr.termination = ax >= ay ? Termination::BlowUpX : Termination::BlowUpY;
    }
    break;
  }
  }
  return tr;
}

RegularGerm regular_germ(const SystemParams& P, double u0, double v0) {
  RegularGerm g;
  g.lambda1 = (P.p + P.a) / (P.p - 1.0);
  g.lambda2 = (P.q + P.b) / (P.q - 1.0);
  g.kappa = std::pow(std::pow(u0, P.s) * std::pow(v0, P.delta) / (P.N + P.a), 1.0 / (P.p - 1.0)) / u0;
  g.ell = std::pow(std::pow(u0, P.mu) * std::pow(v0, P.m) / (P.N + P.b), 1.0 / (P.q - 1.0)) / v0;
  return g;
}

std::pair<double, double> data_from_germ(const SystemParams& P, double x, double y) {
  if (!(x > 0) || !(y > 0)) throw PreconditionViolated("germ coordinates must be positive");
  // (s+1-p) ln u0 + delta ln v0 = c1,  mu ln u0 + (m+1-q) ln v0 = c2
  const double a11 = P.s + 1.0 - P.p, a12 = P.delta;
  const double a21 = P.mu, a22 = P.m + 1.0 - P.q;
  const double c1 = (P.p - 1.0) * std::log(x) + std::log(P.N + P.a);
  const double c2 = (P.q - 1.0) * std::log(y) + std::log(P.N + P.b);
  const double det = a11 * a22 - a12 * a21;
  if (det == 0.0) throw ZeroDiscriminant("D = 0");
  const double lu = (c1 * a22 - a12 * c2) / det;
  const double lv = (a11 * c2 - a21 * c1) / det;
  return {std::exp(lu), std::exp(lv)};
}

PhaseState launch_regular(const SystemParams& P, double x, double y, double rho) {
  if (!(x >= 0) || !(y >= 0)) throw PreconditionViolated("launch_regular needs x, y >= 0");
  const double r2 = x * x + y * y;
  if (!(r2 > 0)) throw PreconditionViolated("launch_regular needs (x, y) != (0, 0)");
  if (r2 > rho * rho * (1.0 + 1e-12)) throw PreconditionViolated("seed lies outside the ball of radius rho");
  const double l1 = (P.p + P.a) / (P.p - 1.0);
  const double l2 = (P.q + P.b) / (P.q - 1.0);
  const double na = P.N + P.a, nb = P.N + P.b;
  const double zt = -na * (P.s * x / (l1 + na) + P.delta * y / (l2 + na));
  const double wt = -nb * (P.mu * x / (l1 + nb) + P.m * y / (l2 + nb));
  return PhaseState{0.0, x, y, na + zt, nb + wt};
}

RadialTrajectory integrate_radial(const SystemParams& P, double u0, double v0, double rMax,
                                  const RadialOptions& opt) {
  if (std::min(P.p + P.a, P.q + P.b) <= 0) throw SeriesInvalid("min(p+a, q+b) must be positive");
  require_source(P);
  if (!(u0 > 0) || !(v0 > 0)) throw PreconditionViolated("u0, v0 must be positive");
  if (!(rMax > opt.r0)) throw PreconditionViolated("rMax must exceed the starting radius");

  const double p1 = P.p - 1.0, q1 = P.q - 1.0;
  const double r0 = opt.r0;
  // first-order series at r0
  const double fu = std::pow(u0, P.s) * std::pow(v0, P.delta) / (P.N + P.a);
  const double fv = std::pow(u0, P.mu) * std::pow(v0, P.m) / (P.N + P.b);
  const double phi0 = -fu * std::pow(r0, 1.0 + P.a);
  const double psi0 = -fv * std::pow(r0, 1.0 + P.b);
  const double uS = u0 - p1 / (P.p + P.a) * std::pow(fu, 1.0 / p1) * std::pow(r0, (P.p + P.a) / p1);
  const double vS = v0 - q1 / (P.q + P.b) * std::pow(fv, 1.0 / q1) * std::pow(r0, (P.q + P.b) / q1);

  auto spow_inv = [](double x, double k) { return x >= 0 ? std::pow(x, k) : -std::pow(-x, k); };
  auto rhs = [&](const S4& x, S4& dx, double t) {
    const double r = std::exp(t);
    const double u = std::max(x[0], 0.0), v = std::max(x[1], 0.0);
    dx[0] = r * spow_inv(x[2], 1.0 / p1);
    dx[1] = r * spow_inv(x[3], 1.0 / q1);
    dx[2] = -(P.N - 1.0) * x[2] - std::pow(r, 1.0 + P.a) * std::pow(u, P.s) * std::pow(v, P.delta);
    dx[3] = -(P.N - 1.0) * x[3] - std::pow(r, 1.0 + P.b) * std::pow(u, P.mu) * std::pow(v, P.m);
  };

  IntegratorOptions io;
  io.rtol = opt.rtol;
  io.atol = opt.atol;
  io.maxStep = opt.maxStep;
  io.blowUp = 1e300;
  std::vector<EventSpec<4>> ev = {{"u=0", [](const S4& x) { return x[0]; }, -1, true},
                                  {"v=0", [](const S4& x) { return x[1]; }, -1, true}};
  auto run = run_ode<4>(rhs, std::log(r0), S4{uS, vS, phi0, psi0}, std::log(rMax), io, ev);

  RadialTrajectory out;
  out.samples.reserve(run.t.size());
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    const auto& x = run.x[i];
    out.samples.push_back(RadialState{std::exp(run.t[i]), x[0], x[1], spow_inv(x[2], 1.0 / p1),
                                      spow_inv(x[3], 1.0 / q1)});
  }
  switch (run.stop) {
  case StopKind::Horizon: out.stop = RadialStop::MaxRadius; break;
  case StopKind::Event: {
    bool zu = false, zv = false;
    const double tEnd = run.t.back();
    for (const auto& e : run.events) {
      if (std::fabs(e.t - tEnd) > io.eventTol) continue;
      zu = zu || e.id == "u=0";
      zv = zv || e.id == "v=0";
    }
    out.stop = zu && zv ? RadialStop::ZeroBoth : (zu ? RadialStop::ZeroU : RadialStop::ZeroV);
    out.rZero = out.samples.back().r;
    break;
  }
  default:
    out.stop = RadialStop::Failure;
    out.failure = run.detail;
    break;
  }
  return out;
}

namespace {

ShotOutcome shoot_once(const SystemParams& P, double x, double y, double horizon,
                       const ShotOptions& opt, Trajectory* path) {
  const double Ap = xbound(P), Aq = ybound(P);
  std::vector<PhaseEvent> ev = {
      {"X=Ap", [Ap](const PhaseState& s) { return s.X - Ap; }, +1, false},
      {"Y=Aq", [Aq](const PhaseState& s) { return s.Y - Aq; }, +1, false}};
  const PhaseState seed = launch_regular(P, x, y, std::hypot(x, y));
  Trajectory tr = integrate_m(P, seed, seed.t + horizon, ev, opt.dyn);

  ShotOutcome o;
  o.x = x;
  o.y = y;
  o.termination = tr.termination;
  o.convergedTo = tr.convergedTo;
  o.horizonUsed = horizon;
  for (const auto& e : tr.events) {
    if (e.id == "X=Ap" && !o.tX) o.tX = e.t;
    if (e.id == "Y=Aq" && !o.tY) o.tY = e.t;
  }
  const auto& last = tr.samples.back();
  o.blowUpRatio = last.Y != 0.0 ? last.X / last.Y : INFINITY;
  const double w = opt.dyn.simultaneousWindow;

  // closest pass to a possible ground-state limit before the first crossing
  std::optional<Label> approached;
  if (opt.approachTol > 0) {
    const double tCross = std::min(o.tX.value_or(INFINITY), o.tY.value_or(INFINITY));
    std::vector<FixedPoint> limits;
    for (const auto& fp : fixed_point_catalog(P))
      if (fp.defined && fp.label != Label::N0 && fp.coords[0] > 0 && fp.coords[1] > 0 &&
          std::isfinite(fp.coords[2]) && std::isfinite(fp.coords[3]))
        limits.push_back(fp);
    for (const auto& s : tr.samples) {
      if (s.t >= tCross || approached) break;
      for (const auto& fp : limits) {
        const double sc = std::max(1.0, vmax(fp.coords));
        if (dist_inf({s.X, s.Y, s.Z, s.W}, fp.coords) < opt.approachTol * sc) {
          approached = fp.label;
          break;
        }
      }
    }
  }

  if (approached) {
    o.sClass = SClass::S;
    o.mClass = MClass::GS;
    if (!o.convergedTo) o.convergedTo = approached;
  } else if (o.tX || o.tY) {
    if (o.tX && o.tY && std::fabs(*o.tX - *o.tY) <= w)
      o.sClass = SClass::S3;
    else if (o.tX && (!o.tY || *o.tX < *o.tY))
      o.sClass = SClass::S1;
    else
      o.sClass = SClass::S2;
    switch (tr.termination) {
    case Termination::BlowUpX: o.mClass = MClass::M1; break;
    case Termination::BlowUpY: o.mClass = MClass::M2; break;
    case Termination::BlowUpBoth: o.mClass = MClass::M3; break;
    default: o.mClass = MClass::Inconclusive; break;
    }
  } else if (tr.termination == Termination::ConvergedTo || tr.termination == Termination::MaxTime) {
    const double edge = std::min(Ap - last.X, Aq - last.Y);
    const bool drifting = tr.termination == Termination::MaxTime && edge < 1e-2 * std::min(Ap, Aq);
    o.sClass = drifting ? SClass::Inconclusive : SClass::S;
    o.mClass = drifting ? MClass::Inconclusive : MClass::GS;
  }
  if (path) *path = std::move(tr);
  return o;
}

} // namespace

ShotOutcome classify_shot(const SystemParams& P, double x, double y, const ShotOptions& opt,
                          Trajectory* path) {
  double horizon = opt.horizon;
  ShotOutcome o = shoot_once(P, x, y, horizon, opt, path);
  for (int k = 0; k < opt.retries && (o.sClass == SClass::Inconclusive || o.mClass == MClass::Inconclusive);
       ++k) {
    horizon *= 2.0;
    o = shoot_once(P, x, y, horizon, opt, path);
  }
  // still inside N at the end of the widest horizon: the trajectory stayed for the full run
  if (o.sClass == SClass::Inconclusive && !o.tX && !o.tY &&
      (o.termination == Termination::MaxTime || o.termination == Termination::ConvergedTo)) {
    o.sClass = SClass::S;
    o.mClass = MClass::GS;
  }
  return o;
}

ShotOutcome classify_shot(const SystemParams& P, double x, double y, const ShotOptions& opt) {
  return classify_shot(P, x, y, opt, nullptr);
}

namespace {

struct Probe {
  double theta;
  ShotOutcome shot;
};

Probe probe(const SystemParams& P, double theta, const SearchOptions& opt) {
  const double x = opt.rho * std::cos(theta);
  const double y = opt.rho * std::sin(theta);
  return {theta, classify_shot(P, x, y, opt.shot)};
}

Witness witness(const Probe& pr, bool direct) {
  return Witness{pr.theta, pr.shot.x, pr.shot.y, pr.shot, direct};
}

bool near_simultaneous(const ShotOutcome& o, double w) {
  return o.tX && o.tY && std::fabs(*o.tX - *o.tY) <= w;
}

} // namespace

GroundStateSearch search_ground_state(const SystemParams& P, const SearchOptions& opt) {
  require_source(P);
  if (opt.grid < 2) throw PreconditionViolated("angular grid needs at least two points");
  GroundStateSearch res;
  const double h = 0.5 * std::numbers::pi / opt.grid;
  std::vector<Probe> grid;
  for (int i = 0; i < opt.grid; ++i) {
    grid.push_back(probe(P, (i + 0.5) * h, opt));
    res.gridAngles.push_back(grid.back().theta);
    res.grid.push_back(grid.back().shot);
    if (grid.back().shot.sClass == SClass::S) res.groundStates.push_back(witness(grid.back(), true));
    if (grid.back().shot.sClass == SClass::S3) res.dirichletSeeds.push_back(witness(grid.back(), true));
  }

  const double w = opt.shot.dyn.simultaneousWindow;
  for (int i = 0; i + 1 < opt.grid; ++i) {
    Probe a = grid[i], b = grid[i + 1];
    const bool s12 = (a.shot.sClass == SClass::S1 && b.shot.sClass == SClass::S2) ||
                     (a.shot.sClass == SClass::S2 && b.shot.sClass == SClass::S1);
    if (!s12) continue;
    bool resolved = false;
    // bisect to the angular tolerance, then keep going while both sides cross both bounds
    while (!resolved) {
      const double width = b.theta - a.theta;
      const bool both = a.shot.secondCrossing() && b.shot.secondCrossing();
      if (width <= opt.angleTol) {
        if (!both) break;
        if (width <= 1e-15 || near_simultaneous(a.shot, w) || near_simultaneous(b.shot, w)) break;
      }
      const double mid = 0.5 * (a.theta + b.theta);
      if (mid <= a.theta || mid >= b.theta) break;
      Probe m = probe(P, mid, opt);
      if (m.shot.sClass == SClass::S) {
        res.groundStates.push_back(witness(m, true));
        res.boundaryAngles.push_back(mid);
        resolved = true;
      } else if (m.shot.sClass == SClass::S3) {
        res.dirichletSeeds.push_back(witness(m, true));
        res.boundaryAngles.push_back(mid);
        resolved = true;
      } else if (m.shot.sClass == a.shot.sClass) {
        a = m;
      } else if (m.shot.sClass == b.shot.sClass) {
        b = m;
      } else {
        res.boundaryAngles.push_back(mid);
        resolved = true; // inconclusive midpoint; boundary located but not typed
      }
    }
    if (resolved) continue;
    const double mid = 0.5 * (a.theta + b.theta);
    res.boundaryAngles.push_back(mid);
    if (a.shot.secondCrossing() && b.shot.secondCrossing()) {
      const Probe& closer = std::fabs(*a.shot.tX - *a.shot.tY) <= std::fabs(*b.shot.tX - *b.shot.tY) ? a : b;
      res.dirichletSeeds.push_back(witness(closer, false));
    } else {
      res.groundStates.push_back(witness(Probe{mid, probe(P, mid, opt).shot}, false));
    }
  }
  res.found = !res.groundStates.empty();
  return res;
}

DirichletResult search_dirichlet(const SystemParams& P, const DirichletOptions& opt) {
  DirichletResult out;
  const auto gs = search_ground_state(P, opt.search);
  if (gs.dirichletSeeds.empty()) {
    out.reason = "no simultaneous-vanishing seed in the angular search";
    return out;
  }
  const Witness& wit = gs.dirichletSeeds.front();
  // the seed sits at t = 0, where X = kappa and Y = ell to first order
  auto [us, vs] = data_from_germ(P, wit.x, wit.y);
  const auto ex = derive_exponents(P);
  const double k = std::pow(opt.u0 / us, 1.0 / ex.gamma);
  const double vGuess = std::pow(k, ex.xi) * vs;

  auto shoot = [&](double v0) { return integrate_radial(P, opt.u0, v0, opt.rMax); };
  // u vanishing first means v0 is too large
  auto tooBig = [](const RadialTrajectory& t) { return t.stop == RadialStop::ZeroU; };
  auto tooSmall = [](const RadialTrajectory& t) { return t.stop == RadialStop::ZeroV; };

  double lo = vGuess * (1 - 1e-3), hi = vGuess * (1 + 1e-3);
  RadialTrajectory tLo = shoot(lo), tHi = shoot(hi);
  for (int i = 0; i < 60 && !tooSmall(tLo); ++i) {
    if (tLo.stop == RadialStop::ZeroBoth) break;
    lo *= 0.5;
    tLo = shoot(lo);
  }
  for (int i = 0; i < 60 && !tooBig(tHi); ++i) {
    if (tHi.stop == RadialStop::ZeroBoth) break;
    hi *= 2.0;
    tHi = shoot(hi);
  }
  auto finish = [&](const RadialTrajectory& t, double v0) {
    out.found = true;
    out.R = t.rZero;
    out.u0 = opt.u0;
    out.v0 = v0;
    out.profile = t;
    return out;
  };
  if (tLo.stop == RadialStop::ZeroBoth) return finish(tLo, lo);
  if (tHi.stop == RadialStop::ZeroBoth) return finish(tHi, hi);
  if (!tooSmall(tLo) || !tooBig(tHi)) {
    out.reason = "radial shooting could not bracket simultaneous vanishing";
    return out;
  }
  while (hi / lo - 1.0 > opt.relTol) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    RadialTrajectory tm = shoot(mid);
    if (tm.stop == RadialStop::ZeroBoth) return finish(tm, mid);
    if (tooBig(tm)) {
      hi = mid;
      tHi = std::move(tm);
    } else if (tooSmall(tm)) {
      lo = mid;
      tLo = std::move(tm);
    } else {
      out.reason = "radial shot reached rMax without a zero inside the bracket";
      return out;
    }
  }
  const double R = 0.5 * (tLo.rZero + tHi.rZero);
  out.mismatch = std::fabs(tLo.rZero - tHi.rZero) / R;
  if (out.mismatch > 1e-4) {
    out.reason = "zero radii of the bracketing shots do not meet";
    return out;
  }
  out.found = true;
  out.R = R;
  out.u0 = opt.u0;
  out.v0 = std::sqrt(lo * hi);
  out.profile = std::move(tHi);
  return out;
}

} // namespace efdyn
