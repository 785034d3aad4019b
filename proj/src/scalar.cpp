#include "efdyn/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "efdyn/errors.hpp"
#include "efdyn/numerics.hpp"

namespace efdyn {

std::string_view to_string(ScalarRegime r) {
  switch (r) {
  case ScalarRegime::BelowQ1: return "Q<Q1";
  case ScalarRegime::AtQ1: return "Q=Q1";
  case ScalarRegime::Between: return "Q1<Q<Q2";
  case ScalarRegime::AtQ2: return "Q=Q2";
  case ScalarRegime::AboveQ2: return "Q>Q2";
  }
  return "?";
}

std::string_view to_string(ScalarBehavior b) {
  switch (b) {
  case ScalarBehavior::SignChanging: return "sign-changing";
  case ScalarBehavior::GroundStateCritical: return "ground-state-critical";
  case ScalarBehavior::GroundStateToM0: return "ground-state-to-M0";
  case ScalarBehavior::Positive: return "positive";
  case ScalarBehavior::BlowsUp: return "blows-up";
  case ScalarBehavior::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

using S2 = StateN<2>;

double ap_of(const ScalarParams& S) { return (S.N - S.p) / (S.p - 1); }

ScalarPoint m0_of(const ScalarParams& S) {
  const double g = scalar_gamma(S);
  return {"M0", g, (S.p - 1) * (ap_of(S) - g)};
}

struct Jac2 {
  double a, b, c, d;
};

Jac2 jac(const ScalarParams& S, double X, double Z) {
  return {2 * X - ap_of(S) + Z / (S.p - 1), X / (S.p - 1), -S.Q * Z, S.N + S.a - S.Q * X - 2 * Z};
}

std::vector<ScalarPhase> to_path(const RunResult<2>& run) {
  std::vector<ScalarPhase> out;
  out.reserve(run.t.size());
  for (std::size_t i = 0; i < run.t.size(); ++i) out.push_back({run.t[i], run.x[i][0], run.x[i][1]});
  return out;
}

RunResult<2> run_scalar(const ScalarParams& S, double t0, S2 x0, double t1, const IntegratorOptions& io,
                        const std::vector<EventSpec<2>>& ev,
                        const std::function<bool(double, const S2&)>& cb = {}) {
  auto rhs = [&S](const S2& x, S2& dx, double) {
    const auto f = scalar_field(S, x[0], x[1]);
    dx[0] = f[0];
    dx[1] = f[1];
  };
  return run_ode<2>(rhs, t0, x0, t1, io, ev, cb);
}

// Least-squares slope of ln u against t over the samples selected by keep.
template <class Keep>
double fit_exponent(const ScalarParams& S, const std::vector<ScalarPhase>& path, Keep keep) {
  double n = 0, st = 0, sl = 0, stt = 0, stl = 0;
  for (const auto& ps : path) {
    if (!keep(ps) || ps.X == 0.0 || ps.Z == 0.0) continue;
    const double lu = std::log(scalar_from_phase(S, ps).u);
    n += 1;
    st += ps.t;
    sl += lu;
    stt += ps.t * ps.t;
    stl += ps.t * lu;
  }
  if (n < 3) return NAN;
  const double den = n * stt - st * st;
  if (den == 0.0) return NAN;
  return -(n * stl - st * sl) / den;
}

} // namespace

std::vector<ScalarPoint> scalar_fixed_points(const ScalarParams& S) {
  std::vector<ScalarPoint> pts;
  if (S.Q + 1 - S.p != 0.0) pts.push_back(m0_of(S));
  pts.push_back({"O", 0.0, 0.0});
  pts.push_back({"N0", 0.0, S.N + S.a});
  pts.push_back({"A0", ap_of(S), 0.0});
  return pts;
}

ScalarReport scalar_classify(const ScalarParams& S, const ScalarOptions& opt) {
  if (!(S.p > 1 && S.p < S.N)) throw PreconditionViolated("scalar analysis needs 1 < p < N");
  if (!(S.p + S.a > 0)) throw PreconditionViolated("scalar analysis needs p + a > 0");
  if (S.Q == S.p - 1) throw PreconditionViolated("Q = p - 1");
  if (S.eps != 1 && S.eps != -1) throw PreconditionViolated("eps must be +1 or -1");

  ScalarReport rep;
  rep.params = S;
  rep.thresholds = scalar_thresholds(S);
  rep.gamma = scalar_gamma(S);
  const double tol = numerics().identityTol;
  const double Q1 = rep.thresholds.Q1, Q2 = rep.thresholds.Q2;
  if (near(S.Q, Q1, tol)) rep.regime = ScalarRegime::AtQ1;
  else if (near(S.Q, Q2, tol)) rep.regime = ScalarRegime::AtQ2;
  else if (S.Q < Q1) rep.regime = ScalarRegime::BelowQ1;
  else if (S.Q < Q2) rep.regime = ScalarRegime::Between;
  else rep.regime = ScalarRegime::AboveQ2;
  rep.boundaryCase = rep.regime == ScalarRegime::AtQ1 || rep.regime == ScalarRegime::AtQ2;

  const double Ap = ap_of(S), na = S.N + S.a;
  const ScalarPoint M0 = m0_of(S);

  // regular trajectory from the unstable manifold of N0
  {
    const double l1 = (S.p + S.a) / (S.p - 1);
    const double x = S.eps * opt.rho;
    const S2 seed{x, na - na * S.Q * x / (l1 + na)};
    const bool critical = S.eps == 1 && rep.regime == ScalarRegime::AtQ2;
    std::vector<EventSpec<2>> ev;
    ev.push_back({"X=Ap", [Ap](const S2& s) { return s[0] - Ap; }, +1, !critical});
    int streak = 0;
    auto cb = [&](double, const S2& s) {
      const bool nearA0 = std::hypot(s[0] - Ap, s[1]) < 1e-6;
      const bool nearM0 = std::hypot(s[0] - M0.X, s[1] - M0.Z) < 1e-8;
      // the critical path is tracked into A0 only; past it the line is a saddle separatrix
      if (critical) return nearA0;
      streak = nearM0 ? streak + 1 : 0;
      return streak >= 5;
    };
    // slow foci around M0 need longer runs; widen the horizon twice before giving up
    auto run = run_scalar(S, 0.0, seed, opt.horizon, opt.ode, ev, cb);
    for (int k = 0, h = 4; k < 2 && run.stop == StopKind::Horizon; ++k, h *= 4) {
      streak = 0;
      run = run_scalar(S, 0.0, seed, h * opt.horizon, opt.ode, ev, cb);
    }
    rep.regularPath = to_path(run);
    const auto& last = rep.regularPath.back();
    if (critical) {
      for (const auto& ps : rep.regularPath)
        rep.lineDrift = std::max(rep.lineDrift, std::fabs(na * ps.X / Ap + ps.Z - na));
      rep.regular = run.stop == StopKind::Callback ? ScalarBehavior::GroundStateCritical
                                                   : ScalarBehavior::Inconclusive;
      rep.note = "invariant line (N+a) X / Ap + Z = N+a carries the regular trajectory into A0";
    } else if (run.stop == StopKind::Event) {
      rep.regular = ScalarBehavior::SignChanging;
      rep.signChangeT = last.t;
    } else if (run.stop == StopKind::Callback) {
      rep.regular = ScalarBehavior::GroundStateToM0;
    } else if (run.stop == StopKind::BlowUp) {
      rep.regular = ScalarBehavior::BlowsUp;
    } else if (run.stop == StopKind::Horizon) {
      const bool inside = last.X > 0 && last.X < Ap && S.eps * last.Z > 0;
      rep.regular = inside ? ScalarBehavior::Positive : ScalarBehavior::Inconclusive;
    }
    if (S.Q + 1 - S.p > 0 && last.X != 0.0 && last.Z != 0.0 && M0.X > 0 && S.eps * M0.Z > 0) {
      const double A = std::pow(std::pow(M0.X, S.p - 1) * std::fabs(M0.Z), 1.0 / (S.Q + 1 - S.p));
      const double rgu = std::pow(std::pow(std::fabs(last.X), S.p - 1) * std::fabs(last.Z), 1.0 / (S.Q + 1 - S.p));
      rep.limitRatio = rgu / A;
    }
  }

  // eps = -1 below Q1: orbit from A0 (u ~ r^{-Ap} at 0) into M0 (u ~ A r^{-gamma} at infinity)
  if (S.eps == -1 && rep.regime == ScalarRegime::BelowQ1) {
    ScalarConnection& c = rep.connection;
    c.expectedAtZero = Ap;
    c.expectedAtInfinity = rep.gamma;
    const Jac2 J = jac(S, M0.X, M0.Z);
    const double tr = J.a + J.d, det = J.a * J.d - J.b * J.c;
    const double disc = tr * tr - 4 * det;
    std::vector<std::vector<ScalarPhase>> candidates;
    if (det < 0) {
      // saddle: the connection is a branch of the stable manifold, integrated backward
      const double lam = 0.5 * (tr - std::sqrt(disc));
      double vx = J.b, vz = lam - J.a;
      if (std::hypot(vx, vz) < 1e-14) {
        vx = lam - J.d;
        vz = J.c;
      }
      const double nv = std::hypot(vx, vz);
      for (double sg : {1.0, -1.0}) {
        const S2 x0{M0.X + sg * 1e-7 * vx / nv, M0.Z + sg * 1e-7 * vz / nv};
        auto cb = [&](double, const S2& s) { return std::hypot(s[0] - Ap, s[1]) < 1e-6; };
        auto run = run_scalar(S, 0.0, x0, -opt.horizon, opt.ode, {}, cb);
        if (run.stop == StopKind::Callback) {
          auto path = to_path(run);
          std::reverse(path.begin(), path.end());
          candidates.push_back(std::move(path));
        }
      }
    } else {
      // attracting M0: follow the slow unstable direction out of A0
      const Jac2 JA = jac(S, Ap, 0.0);
      const double lz = JA.d;
      double vx = JA.b, vz = lz - JA.a;
      const double nv = std::hypot(vx, vz);
      const double sg = vz < 0 ? 1.0 : -1.0; // into Z < 0
      const S2 x0{Ap + sg * 1e-7 * vx / nv, sg * 1e-7 * vz / nv};
      int streak = 0;
      auto cb = [&](double, const S2& s) {
        streak = std::hypot(s[0] - M0.X, s[1] - M0.Z) < 1e-8 ? streak + 1 : 0;
        return streak >= 5;
      };
      auto run = run_scalar(S, 0.0, x0, opt.horizon, opt.ode, {}, cb);
      if (run.stop == StopKind::Callback) candidates.push_back(to_path(run));
    }
    for (auto& path : candidates) {
      const double d0 = std::hypot(path.front().X - Ap, path.front().Z);
      if (d0 > 1e-5) continue;
      c.found = true;
      c.exponentAtZero = fit_exponent(S, path, [&](const ScalarPhase& ps) {
        return std::hypot(ps.X - Ap, ps.Z) < 1e-3;
      });
      c.exponentAtInfinity = fit_exponent(S, path, [&](const ScalarPhase& ps) {
        return std::hypot(ps.X - M0.X, ps.Z - M0.Z) < 1e-3;
      });
      c.path = std::move(path);
      break;
    }
  }

  // Poincare return sampling on the ray {Z = Z*, X > X*}
  const bool m0Admissible = M0.X > 0 && S.eps * M0.Z > 0;
  if (m0Admissible && rep.regime != ScalarRegime::AtQ2) {
    rep.returnSampled = true;
    double prevGap = NAN;
    const double Zs = M0.Z;
    for (int k = 1; k <= 8; ++k) {
      const double h = 0.1 * k * std::min(M0.X, std::max(Ap - M0.X, 0.1 * M0.X));
      const S2 x0{M0.X + h, Zs};
      std::vector<EventSpec<2>> ev = {{"section", [Zs](const S2& s) { return s[1] - Zs; }, 0, false}};
      auto run = run_scalar(S, 0.0, x0, opt.horizon, opt.ode, ev);
      std::vector<double> returns;
      for (const auto& e : run.events)
        if (e.x[0] > M0.X && e.t > 1e-6) returns.push_back(e.x[0]);
      if (returns.empty()) continue;
      ++rep.returnSamples;
      const double gap = returns.front() - x0[0];
      if (std::fabs(gap) < 1e-9 * std::max(1.0, h)) rep.periodicOrbitFound = true;
      if (!std::isnan(prevGap) && (gap > 0) != (prevGap > 0)) rep.periodicOrbitFound = true;
      prevGap = gap;
    }
  }
  return rep;
}

} // namespace efdyn
