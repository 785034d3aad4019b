#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace efdyn {

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double maxStep = 0.25;   // in t; keeps event brackets tight
  double eventTol = 1e-10; // bisection width in t
  double blowUp = 1e6;     // any |x_i| above this ends the run
  std::size_t maxSteps = 2000000;
};

template <std::size_t Dim>
using StateN = std::array<double, Dim>;

template <std::size_t Dim>
struct EventSpec {
  std::string id;
  std::function<double(const StateN<Dim>&)> g;
  int direction = 0; // +1 rising, -1 falling, 0 either (along the integration direction)
  bool terminal = false;
};

template <std::size_t Dim>
struct EventRecord {
  double t = 0.0;
  std::string id;
  StateN<Dim> x{};
};

enum class StopKind { Horizon, Event, BlowUp, Callback, Failure };

template <std::size_t Dim>
struct RunResult {
  std::vector<double> t;
  std::vector<StateN<Dim>> x;
  std::vector<EventRecord<Dim>> events;
  StopKind stop = StopKind::Horizon;
  std::string detail;
};

namespace detail {

template <std::size_t Dim>
double max_abs(const StateN<Dim>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

inline bool crossed(double a, double b, int dir) {
  if (dir >= 0 && a < 0 && b >= 0) return true;
  if (dir <= 0 && a > 0 && b <= 0) return true;
  return false;
}

} // namespace detail

// Dormand-Prince 5(4) with dense output. Events are located by bisection on the
// interpolant; blow-up is an implicit terminal event on max |x_i|. The callback runs
// after every accepted step and stops the run by returning true.
template <std::size_t Dim, class Rhs>
RunResult<Dim> run_ode(Rhs&& rhs, double t0, const StateN<Dim>& x0, double t1,
                       const IntegratorOptions& opt, const std::vector<EventSpec<Dim>>& events,
                       const std::function<bool(double, const StateN<Dim>&)>& afterStep = {}) {
  namespace ode = boost::numeric::odeint;
  using State = StateN<Dim>;
  RunResult<Dim> out;
  out.t.push_back(t0);
  out.x.push_back(x0);
  if (t1 == t0) return out;
  const double dir = t1 > t0 ? 1.0 : -1.0;

  // odeint's max_dt clamp drops the sign of dt, so backward runs use tau = -t
  auto sys = [&rhs, dir](const State& x, State& dx, double tau) {
    rhs(x, dx, dir * tau);
    for (auto& v : dx) v *= dir;
  };
  auto stepper = ode::make_dense_output(opt.atol, opt.rtol, opt.maxStep,
                                        ode::runge_kutta_dopri5<State>());
  stepper.initialize(x0, dir * t0, std::min(1e-3, opt.maxStep));
  const double tau1 = dir * t1;

  std::vector<double> gPrev(events.size());
  for (std::size_t k = 0; k < events.size(); ++k) gPrev[k] = events[k].g(x0);
  double bPrev = detail::max_abs<Dim>(x0) - opt.blowUp;

  State tmp;
  auto locate = [&](const std::function<double(const State&)>& g, double ta, double tb, double ga) {
    // invariant: sign(g(ta)) = sign(ga), sign change inside (ta, tb]
    for (int it = 0; it < 200 && std::fabs(tb - ta) > opt.eventTol; ++it) {
      const double tm = 0.5 * (ta + tb);
      stepper.calc_state(tm, tmp);
      const double gm = g(tmp);
      if ((gm > 0) == (ga > 0) && gm != 0.0) {
        ta = tm;
        ga = gm;
      } else {
        tb = tm;
      }
    }
    return tb;
  };

  for (std::size_t n = 0; n < opt.maxSteps; ++n) {
    std::pair<double, double> span;
    try {
      span = stepper.do_step(sys);
    } catch (const std::exception& e) {
      out.stop = StopKind::Failure;
      out.detail = e.what();
      return out;
    }
    const double ta = span.first;
    double tb = span.second;
    bool pastEnd = tb >= tau1;
    if (pastEnd) tb = tau1;
    State xb;
    stepper.calc_state(tb, xb);
    bool finite = true;
    for (double v : xb) finite = finite && std::isfinite(v);

    // earliest terminal condition inside [ta, tb]
    double tStop = tb;
    int stopWhich = -2; // -2 none, -1 blow-up, k event
    std::vector<EventRecord<Dim>> found;
    const double bNow = finite ? detail::max_abs<Dim>(xb) - opt.blowUp : 1.0;
    if (bPrev < 0 && bNow >= 0) {
      const double tc = locate([&](const State& x) { return detail::max_abs<Dim>(x) - opt.blowUp; },
                               ta, tb, bPrev);
      tStop = tc;
      stopWhich = -1;
    }
    std::vector<double> gNow(events.size());
    for (std::size_t k = 0; k < events.size(); ++k) {
      gNow[k] = finite ? events[k].g(xb) : gPrev[k];
      if (!finite || !detail::crossed(gPrev[k], gNow[k], events[k].direction))
        continue;
      const double tc = locate(events[k].g, ta, tb, gPrev[k]);
      EventRecord<Dim> rec;
      rec.t = dir * tc;
      rec.id = events[k].id;
      stepper.calc_state(tc, rec.x);
      found.push_back(rec);
      if (events[k].terminal && tc < tStop) {
        tStop = tc;
        stopWhich = static_cast<int>(k);
      } else if (events[k].terminal && stopWhich == -2) {
        tStop = tc;
        stopWhich = static_cast<int>(k);
      }
    }
    std::sort(found.begin(), found.end(),
              [dir](const EventRecord<Dim>& a, const EventRecord<Dim>& b) { return dir * (a.t - b.t) < 0; });
    for (const auto& rec : found)
      if (dir * rec.t <= tStop) out.events.push_back(rec);

    if (stopWhich != -2) {
      State xs;
      stepper.calc_state(tStop, xs);
      out.t.push_back(dir * tStop);
      out.x.push_back(xs);
      out.stop = stopWhich == -1 ? StopKind::BlowUp : StopKind::Event;
      out.detail = stopWhich == -1 ? "blow-up" : events[stopWhich].id;
      return out;
    }
    if (!finite) {
      out.stop = StopKind::Failure;
      out.detail = "non-finite state";
      return out;
    }
    out.t.push_back(dir * tb);
    out.x.push_back(xb);
    gPrev = gNow;
    bPrev = bNow;
    if (pastEnd) {
      out.stop = StopKind::Horizon;
      return out;
    }
    if (afterStep && afterStep(dir * tb, xb)) {
      out.stop = StopKind::Callback;
      return out;
    }
    if (std::fabs(stepper.current_time_step()) < 1e-14 * std::max(1.0, std::fabs(tb))) {
      out.stop = StopKind::Failure;
      out.detail = "step size underflow";
      return out;
    }
  }
  out.stop = StopKind::Failure;
  out.detail = "step budget exhausted";
  return out;
}

} // namespace efdyn
