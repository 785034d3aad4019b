#include "efdyn/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "efdyn/dynamics.hpp"
#include "efdyn/energies.hpp"
#include "efdyn/equilibria.hpp"
#include "efdyn/errors.hpp"
#include "efdyn/scalar.hpp"
#include "efdyn/spectra.hpp"

namespace efdyn {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Csv {
public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

private:
  std::ofstream out_;
};

std::string s(std::string_view v) { return std::string(v); }

json jparams(const SystemParams& P) {
  return {{"N", P.N}, {"p", P.p}, {"q", P.q}, {"a", P.a}, {"b", P.b}, {"s", P.s}, {"m", P.m},
          {"delta", P.delta}, {"mu", P.mu}, {"eps1", P.eps1}, {"eps2", P.eps2}};
}

json jvec(const Vec4& v) { return json::array({v[0], v[1], v[2], v[3]}); }

json jchecks(const std::vector<Check>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return a;
}

json jprofile(const AsymptoticProfile& pr) {
  return {{"uExponent", pr.uExponent},
          {"vExponent", pr.vExponent},
          {"logCorrectionPower", pr.logCorrectionPower},
          {"logTarget", pr.logTarget == LogTarget::None ? "none" : (pr.logTarget == LogTarget::U ? "u" : "v")},
          {"limits", pr.limits}};
}

json jshot(const ShotOutcome& o) {
  json j = {{"x", o.x},
            {"y", o.y},
            {"sClass", s(to_string(o.sClass))},
            {"mClass", s(to_string(o.mClass))},
            {"termination", s(to_string(o.termination))},
            {"blowUpRatio", o.blowUpRatio},
            {"horizon", o.horizonUsed}};
  j["tX"] = o.tX ? json(*o.tX) : json(nullptr);
  j["tY"] = o.tY ? json(*o.tY) : json(nullptr);
  if (o.convergedTo) j["convergedTo"] = s(to_string(*o.convergedTo));
  return j;
}

json jwitness(const Witness& w) {
  return {{"theta", w.theta}, {"x", w.x}, {"y", w.y}, {"direct", w.direct}, {"shot", jshot(w.shot)}};
}

// Runs one report section; model errors become structured entries.
struct Guard {
  RunOutcome& outcome;
  template <class F>
  void operator()(json& dst, const std::string& key, F&& f) {
    try {
      dst[key] = f();
    } catch (const Error& e) {
      dst[key] = {{"error", {{"kind", e.kind()}, {"message", e.what()}}}};
    } catch (const std::exception& e) {
      outcome.numericFailure = true;
      dst[key] = {{"error", {{"kind", "Internal"}, {"message", e.what()}}}};
    }
  }
};

DynamicsOptions dyn_options(const RunConfig& c) {
  DynamicsOptions d;
  d.ode = c.ode;
  return d;
}

void write_phase_csv(const fs::path& path, const std::vector<PhaseState>& samples) {
  Csv csv(path, {"t", "X", "Y", "Z", "W"});
  for (const auto& p : samples) csv.row({fmt17(p.t), fmt17(p.X), fmt17(p.Y), fmt17(p.Z), fmt17(p.W)});
}

void analyze(const RunConfig& c, const fs::path& dir, json& r, RunOutcome& out, std::vector<std::string>& lines) {
  const auto& P = c.params;
  Guard guard{out};
  r["params"] = jparams(P);
  guard(r, "validation", [&] {
    json j;
    for (auto [name, reg] : {std::pair{"standing", Regime::Standing}, std::pair{"source", Regime::Source}}) {
      const auto v = validate_params(P, reg);
      j[name] = {{"ok", v.ok}, {"checks", jchecks(v.checks)}};
    }
    return j;
  });
  guard(r, "derived", [&] {
    const auto e = derive_exponents(P);
    return json{{"D", e.D}, {"gamma", e.gamma}, {"xi", e.xi}, {"pConj", e.pConj}, {"qConj", e.qConj},
                {"Ap", xbound(P)}, {"Aq", ybound(P)}};
  });

  std::vector<FixedPoint> catalog;
  guard(r, "catalog", [&] {
    catalog = fixed_point_catalog(P);
    json a = json::array();
    Csv csv(dir / "catalog.csv", {"label", "defined", "admissible", "X", "Y", "Z", "W"});
    out.files.push_back("catalog.csv");
    for (const auto& fp : catalog) {
      json e = {{"label", s(to_string(fp.label))}, {"defined", fp.defined}, {"admissible", fp.admissible},
                {"nearDegenerate", fp.nearDegenerate}, {"notes", fp.notes}};
      if (fp.defined) {
        e["coords"] = jvec(fp.coords);
        const Vec4 f = vector_field(P, fp.coords);
        double res = 0;
        for (double v : f) res = std::max(res, std::fabs(v));
        e["residual"] = res;
        csv.row({s(to_string(fp.label)), "1", fp.admissible ? "1" : "0", fmt17(fp.coords[0]), fmt17(fp.coords[1]),
                 fmt17(fp.coords[2]), fmt17(fp.coords[3])});
      } else {
        csv.row({s(to_string(fp.label)), "0", "0", "", "", "", ""});
      }
      a.push_back(e);
    }
    return a;
  });

  json spectra = json::array();
  json verdicts = json::array();
  {
    Csv csv(dir / "spectra.csv", {"label", "k", "re", "im"});
    out.files.push_back("spectra.csv");
    for (const auto& fp : catalog) {
      if (!fp.defined) continue;
      json entry = {{"label", s(to_string(fp.label))}};
      guard(entry, "spectrum", [&] {
        const auto sp = spectrum_at(P, fp);
        json ev = json::array();
        for (int k = 0; k < 4; ++k) {
          ev.push_back({sp.eigenvalues[k].real(), sp.eigenvalues[k].imag()});
          csv.row({s(to_string(fp.label)), std::to_string(k), fmt17(sp.eigenvalues[k].real()),
                   fmt17(sp.eigenvalues[k].imag())});
        }
        return json{{"eigenvalues", ev}, {"stableDim", sp.stableDim}, {"unstableDim", sp.unstableDim},
                    {"centerDim", sp.centerDim}, {"crossCheckError", sp.crossCheckError}};
      });
      spectra.push_back(entry);
      json ve = {{"label", s(to_string(fp.label))}};
      guard(ve, "verdicts", [&] {
        json a = json::array();
        for (const auto& v : local_verdicts(P, fp))
          a.push_back({{"direction", s(to_string(v.direction))}, {"exists", s(to_string(v.exists))},
                       {"profile", jprofile(v.profile)}, {"reason", v.reason}});
        return a;
      });
      verdicts.push_back(ve);
    }
  }
  r["spectra"] = spectra;
  r["localVerdicts"] = verdicts;

  guard(r, "oscillation", [&] {
    const auto o = oscillation_condition(P);
    return json{{"E", o.coeffs.E}, {"F", o.coeffs.F}, {"G", o.coeffs.G}, {"H", o.coeffs.H},
                {"imaginaryPair", o.imaginaryPair}, {"numericImaginary", o.numericImaginary},
                {"branch", s(to_string(o.branch))}, {"hsApplicable", o.hsApplicable}, {"onHs", o.onHs}};
  });
  json summary = json::array();
  guard(r, "region", [&] {
    json j;
    for (const auto& [k, st] : classify_region(P)) {
      j[s(to_string(k))] = {{"side", s(to_string(st.side))}, {"lhs", st.lhs}, {"rhs", st.rhs}, {"note", st.note}};
      if (st.side == Side::NotApplicable) continue;
      std::string side = s(to_string(st.side));
      std::transform(side.begin(), side.end(), side.begin(), [](unsigned char ch) { return std::tolower(ch); });
      summary.push_back(side + " " + s(to_string(k)));
    }
    return j;
  });
  r["regionSummary"] = summary;
  guard(r, "existence", [&] {
    const auto v = predict_existence(P);
    lines.push_back("existence: " + s(to_string(v.verdict)) + " (" + v.source + ")");
    return json{{"verdict", s(to_string(v.verdict))}, {"source", v.source}, {"conditions", jchecks(v.conditions)}};
  });
  guard(r, "asymptotics", [&] { return jprofile(predict_asymptotics(P)); });

  for (const auto& e : spectra)
    if (e["label"] == "M0" && e["spectrum"].contains("eigenvalues")) {
      std::ostringstream os;
      os << "M0 spectrum:";
      for (const auto& z : e["spectrum"]["eigenvalues"]) os << " (" << fmt17(z[0]) << ", " << fmt17(z[1]) << ")";
      lines.push_back(os.str());
    }
  std::string reg = "region:";
  for (const auto& x : summary) reg += " [" + x.get<std::string>() + "]";
  lines.push_back(reg);
}

void integrate(const RunConfig& c, const fs::path& dir, json& r, RunOutcome& out, std::vector<std::string>& lines) {
  const auto& P = c.params;
  const auto& g = c.integrate;
  Guard guard{out};
  r["params"] = jparams(P);
  r["mode"] = g.mode;
  if (g.mode == "radial") {
    guard(r, "radial", [&] {
      const auto tr = integrate_radial(P, g.u0, g.v0, g.rMax);
      Csv csv(dir / "radial.csv", {"r", "u", "v", "du", "dv"});
      out.files.push_back("radial.csv");
      for (const auto& x : tr.samples) csv.row({fmt17(x.r), fmt17(x.u), fmt17(x.v), fmt17(x.du), fmt17(x.dv)});
      lines.push_back("radial stop: " + s(to_string(tr.stop)));
      json j = {{"stop", s(to_string(tr.stop))}, {"samples", tr.samples.size()}, {"u0", g.u0}, {"v0", g.v0}};
      if (tr.stop == RadialStop::ZeroU || tr.stop == RadialStop::ZeroV || tr.stop == RadialStop::ZeroBoth)
        j["rZero"] = tr.rZero;
      if (!tr.failure.empty()) j["failure"] = tr.failure;
      return j;
    });
    return;
  }
  guard(r, "trajectory", [&] {
    const PhaseState init = g.hasInitial ? g.initial : launch_regular(P, g.seedX, g.seedY, std::hypot(g.seedX, g.seedY));
    const auto tr = integrate_m(P, init, g.tEnd, {}, dyn_options(c));
    write_phase_csv(dir / "trajectory.csv", tr.samples);
    out.files.push_back("trajectory.csv");
    lines.push_back("termination: " + s(to_string(tr.termination)));
    json j = {{"termination", s(to_string(tr.termination))}, {"samples", tr.samples.size()},
              {"initial", {{"t", init.t}, {"X", init.X}, {"Y", init.Y}, {"Z", init.Z}, {"W", init.W}}}};
    if (tr.convergedTo) j["convergedTo"] = s(to_string(*tr.convergedTo));
    if (tr.termination == Termination::StepFailure)
      j["error"] = {{"kind", "StepSizeUnderflow"}, {"message", tr.failure}};
    return j;
  });
}

ShotOptions shot_options(const RunConfig& c, double horizon) {
  ShotOptions o;
  o.dyn = dyn_options(c);
  o.horizon = horizon;
  return o;
}

void shoot(const RunConfig& c, const fs::path& dir, json& r, RunOutcome& out, std::vector<std::string>& lines) {
  Guard guard{out};
  r["params"] = jparams(c.params);
  guard(r, "shot", [&] {
    const double x = c.shoot.rho * std::cos(c.shoot.theta), y = c.shoot.rho * std::sin(c.shoot.theta);
    Trajectory path;
    const auto o = classify_shot(c.params, x, y, shot_options(c, c.shoot.horizon), &path);
    write_phase_csv(dir / "shot.csv", path.samples);
    out.files.push_back("shot.csv");
    lines.push_back("shot: " + s(to_string(o.sClass)) + " / " + s(to_string(o.mClass)));
    json j = jshot(o);
    j["theta"] = c.shoot.theta;
    j["rho"] = c.shoot.rho;
    return j;
  });
}

json search_json(const GroundStateSearch& g) {
  json j = {{"found", g.found}, {"groundStates", json::array()}, {"dirichletSeeds", json::array()},
            {"boundaryAngles", g.boundaryAngles}};
  for (const auto& w : g.groundStates) j["groundStates"].push_back(jwitness(w));
  for (const auto& w : g.dirichletSeeds) j["dirichletSeeds"].push_back(jwitness(w));
  return j;
}

double& param_ref(SystemParams& P, const std::string& name) {
  if (name == "N") return P.N;
  if (name == "p") return P.p;
  if (name == "q") return P.q;
  if (name == "a") return P.a;
  if (name == "b") return P.b;
  if (name == "s") return P.s;
  if (name == "m") return P.m;
  if (name == "delta") return P.delta;
  if (name == "mu") return P.mu;
  throw ConfigError("sweep.param: unknown parameter '" + name + "'");
}

int thread_cap() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("EFDYN_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) n = v;
  }
  return n;
}

void sweep(const RunConfig& c, const fs::path& dir, json& r, RunOutcome& out, std::vector<std::string>& lines) {
  const auto& w = c.sweep;
  Guard guard{out};
  r["params"] = jparams(c.params);
  SearchOptions so;
  so.grid = w.grid;
  so.rho = w.rho;
  so.shot = shot_options(c, c.shoot.horizon);

  if (w.kind == "angle") {
    guard(r, "search", [&] {
      const auto g = search_ground_state(c.params, so);
      Csv csv(dir / "sweep.csv", {"theta", "sClass", "mClass", "hitTime"});
      out.files.push_back("sweep.csv");
      for (std::size_t i = 0; i < g.grid.size(); ++i) {
        const auto& o = g.grid[i];
        std::string hit;
        if (o.tX || o.tY) hit = fmt17(std::min(o.tX.value_or(INFINITY), o.tY.value_or(INFINITY)));
        csv.row({fmt17(g.gridAngles[i]), s(to_string(o.sClass)), s(to_string(o.mClass)), hit});
      }
      lines.push_back(std::string("ground state found: ") + (g.found ? "yes" : "no"));
      return search_json(g);
    });
    return;
  }

  const int count = static_cast<int>(std::floor((w.to - w.from) / w.step + 1e-9)) + 1;
  struct Row {
    SystemParams P;
    bool done = false;
    bool found = false;
    std::size_t dirichlet = 0;
    std::string predicted;
    std::string error;
  };
  std::vector<Row> rows(std::max(count, 0));
  for (int k = 0; k < count; ++k) {
    Row& row = rows[k];
    row.P = c.params;
    const double v = w.from + k * w.step;
    param_ref(row.P, w.param) = v;
    for (const auto& [name, off] : w.tied) param_ref(row.P, name) = v + off;
  }
  std::atomic<int> next{0};
  std::atomic<bool> internal{false};
  auto worker = [&] {
    for (int k = next++; k < count; k = next++) {
      Row& row = rows[k];
      try {
        const auto g = search_ground_state(row.P, so);
        row.found = g.found;
        row.dirichlet = g.dirichletSeeds.size();
      } catch (const Error& e) {
        row.error = e.kind() + ": " + e.what();
      } catch (const std::exception& e) {
        row.error = std::string("Internal: ") + e.what();
        internal = true;
      }
      try {
        row.predicted = s(to_string(predict_existence(row.P).verdict));
      } catch (const Error& e) {
        row.predicted = e.kind();
      }
    }
  };
  const int nt = std::min(thread_cap(), std::max(count, 1));
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (internal) out.numericFailure = true;

  std::vector<std::string> header = {w.param};
  for (const auto& [name, off] : w.tied) header.push_back(name);
  for (const char* h : {"found", "dirichlet", "predicted", "error"}) header.push_back(h);
  Csv csv(dir / "sweep.csv", header);
  out.files.push_back("sweep.csv");
  json a = json::array();
  for (int k = 0; k < count; ++k) {
    const Row& row = rows[k];
    SystemParams P = row.P;
    const double v = param_ref(P, w.param);
    std::vector<std::string> cells = {fmt17(v)};
    for (const auto& [name, off] : w.tied) cells.push_back(fmt17(param_ref(P, name)));
    cells.push_back(row.found ? "1" : "0");
    cells.push_back(std::to_string(row.dirichlet));
    cells.push_back(row.predicted);
    cells.push_back(row.error);
    csv.row(cells);
    json e = {{"value", v}, {"found", row.found}, {"dirichletSeeds", row.dirichlet}, {"predicted", row.predicted}};
    if (!row.error.empty()) e["error"] = row.error;
    a.push_back(e);
  }
  r["sweep"] = a;
  // first grid value where the found flag changes
  for (int k = 1; k < count; ++k)
    if (rows[k].found != rows[k - 1].found) {
      r["flipAt"] = w.from + k * w.step;
      lines.push_back("found flag flips at " + w.param + " = " + fmt17(w.from + k * w.step));
      break;
    }
}

void scalar(const RunConfig& c, const fs::path& dir, json& r, RunOutcome& out, std::vector<std::string>& lines) {
  const auto& S = c.scalar;
  Guard guard{out};
  r["scalar"] = {{"N", S.N}, {"p", S.p}, {"a", S.a}, {"Q", S.Q}, {"eps", S.eps}};
  guard(r, "report", [&] {
    ScalarOptions so;
    so.ode = c.ode;
    const auto rep = scalar_classify(S, so);
    {
      Csv csv(dir / "regular.csv", {"t", "X", "Z"});
      for (const auto& p : rep.regularPath) csv.row({fmt17(p.t), fmt17(p.X), fmt17(p.Z)});
      out.files.push_back("regular.csv");
    }
    json j = {{"Q1", rep.thresholds.Q1},
              {"Q2", rep.thresholds.Q2},
              {"gamma", rep.gamma},
              {"regime", s(to_string(rep.regime))},
              {"boundaryCase", rep.boundaryCase},
              {"regular", s(to_string(rep.regular))},
              {"lineDrift", rep.lineDrift},
              {"limitRatio", rep.limitRatio},
              {"returnSampled", rep.returnSampled},
              {"returnSamples", rep.returnSamples},
              {"periodicOrbitFound", rep.periodicOrbitFound},
              {"note", rep.note}};
    json pts = json::array();
    for (const auto& p : scalar_fixed_points(S)) pts.push_back({{"label", p.label}, {"X", p.X}, {"Z", p.Z}});
    j["fixedPoints"] = pts;
    if (S.eps == -1) {
      const auto& cn = rep.connection;
      j["connection"] = {{"found", cn.found},
                         {"exponentAtZero", cn.exponentAtZero},
                         {"expectedAtZero", cn.expectedAtZero},
                         {"exponentAtInfinity", cn.exponentAtInfinity},
                         {"expectedAtInfinity", cn.expectedAtInfinity}};
      if (cn.found) {
        Csv csv(dir / "connection.csv", {"t", "X", "Z"});
        for (const auto& p : cn.path) csv.row({fmt17(p.t), fmt17(p.X), fmt17(p.Z)});
        out.files.push_back("connection.csv");
      }
    }
    lines.push_back("scalar regime " + s(to_string(rep.regime)) + ", regular: " + s(to_string(rep.regular)));
    return j;
  });
}

int axis_index(char ch) { return std::string("XYZW").find(ch); }

void portrait(const RunConfig& c, const fs::path& dir, json& r, RunOutcome& out, std::vector<std::string>& lines) {
  const auto& pt = c.portrait;
  Guard guard{out};
  guard(r, "portrait", [&] {
    json j;
    const int n = pt.n;
    std::array<double, 4> range = pt.range;
    const bool autoRange = range == std::array<double, 4>{0, 0, 0, 0};
    std::function<std::array<double, 2>(double, double)> field;
    std::vector<std::vector<std::array<double, 3>>> paths; // (t, x, y)
    json fixed = json::array();

    if (c.hasScalar) {
      const auto& S = c.scalar;
      j["plane"] = "XZ";
      j["scalar"] = {{"N", S.N}, {"p", S.p}, {"a", S.a}, {"Q", S.Q}, {"eps", S.eps}};
      const double Ap = (S.N - S.p) / (S.p - 1);
      if (autoRange) range = {0.0, 2.0 * Ap, 0.0, 1.5 * (S.N + S.a)};
      field = [S](double x, double z) { return scalar_field(S, x, z); };
      for (const auto& p : scalar_fixed_points(S)) fixed.push_back({{"label", p.label}, {"x", p.X}, {"y", p.Z}});
      const double l1 = (S.p + S.a) / (S.p - 1), na = S.N + S.a;
      for (int k = 0; k < pt.trajectories; ++k) {
        // regular seed, then interior starts spread along the X axis
        const double x0 = k == 0 ? S.eps * 1e-4 : range[0] + (range[1] - range[0]) * k / (pt.trajectories + 1.0);
        const double z0 = k == 0 ? na - na * S.Q * x0 / (l1 + na) : 0.5 * (range[2] + range[3]);
        auto rhs = [&S](const StateN<2>& x, StateN<2>& dx, double) {
          const auto f = scalar_field(S, x[0], x[1]);
          dx[0] = f[0];
          dx[1] = f[1];
        };
        IntegratorOptions io = c.ode;
        io.blowUp = 1e3;
        const auto run = run_ode<2>(rhs, 0.0, StateN<2>{x0, z0}, pt.tEnd, io, {});
        std::vector<std::array<double, 3>> p;
        for (std::size_t i = 0; i < run.t.size(); ++i) p.push_back({run.t[i], run.x[i][0], run.x[i][1]});
        paths.push_back(std::move(p));
      }
    } else {
      const auto& P = c.params;
      const int ix = axis_index(pt.plane[0]), iy = axis_index(pt.plane[1]);
      std::vector<int> off;
      for (int i = 0; i < 4; ++i)
        if (i != ix && i != iy) off.push_back(i);
      Vec4 base{0, 0, P.N + P.a, P.N + P.b};
      const auto m0 = fixed_point(P, Label::M0);
      bool m0ok = m0.defined;
      for (double v : m0.coords) m0ok = m0ok && std::isfinite(v);
      if (m0ok) base = m0.coords;
      if (pt.hasSlice) {
        base[off[0]] = pt.slice[0];
        base[off[1]] = pt.slice[1];
      }
      j["plane"] = pt.plane;
      j["slice"] = {{std::string(1, "XYZW"[off[0]]), base[off[0]]}, {std::string(1, "XYZW"[off[1]]), base[off[1]]}};
      j["params"] = jparams(P);
      const Vec4 hi{2 * xbound(P), 2 * ybound(P), 1.5 * (P.N + P.a), 1.5 * (P.N + P.b)};
      if (autoRange) range = {0.0, hi[ix], 0.0, hi[iy]};
      field = [P, base, ix, iy](double x, double y) {
        Vec4 v = base;
        v[ix] = x;
        v[iy] = y;
        const Vec4 f = vector_field(P, v);
        return std::array<double, 2>{f[ix], f[iy]};
      };
      for (const auto& fp : fixed_point_catalog(P)) {
        if (!fp.defined) continue;
        fixed.push_back({{"label", s(to_string(fp.label))}, {"x", fp.coords[ix]}, {"y", fp.coords[iy]}});
      }
      for (int k = 0; k < pt.trajectories; ++k) {
        const double th = (k + 0.5) * 0.5 * std::numbers::pi / pt.trajectories;
        const auto seed = launch_regular(P, 1e-4 * std::cos(th), 1e-4 * std::sin(th), 1e-4);
        DynamicsOptions d = dyn_options(c);
        d.ode.blowUp = 1e3;
        const auto tr = integrate_m(P, seed, pt.tEnd, {}, d);
        std::vector<std::array<double, 3>> p;
        for (const auto& sm : tr.samples) {
          const Vec4 v = sm.coords();
          p.push_back({sm.t, v[ix], v[iy]});
        }
        paths.push_back(std::move(p));
      }
    }

    Csv arrows(dir / "arrows.csv", {"x", "y", "dx", "dy"});
    out.files.push_back("arrows.csv");
    json zeros = json::array();
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const double x = range[0] + (range[1] - range[0]) * i / (n - 1);
        const double y = range[2] + (range[3] - range[2]) * k / (n - 1);
        const auto f = field(x, y);
        arrows.row({fmt17(x), fmt17(y), fmt17(f[0]), fmt17(f[1])});
        if (std::fabs(f[0]) < 1e-12 && std::fabs(f[1]) < 1e-12) zeros.push_back({x, y});
      }
    Csv tcsv(dir / "trajectories.csv", {"id", "t", "x", "y"});
    out.files.push_back("trajectories.csv");
    for (std::size_t id = 0; id < paths.size(); ++id)
      for (const auto& p : paths[id]) tcsv.row({std::to_string(id), fmt17(p[0]), fmt17(p[1]), fmt17(p[2])});
    j["range"] = range;
    j["n"] = n;
    j["fixedPoints"] = fixed;
    j["zeros"] = zeros;
    lines.push_back("portrait: " + std::to_string(zeros.size()) + " grid nodes with a vanishing field");
    return j;
  });
}

} // namespace

RunOutcome run(const RunConfig& config, const std::string& outDir) {
  set_numerics(config.numerics);
  const fs::path dir(outDir);
  fs::create_directories(dir);
  RunOutcome out;
  json r;
  r["command"] = s(to_string(config.command));
  std::vector<std::string> lines;
  lines.push_back("command: " + s(to_string(config.command)));
  switch (config.command) {
  case Command::Analyze: analyze(config, dir, r, out, lines); break;
  case Command::Integrate: integrate(config, dir, r, out, lines); break;
  case Command::Shoot: shoot(config, dir, r, out, lines); break;
  case Command::Sweep: sweep(config, dir, r, out, lines); break;
  case Command::Scalar: scalar(config, dir, r, out, lines); break;
  case Command::Portrait: portrait(config, dir, r, out, lines); break;
  }
  {
    std::ofstream cfg(dir / "config.json");
    cfg << serialize_config(config);
  }
  out.files.push_back("config.json");
  {
    std::ofstream sum(dir / "summary.txt");
    for (const auto& l : lines) sum << l << '\n';
  }
  out.files.push_back("summary.txt");
  r["files"] = out.files;
  std::ofstream rep(dir / "report.json");
  rep << r.dump(2) << '\n';
  out.files.push_back("report.json");
  return out;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"efdyn: quasilinear elliptic systems through their 4D autonomous reduction"};
  app.require_subcommand(1);
  std::string configPath, outDir;
  double tol = 0.0, horizon = 0.0;
  const std::vector<std::pair<std::string, Command>> subs = {
      {"analyze", Command::Analyze}, {"integrate", Command::Integrate}, {"shoot", Command::Shoot},
      {"sweep", Command::Sweep},     {"scalar", Command::Scalar},       {"portrait", Command::Portrait}};
  std::vector<CLI::App*> handles;
  for (const auto& [name, cmd] : subs) {
    auto* sc = app.add_subcommand(name, "run the " + name + " command");
    sc->add_option("--config", configPath, "JSON run config")->required();
    sc->add_option("--out", outDir, "output directory (overrides the config)");
    sc->add_option("--tol", tol, "relative integration tolerance override");
    sc->add_option("--horizon", horizon, "integration horizon override");
    handles.push_back(sc);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  Command cmd = Command::Analyze;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (handles[i]->parsed()) cmd = subs[i].second;

  RunConfig cfg;
  try {
    std::ifstream in(configPath);
    if (!in) throw ConfigError("config: cannot read " + configPath);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = parse_config(ss.str(), cmd);
    if (tol > 0) cfg.ode.rtol = tol;
    if (horizon > 0) {
      cfg.shoot.horizon = horizon;
      cfg.integrate.tEnd = horizon;
      cfg.portrait.tEnd = horizon;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    const auto res = run(cfg, outDir.empty() ? cfg.output : outDir);
    return res.numericFailure ? 3 : 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal failure: " << e.what() << '\n';
    return 3;
  }
}

} // namespace efdyn
