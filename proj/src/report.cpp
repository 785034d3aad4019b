#include "efdyn/report.hpp"

#include <cstdio>
#include <set>

#include <json.hpp>

#include "efdyn/errors.hpp"

namespace efdyn {

using json = nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
  case Command::Analyze: return "analyze";
  case Command::Integrate: return "integrate";
  case Command::Shoot: return "shoot";
  case Command::Sweep: return "sweep";
  case Command::Scalar: return "scalar";
  case Command::Portrait: return "portrait";
  }
  return "?";
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

// Walks one JSON object, remembering which keys were consumed.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  void num(const std::string& key, double& out) {
    if (!take(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    out = v.get<double>();
  }

  void integer(const std::string& key, int& out) {
    if (!take(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
    out = v.get<int>();
  }

  void str(const std::string& key, std::string& out) {
    if (!take(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    out = v.get<std::string>();
  }

  template <std::size_t K>
  void array(const std::string& key, std::array<double, K>& out) {
    if (!take(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_array() || v.size() != K) throw ConfigError(field(key) + ": expected " + std::to_string(K) + " numbers");
    for (std::size_t i = 0; i < K; ++i) {
      if (!v[i].is_number()) throw ConfigError(field(key) + "[" + std::to_string(i) + "]: expected a number");
      out[i] = v[i].get<double>();
    }
  }

  Section sub(const std::string& key) {
    take(key);
    return Section(j_.at(key), field(key));
  }

  const json& raw(const std::string& key) {
    take(key);
    return j_.at(key);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()) + ": unknown key");
  }

private:
  bool take(const std::string& key) {
    if (!j_.contains(key)) return false;
    seen_.insert(key);
    return true;
  }
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

int sign_field(Section& s, const std::string& key, int def) {
  int v = def;
  s.integer(key, v);
  if (v != 1 && v != -1) throw ConfigError(s.field(key) + ": must be +1 or -1");
  return v;
}

} // namespace

RunConfig parse_config(const std::string& text, std::optional<Command> cliCommand) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig c;
  Section top(root, "");
  std::string cmd;
  if (!top.has("command") && !cliCommand) throw ConfigError("command: required");
  top.str("command", cmd);
  const std::map<std::string, Command> cmds = {{"analyze", Command::Analyze}, {"integrate", Command::Integrate},
                                               {"shoot", Command::Shoot},     {"sweep", Command::Sweep},
                                               {"scalar", Command::Scalar},   {"portrait", Command::Portrait}};
  if (!cmd.empty() && !cmds.count(cmd)) throw ConfigError("command: unknown command '" + cmd + "'");
  if (cliCommand) {
    c.command = *cliCommand;
    cmd = std::string(to_string(c.command));
  } else {
    c.command = cmds.at(cmd);
  }
  top.str("output", c.output);

  if (top.has("params")) {
    Section s = top.sub("params");
    c.hasParams = true;
    auto& P = c.params;
    s.num("N", P.N);
    s.num("p", P.p);
    s.num("q", P.q);
    s.num("a", P.a);
    s.num("b", P.b);
    s.num("s", P.s);
    s.num("m", P.m);
    s.num("delta", P.delta);
    s.num("mu", P.mu);
    P.eps1 = sign_field(s, "eps1", P.eps1);
    P.eps2 = sign_field(s, "eps2", P.eps2);
    s.finish();
  }
  if (top.has("scalar")) {
    Section s = top.sub("scalar");
    c.hasScalar = true;
    auto& S = c.scalar;
    s.num("N", S.N);
    s.num("p", S.p);
    s.num("a", S.a);
    s.num("Q", S.Q);
    S.eps = sign_field(s, "eps", S.eps);
    s.finish();
  }
  if (top.has("numerics")) {
    Section s = top.sub("numerics");
    s.num("identityTol", c.numerics.identityTol);
    s.num("degeneracyBand", c.numerics.degeneracyBand);
    s.num("centerTol", c.numerics.centerTol);
    s.num("boundaryTol", c.numerics.boundaryTol);
    s.num("rtol", c.ode.rtol);
    s.num("atol", c.ode.atol);
    s.num("maxStep", c.ode.maxStep);
    s.num("eventTol", c.ode.eventTol);
    s.num("blowUp", c.ode.blowUp);
    s.finish();
    if (!(c.ode.rtol > 0) || !(c.ode.atol > 0)) throw ConfigError("numerics: tolerances must be positive");
    if (!(c.ode.maxStep > 0)) throw ConfigError("numerics.maxStep: must be positive");
  }
  if (top.has("integrate")) {
    Section s = top.sub("integrate");
    auto& g = c.integrate;
    s.str("mode", g.mode);
    if (g.mode != "phase" && g.mode != "radial") throw ConfigError("integrate.mode: expected phase or radial");
    if (s.has("initial")) {
      Section i = s.sub("initial");
      g.hasInitial = true;
      i.num("t", g.initial.t);
      i.num("X", g.initial.X);
      i.num("Y", g.initial.Y);
      i.num("Z", g.initial.Z);
      i.num("W", g.initial.W);
      i.finish();
    }
    s.num("seedX", g.seedX);
    s.num("seedY", g.seedY);
    s.num("tEnd", g.tEnd);
    s.num("u0", g.u0);
    s.num("v0", g.v0);
    s.num("rMax", g.rMax);
    s.finish();
  }
  if (top.has("shoot")) {
    Section s = top.sub("shoot");
    s.num("theta", c.shoot.theta);
    s.num("rho", c.shoot.rho);
    s.num("horizon", c.shoot.horizon);
    s.finish();
    if (!(c.shoot.rho > 0)) throw ConfigError("shoot.rho: must be positive");
  }
  if (top.has("sweep")) {
    Section s = top.sub("sweep");
    auto& w = c.sweep;
    s.str("kind", w.kind);
    if (w.kind != "angle" && w.kind != "parameter") throw ConfigError("sweep.kind: expected angle or parameter");
    s.integer("grid", w.grid);
    s.num("rho", w.rho);
    s.str("param", w.param);
    s.num("from", w.from);
    s.num("to", w.to);
    s.num("step", w.step);
    if (s.has("tied")) {
      const json& t = s.raw("tied");
      if (!t.is_object()) throw ConfigError("sweep.tied: expected an object");
      for (auto it = t.begin(); it != t.end(); ++it) {
        if (!it.value().is_number()) throw ConfigError("sweep.tied." + it.key() + ": expected a number");
        w.tied[it.key()] = it.value().get<double>();
      }
    }
    s.finish();
    static const std::set<std::string> names = {"N", "p", "q", "a", "b", "s", "m", "delta", "mu"};
    if (!names.count(w.param)) throw ConfigError("sweep.param: unknown parameter '" + w.param + "'");
    for (const auto& [k, v] : w.tied)
      if (!names.count(k)) throw ConfigError("sweep.tied." + k + ": unknown parameter");
    if (w.grid < 2) throw ConfigError("sweep.grid: must be at least 2");
    if (!(w.step > 0)) throw ConfigError("sweep.step: must be positive");
  }
  if (top.has("portrait")) {
    Section s = top.sub("portrait");
    auto& pt = c.portrait;
    s.str("plane", pt.plane);
    s.array("range", pt.range);
    s.integer("n", pt.n);
    s.integer("trajectories", pt.trajectories);
    if (s.has("slice")) {
      pt.hasSlice = true;
      s.array("slice", pt.slice);
    }
    s.num("tEnd", pt.tEnd);
    s.finish();
    const std::string ok = "XYZW";
    if (pt.plane.size() != 2 || ok.find(pt.plane[0]) == std::string::npos ||
        ok.find(pt.plane[1]) == std::string::npos || pt.plane[0] == pt.plane[1])
      throw ConfigError("portrait.plane: expected two distinct letters from XYZW");
    if (pt.n < 2) throw ConfigError("portrait.n: must be at least 2");
  }
  top.finish();

  switch (c.command) {
  case Command::Scalar:
    if (!c.hasScalar) throw ConfigError("scalar: required for the scalar command");
    break;
  case Command::Portrait:
    if (!c.hasScalar && !c.hasParams) throw ConfigError("params: portrait needs params or scalar");
    break;
  default:
    if (!c.hasParams) throw ConfigError("params: required for the " + cmd + " command");
  }
  return c;
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["command"] = std::string(to_string(c.command));
  j["output"] = c.output;
  if (c.hasParams) {
    const auto& P = c.params;
    j["params"] = {{"N", P.N},         {"p", P.p},   {"q", P.q},       {"a", P.a},
                   {"b", P.b},         {"s", P.s},   {"m", P.m},       {"delta", P.delta},
                   {"mu", P.mu},       {"eps1", P.eps1}, {"eps2", P.eps2}};
  }
  if (c.hasScalar) {
    const auto& S = c.scalar;
    j["scalar"] = {{"N", S.N}, {"p", S.p}, {"a", S.a}, {"Q", S.Q}, {"eps", S.eps}};
  }
  j["numerics"] = {{"identityTol", c.numerics.identityTol}, {"degeneracyBand", c.numerics.degeneracyBand},
                   {"centerTol", c.numerics.centerTol},     {"boundaryTol", c.numerics.boundaryTol},
                   {"rtol", c.ode.rtol},                    {"atol", c.ode.atol},
                   {"maxStep", c.ode.maxStep},              {"eventTol", c.ode.eventTol},
                   {"blowUp", c.ode.blowUp}};
  const auto& g = c.integrate;
  j["integrate"] = {{"mode", g.mode}, {"seedX", g.seedX}, {"seedY", g.seedY}, {"tEnd", g.tEnd},
                    {"u0", g.u0},     {"v0", g.v0},       {"rMax", g.rMax}};
  if (g.hasInitial)
    j["integrate"]["initial"] = {{"t", g.initial.t}, {"X", g.initial.X}, {"Y", g.initial.Y},
                                 {"Z", g.initial.Z}, {"W", g.initial.W}};
  j["shoot"] = {{"theta", c.shoot.theta}, {"rho", c.shoot.rho}, {"horizon", c.shoot.horizon}};
  const auto& w = c.sweep;
  j["sweep"] = {{"kind", w.kind}, {"grid", w.grid}, {"rho", w.rho},   {"param", w.param},
                {"from", w.from}, {"to", w.to},     {"step", w.step}, {"tied", json::object()}};
  for (const auto& [k, v] : w.tied) j["sweep"]["tied"][k] = v;
  const auto& pt = c.portrait;
  j["portrait"] = {{"plane", pt.plane}, {"range", pt.range}, {"n", pt.n},
                   {"trajectories", pt.trajectories}, {"tEnd", pt.tEnd}};
  if (pt.hasSlice) j["portrait"]["slice"] = pt.slice;
  return j.dump(2) + "\n";
}

} // namespace efdyn
