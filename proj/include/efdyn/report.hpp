#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "efdyn/integrator.hpp"
#include "efdyn/model.hpp"
#include "efdyn/numerics.hpp"

namespace efdyn {

enum class Command { Analyze, Integrate, Shoot, Sweep, Scalar, Portrait };
std::string_view to_string(Command c);

struct IntegrateConfig {
  std::string mode = "phase"; // phase | radial
  bool hasInitial = false;    // otherwise a regular seed (seedX, seedY) is launched
  PhaseState initial;
  double seedX = 7.0710678118654757e-05;
  double seedY = 7.0710678118654757e-05;
  double tEnd = 40.0;
  double u0 = 1.0;
  double v0 = 1.0;
  double rMax = 1e4;
};

struct ShootConfig {
  double theta = 0.78539816339744828;
  double rho = 1e-4;
  double horizon = 40.0;
};

struct SweepConfig {
  std::string kind = "angle"; // angle | parameter
  int grid = 16;
  double rho = 1e-4;
  std::string param = "delta";
  double from = 1.2;
  double to = 3.0;
  double step = 0.1;
  std::map<std::string, double> tied; // name -> offset, set to value + offset
};

struct PortraitConfig {
  std::string plane = "XY"; // two of X, Y, Z, W; ignored for scalar runs (X, Z)
  std::array<double, 4> range{0, 0, 0, 0}; // xmin, xmax, ymin, ymax; zeros mean automatic
  int n = 21;
  int trajectories = 8;
  bool hasSlice = false;
  std::array<double, 2> slice{0, 0}; // values of the two coordinates off the plane
  double tEnd = 20.0;
};

struct RunConfig {
  Command command = Command::Analyze;
  bool hasParams = false;
  SystemParams params;
  bool hasScalar = false;
  ScalarParams scalar;
  Numerics numerics;
  IntegratorOptions ode;
  IntegrateConfig integrate;
  ShootConfig shoot;
  SweepConfig sweep;
  PortraitConfig portrait;
  std::string output = "efdyn_out";
};

// Throws ConfigError naming the offending field path. A command given on the command
// line replaces the one in the file, which then becomes optional.
RunConfig parse_config(const std::string& text, std::optional<Command> cliCommand = std::nullopt);
std::string serialize_config(const RunConfig& c);

// %.17g, lossless for doubles; used for every CSV cell.
std::string fmt17(double x);

} // namespace efdyn
