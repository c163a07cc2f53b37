#pragma once

// Scenario files: one JSON document per run, validated up front into typed
// settings so schema errors never surface halfway through a computation.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "subjet/dynamics.hpp"
#include "subjet/jet_charts.hpp"
#include "subjet/lagrangian.hpp"
#include "subjet/nambu_goto.hpp"
#include "subjet/three_velocity.hpp"

namespace subjet::app {

/// Schema violation; `path` names the offending field, e.g. "integrator.step".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class Kind { Simulate, CheckNoether, CheckGauge, Transform, Reduce, StringCheck };

std::string kind_name(Kind kind);

struct InitialState {
  double tau = 0.0;
  Vec q;
  Vec v;
  int sign = +1;
};

struct NoetherSettings {
  std::size_t fields = 5;
  double perturbation = 0.2;
  double one_form_scale = 0.5;
  unsigned max_degree = 2;
};

struct GaugeSettings {
  enum class Path { Linear, Integrated } path = Path::Linear;
  Vec q0;
  Vec velocity;
  double begin = 0.0;
  double end = 1.0;
  enum class Reparam { Identity, Power, Exp } reparam = Reparam::Identity;
  double parameter = 1.0;  // exponent (power) or rate (exp)
  std::size_t panels = 1000;
};

struct TransformSettings {
  SubmanifoldJet jet;
  ChartTransition transition;
};

struct StringSettings {
  Mat eta;
  int signature_factor = +1;
  double min_det = 0.1;
  bool action = false;
  std::string sheet = "flat";
  std::string diffeo = "identity";
  std::size_t panels = 256;
  double action_tolerance = 1e-6;
};

struct Scenario {
  Kind kind = Kind::Simulate;
  std::size_t dimension = 0;
  std::size_t N = 1;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::optional<double> tolerance;

  std::optional<RelativisticLagrangian> lagrangian;
  std::optional<InitialState> initial;
  std::optional<ReducedState> reduced;
  std::optional<IntegratorConfig> integrator;

  NoetherSettings noether;
  std::optional<GaugeSettings> gauge;
  std::optional<TransformSettings> transform;
  std::optional<StringSettings> string;

  std::string csv_path;
  std::string report_path;
};

/// Parses and validates a scenario for the given subcommand. A "kind" field,
/// when present, must agree with it.
Scenario parse_scenario(const std::string& json_text, Kind kind);

/// Reads the file and parses it; unreadable files raise ConfigError("config").
Scenario load_scenario(const std::string& path, Kind kind);

}  // namespace subjet::app
