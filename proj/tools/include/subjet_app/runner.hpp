#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "subjet_app/scenario.hpp"

namespace subjet::app {

/// A library error raised while running a scenario, prefixed with the
/// scenario field it concerns and the tau or sample index where it happened.
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Report {
  std::string kind;
  bool pass = false;
  double max_defect = 0.0;
  std::size_t samples = 0;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct RunOptions {
  std::string out_path;                // overrides output.csv
  std::optional<std::uint64_t> seed;   // overrides "seed"
  std::optional<double> tolerance;     // overrides "tolerance"
  bool no_timing = false;              // report runtime_ms as 0
};

/// Executes the scenario, writing any CSV output. Throws ConfigError for
/// missing outputs and RunError for computation failures.
Report run(const Scenario& scenario, const RunOptions& options);

/// Report as JSON text with a fixed key order and 17 significant digits.
std::string format_report(const Report& report);

/// %.17g, with non-finite values spelled as JSON cannot hold them.
std::string format_number(double x);

}  // namespace subjet::app
