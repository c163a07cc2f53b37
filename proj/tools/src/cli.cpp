#include "subjet_app/cli.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "subjet_app/runner.hpp"
#include "subjet_app/scenario.hpp"

namespace subjet::app {

namespace {

struct Leaf {
  CLI::App* app = nullptr;
  Kind kind = Kind::Simulate;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relativistic Lagrangian jet toolkit", "subjet"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool quiet = false;
  bool no_timing = false;
  app.add_option("--seed", seed, "override the scenario seed");
  app.add_option("--tol", tol, "override the pass tolerance");
  app.add_flag("--quiet", quiet, "do not print the report");
  app.add_flag("--no-timing", no_timing, "report runtime_ms as 0 (byte-stable reports)");

  std::string config, out_path, report_path;
  std::vector<Leaf> leaves;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, Kind kind) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("--config", config, "scenario JSON file")->required();
    sub->add_option("--report", report_path, "also write the report JSON here");
    if (kind == Kind::Simulate || kind == Kind::Reduce) sub->add_option("--out", out_path, "CSV output file");
    leaves.push_back({sub, kind});
  };

  leaf(&app, "simulate", "integrate a trajectory and write it as CSV", Kind::Simulate);
  CLI::App* check = app.add_subcommand("check", "identity checks");
  check->fallthrough();
  check->require_subcommand(1);
  leaf(check, "noether", "Noether identity on random states", Kind::CheckNoether);
  leaf(check, "gauge", "action invariance under reparametrization", Kind::CheckGauge);
  leaf(&app, "transform", "transform a jet between charts", Kind::Transform);
  leaf(&app, "reduce", "integrate in the three-velocity picture", Kind::Reduce);
  CLI::App* string = app.add_subcommand("string", "worldsheet checks");
  string->fallthrough();
  string->require_subcommand(1);
  leaf(string, "check", "Noether identities and action invariance for sheets", Kind::StringCheck);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  }

  Kind kind = Kind::Simulate;
  for (const auto& l : leaves) {
    if (l.app->parsed()) kind = l.kind;
  }

  try {
    Scenario scenario = load_scenario(config, kind);
    RunOptions options;
    options.out_path = out_path;
    options.seed = seed;
    options.tolerance = tol;
    options.no_timing = no_timing;
    const Report report = run(scenario, options);
    const std::string text = format_report(report);

    const std::string report_file = report_path.empty() ? scenario.report_path : report_path;
    if (!report_file.empty()) {
      std::ofstream f(report_file, std::ios::binary | std::ios::trunc);
      if (!(f << text << '\n')) throw ConfigError("output.report", "cannot write '" + report_file + "'");
    }
    if (!quiet) out << text << '\n';
    if (!report.pass) {
      err << "check failed: " << report.kind << " max_defect " << format_number(report.max_defect) << '\n';
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const RunError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace subjet::app
