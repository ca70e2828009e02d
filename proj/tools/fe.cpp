#include "fext/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

constexpr int kUsageError = 1;
constexpr int kBudgetError = 2;

const char* kCommands =
    "approx | sweep | spectrum | breakpoints | condition | constants | noise | runge-region | reproduce | list";

int list_functions() {
  for (const auto& f : fext::registry()) std::cout << f.name << "\t" << f.formula << "\n";
  return 0;
}

int run_reproduce(const std::string& target, const std::string& out, int digits) {
  const std::string dir = out.empty() ? "results/" + target : out;
  const fext::ReproduceResult r = fext::reproduce(target, dir, digits);
  for (const auto& p : r.panels) {
    if (p.ok)
      std::cout << p.name << ": " << p.rows << " rows -> " << p.file << "\n";
    else
      std::cerr << p.name << ": failed: " << p.error << "\n";
  }
  std::cout << "manifest: " << r.manifest << "\n";
  return r.ok() ? 0 : kBudgetError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier extension experiments"};
  app.set_help_flag("-h,--help", "Print this help message and exit");

  std::string command;
  std::string target;
  std::string config;
  std::map<std::string, std::string> values;
  bool timing = false;

  app.add_option("command", command, kCommands)->required();
  app.add_option("target", target, "reproduce target");
  app.add_option("--config", config, "key = value or JSON configuration file");
  const std::pair<const char*, const char*> options[] = {
      {"--fn", "registry function name"},
      {"--T", "extension parameter"},
      {"--adaptive", "choose T per N from this tolerance"},
      {"--grid", "continuous | discrete | equispaced"},
      {"--gamma", "oversampling factor M/N"},
      {"--N", "range A..B[..step]"},
      {"--eps", "comma-separated cutoffs"},
      {"--noise", "noise amplitude"},
      {"--seed", "noise seed"},
      {"--digits", "extended-precision digits (0 selects double)"},
      {"--solver", "tsvd | lsq | exact"},
      {"--out", "output path, or directory for reproduce"},
      {"--format", "csv | jsonl"},
      {"--sup-points", "points of the sup-norm grid"},
      {"--threads", "worker threads (0 uses all cores)"},
  };
  for (const auto& [name, help] : options) app.add_option(name, values[std::string(name).substr(2)], help);
  app.add_flag("--timing", timing, "record wall-clock seconds per row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (command == "list") return list_functions();
    if (command == "reproduce") {
      if (target.empty()) {
        std::cerr << "reproduce needs a target:";
        for (const auto& t : fext::reproduce_targets()) std::cerr << " " << t;
        std::cerr << "\n";
        return kUsageError;
      }
      const int digits = values["digits"].empty() ? fext::kDefaultDigits : std::stoi(values["digits"]);
      return run_reproduce(target, values["out"], digits);
    }
    if (!target.empty()) throw std::invalid_argument("unexpected argument: " + target);

    fext::ExperimentSpec spec;
    spec.command = fext::parse_command(command);
    if (!config.empty()) fext::load_config(spec, config);
    spec.command = fext::parse_command(command);
    for (const auto& [key, value] : values)
      if (!value.empty()) fext::apply_setting(spec, key, value);
    if (timing) spec.timing = true;

    const auto rows = fext::run(spec);
    fext::write_rows(rows, spec.output, spec.format);
    return 0;
  } catch (const fext::PrecisionError& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return kBudgetError;
  } catch (const fext::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudgetError;
  } catch (const fext::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kBudgetError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}
