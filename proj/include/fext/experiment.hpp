#ifndef FEXT_EXPERIMENT_HPP
#define FEXT_EXPERIMENT_HPP

#include "fext/analysis.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace fext {

enum class Command { Approx, Sweep, Spectrum, Breakpoints, Condition, Constants, Noise, RungeRegion };
enum class SolverMode { Truncated, LeastSquares, Exact };
enum class OutputFormat { Csv, Jsonl };

std::string to_string(Command c);
std::string to_string(SolverMode s);
Command parse_command(std::string_view text);
GridKind parse_grid(std::string_view text);
SolverMode parse_solver(std::string_view text);
OutputFormat parse_format(std::string_view text);
std::string grid_name(GridKind g);

// Inclusive range A..B with optional step; step 0 selects the grid default.
struct NRange {
  int first = 2;
  int last = 40;
  int step = 0;

  static NRange parse(std::string_view text);
  std::vector<int> values(GridKind grid) const;
};

int default_step(GridKind grid);

struct ExperimentSpec {
  Command command = Command::Approx;
  std::string function = "runge25";
  double T = 2;
  std::optional<double> adaptiveTolerance;
  GridKind grid = GridKind::MappedChebyshev;
  double gamma = 1;
  NRange N;
  std::vector<double> epsilons{1e-14};
  double noise = 0;
  std::uint64_t seed = 0;
  int digits = 0;
  SolverMode solver = SolverMode::Truncated;
  std::string output;
  OutputFormat format = OutputFormat::Csv;
  int supPoints = kDefaultSupGrid;
  bool timing = false;
  int threads = 0;

  void validate() const;
  bool extended() const { return digits > 0 || solver == SolverMode::Exact || command == Command::Constants; }
  double T_for(int N) const;
  ExtensionConfig config_for(int N) const;
};

// Applies one key/value setting using the command-line option names.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

// Flat key = value file, or JSON when the path ends in .json.
void load_config(ExperimentSpec& spec, const std::string& path);

using Value = std::variant<long long, double, std::string>;

struct ResultRow {
  std::vector<std::pair<std::string, std::optional<Value>>> fields;

  ResultRow() = default;
  explicit ResultRow(const std::vector<std::string>& columns);

  void set(std::string_view key, Value value);
  void set_null(std::string_view key);
  const std::optional<Value>& get(std::string_view key) const;
  std::optional<double> number(std::string_view key) const;
  std::vector<std::string> columns() const;
};

std::vector<std::string> columns_for(Command c);

std::vector<ResultRow> run(const ExperimentSpec& spec);

using Task = std::function<std::vector<ResultRow>()>;

namespace detail {

// Runs tasks on a worker pool and concatenates their rows in task order.
std::vector<ResultRow> execute(const std::vector<Task>& tasks, int threads);

}  // namespace detail

// Adds independent perturbations drawn uniformly from the complex disc of radius delta.
std::vector<std::complex<double>> noise_inject(const std::vector<std::complex<double>>& values, double delta,
                                               std::uint64_t seed);

template <class S>
CVec<S> noise_inject(const CVec<S>& values, double delta, std::uint64_t seed);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_jsonl(std::ostream& out, const std::vector<ResultRow>& rows);
void write_rows(const std::vector<ResultRow>& rows, const std::string& path, OutputFormat format);
std::string format_number(double v);

struct Panel {
  std::string name;
  std::string description;
  bool extended = false;
  double expectedSeconds = 0;
  std::function<std::vector<ResultRow>()> produce;
};

struct PanelOutcome {
  std::string name;
  std::string file;
  bool extended = false;
  double expectedSeconds = 0;
  double seconds = 0;
  bool ok = true;
  std::string error;
  std::vector<std::string> columns;
  std::size_t rows = 0;
};

struct ReproduceResult {
  std::string target;
  std::string manifest;
  std::vector<PanelOutcome> panels;
  bool ok() const;
};

std::vector<std::string> reproduce_targets();
std::vector<Panel> panels_for(const std::string& target, int digits = kDefaultDigits);
ReproduceResult reproduce(const std::string& target, const std::string& directory, int digits = kDefaultDigits);

}  // namespace fext

#endif
