#include "fext/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fext {

namespace {

std::string lower(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

double parse_real(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": expected a number, got '" + s + "'");
  }
}

long long parse_integer(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument(std::string(what) + ": expected an integer, got '" + s + "'");
  return v;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ','))
    if (!trim(item).empty()) out.push_back(parse_real(item, what));
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

bool parse_bool(std::string_view text) {
  const std::string s = lower(trim(text));
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<std::string> kParameters = {"command", "function", "grid",   "T",      "N",     "M",
                                              "gamma",   "epsilon",  "delta", "seed", "digits", "solver"};

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Approx: return "approx";
    case Command::Sweep: return "sweep";
    case Command::Spectrum: return "spectrum";
    case Command::Breakpoints: return "breakpoints";
    case Command::Condition: return "condition";
    case Command::Constants: return "constants";
    case Command::Noise: return "noise";
    case Command::RungeRegion: return "runge-region";
  }
  return "approx";
}

std::string to_string(SolverMode s) {
  switch (s) {
    case SolverMode::Truncated: return "tsvd";
    case SolverMode::LeastSquares: return "lsq";
    case SolverMode::Exact: return "exact";
  }
  return "tsvd";
}

Command parse_command(std::string_view text) {
  const std::string s = lower(trim(text));
  for (Command c : {Command::Approx, Command::Sweep, Command::Spectrum, Command::Breakpoints, Command::Condition,
                    Command::Constants, Command::Noise, Command::RungeRegion})
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown command: " + s);
}

GridKind parse_grid(std::string_view text) {
  const std::string s = lower(trim(text));
  if (s == "continuous") return GridKind::Continuous;
  if (s == "discrete" || s == "mapped-chebyshev") return GridKind::MappedChebyshev;
  if (s == "equispaced") return GridKind::Equispaced;
  throw std::invalid_argument("unknown grid: " + s);
}

std::string grid_name(GridKind g) {
  switch (g) {
    case GridKind::Continuous: return "continuous";
    case GridKind::MappedChebyshev: return "discrete";
    case GridKind::Equispaced: return "equispaced";
  }
  return "discrete";
}

SolverMode parse_solver(std::string_view text) {
  const std::string s = lower(trim(text));
  if (s == "tsvd") return SolverMode::Truncated;
  if (s == "lsq") return SolverMode::LeastSquares;
  if (s == "exact") return SolverMode::Exact;
  throw std::invalid_argument("unknown solver: " + s);
}

OutputFormat parse_format(std::string_view text) {
  const std::string s = lower(trim(text));
  if (s == "csv") return OutputFormat::Csv;
  if (s == "jsonl") return OutputFormat::Jsonl;
  throw std::invalid_argument("unknown format: " + s);
}

int default_step(GridKind grid) {
  return grid == GridKind::Equispaced ? 4 : 2;
}

NRange NRange::parse(std::string_view text) {
  const std::string s = trim(text);
  std::vector<long long> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find("..", pos);
    parts.push_back(parse_integer(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos), "N"));
    if (next == std::string::npos) break;
    pos = next + 2;
  }
  if (parts.size() > 3) throw std::invalid_argument("N: expected A..B[..step]");
  NRange r;
  r.first = static_cast<int>(parts[0]);
  r.last = static_cast<int>(parts.size() > 1 ? parts[1] : parts[0]);
  r.step = parts.size() > 2 ? static_cast<int>(parts[2]) : (parts.size() == 1 ? 1 : 0);
  if (r.first < 1 || r.last < r.first || r.step < 0)
    throw std::invalid_argument("N: need 1 <= A <= B and a non-negative step");
  return r;
}

std::vector<int> NRange::values(GridKind grid) const {
  const int s = step > 0 ? step : default_step(grid);
  std::vector<int> out;
  for (int n = first; n <= last; n += s) out.push_back(n);
  return out;
}

void ExperimentSpec::validate() const {
  if (!adaptiveTolerance && !(T > 1)) throw std::invalid_argument("T must exceed 1");
  if (adaptiveTolerance && !(*adaptiveTolerance > 0 && *adaptiveTolerance < 1))
    throw std::invalid_argument("adaptive tolerance must lie in (0,1)");
  if (!(gamma >= 1)) throw std::invalid_argument("gamma must be at least 1");
  if (N.first < 1 || N.last < N.first || N.step < 0) throw std::invalid_argument("invalid N range");
  if (epsilons.empty()) throw std::invalid_argument("eps list is empty");
  for (double e : epsilons)
    if (!(e >= 0)) throw std::invalid_argument("eps values must be non-negative");
  if (!(noise >= 0)) throw std::invalid_argument("noise amplitude must be non-negative");
  if (digits != 0 && digits < 30) throw std::invalid_argument("digits must be 0 (double) or at least 30");
  if (supPoints < 2) throw std::invalid_argument("sup grid needs at least 2 points");
  if (solver == SolverMode::Exact && noise > 0) throw std::invalid_argument("exact mode takes noise-free data");
  if (command == Command::Approx || command == Command::Sweep || command == Command::Noise) lookup(function);
}

double ExperimentSpec::T_for(int n) const {
  return adaptiveTolerance ? adaptive_T(n, *adaptiveTolerance) : T;
}

ExtensionConfig ExperimentSpec::config_for(int n) const {
  const double t = T_for(n);
  switch (grid) {
    case GridKind::Continuous: return ExtensionConfig::continuous(n, t);
    case GridKind::MappedChebyshev: return ExtensionConfig::discrete(n, t);
    case GridKind::Equispaced: return ExtensionConfig::equispaced(n, oversampled(n, gamma), t);
  }
  return ExtensionConfig::discrete(n, t);
}

void apply_setting(ExperimentSpec& spec, std::string_view raw_key, std::string_view value) {
  std::string key = lower(trim(raw_key));
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  if (key == "command")
    spec.command = parse_command(value);
  else if (key == "fn" || key == "function")
    spec.function = trim(value);
  else if (key == "t") {
    spec.T = parse_real(value, "T");
    spec.adaptiveTolerance.reset();
  } else if (key == "adaptive")
    spec.adaptiveTolerance = parse_real(value, "adaptive");
  else if (key == "grid")
    spec.grid = parse_grid(value);
  else if (key == "gamma")
    spec.gamma = parse_real(value, "gamma");
  else if (key == "n")
    spec.N = NRange::parse(value);
  else if (key == "eps" || key == "epsilon")
    spec.epsilons = parse_list(value, "eps");
  else if (key == "noise" || key == "delta")
    spec.noise = parse_real(value, "noise");
  else if (key == "seed")
    spec.seed = static_cast<std::uint64_t>(parse_integer(value, "seed"));
  else if (key == "digits")
    spec.digits = static_cast<int>(parse_integer(value, "digits"));
  else if (key == "solver")
    spec.solver = parse_solver(value);
  else if (key == "out" || key == "output")
    spec.output = trim(value);
  else if (key == "format")
    spec.format = parse_format(value);
  else if (key == "sup-points")
    spec.supPoints = static_cast<int>(parse_integer(value, "sup-points"));
  else if (key == "timing")
    spec.timing = parse_bool(value);
  else if (key == "threads")
    spec.threads = static_cast<int>(parse_integer(value, "threads"));
  else
    throw std::invalid_argument("unknown setting: " + key);
}

void load_config(ExperimentSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  if (std::filesystem::path(path).extension() == ".json") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument("config: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
    for (const auto& [key, v] : doc.items()) {
      std::string text;
      if (v.is_string())
        text = v.get<std::string>();
      else if (v.is_array()) {
        for (const auto& item : v) {
          if (!text.empty()) text += ",";
          text += item.is_string() ? item.get<std::string>() : item.dump();
        }
      } else
        text = v.dump();
      apply_setting(spec, key, text);
    }
    return;
  }
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';' || s[0] == '[') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
    apply_setting(spec, s.substr(0, eq), s.substr(eq + 1));
  }
}

ResultRow::ResultRow(const std::vector<std::string>& columns) {
  for (const auto& c : columns) fields.emplace_back(c, std::nullopt);
}

void ResultRow::set(std::string_view key, Value value) {
  for (auto& [k, v] : fields)
    if (k == key) {
      v = std::move(value);
      return;
    }
  fields.emplace_back(std::string(key), std::move(value));
}

void ResultRow::set_null(std::string_view key) {
  for (auto& [k, v] : fields)
    if (k == key) {
      v.reset();
      return;
    }
  fields.emplace_back(std::string(key), std::nullopt);
}

const std::optional<Value>& ResultRow::get(std::string_view key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  throw std::out_of_range("ResultRow: no column " + std::string(key));
}

std::optional<double> ResultRow::number(std::string_view key) const {
  const auto& v = get(key);
  if (!v) return std::nullopt;
  if (const auto* d = std::get_if<double>(&*v)) return *d;
  if (const auto* i = std::get_if<long long>(&*v)) return static_cast<double>(*i);
  return std::nullopt;
}

std::vector<std::string> ResultRow::columns() const {
  std::vector<std::string> out;
  for (const auto& f : fields) out.push_back(f.first);
  return out;
}

std::vector<std::string> columns_for(Command c) {
  std::vector<std::string> cols = kParameters;
  std::vector<std::string> metrics;
  switch (c) {
    case Command::Approx:
    case Command::Sweep:
    case Command::Noise: metrics = {"supError", "l2Error", "coeffNorm", "keptRank", "residual", "timing"}; break;
    case Command::Spectrum:
      metrics = {"index", "sigma", "nearOne", "nearZero", "transitionWidth", "symmetryResidual", "timing"};
      break;
    case Command::Breakpoints: metrics = {"N0", "N1", "N2", "N2predicted", "timing"}; break;
    case Command::Condition: metrics = {"K", "timing"}; break;
    case Command::Constants: metrics = {"C1", "C2", "D", "B", "sigmaMin", "keptRank", "timing"}; break;
    case Command::RungeRegion: metrics = {"xRe", "xIm", "phi", "indicator"}; break;
  }
  cols.insert(cols.end(), metrics.begin(), metrics.end());
  return cols;
}

std::vector<std::complex<double>> noise_inject(const std::vector<std::complex<double>>& values, double delta,
                                               std::uint64_t seed) {
  CVec<double> v = Eigen::Map<const CVec<double>>(values.data(), static_cast<Eigen::Index>(values.size()));
  CVec<double> w = noise_inject<double>(v, delta, seed);
  return {w.data(), w.data() + w.size()};
}

template <class S>
CVec<S> noise_inject(const CVec<S>& values, double delta, std::uint64_t seed) {
  if (!(delta >= 0)) throw DomainError("noise_inject: delta must be non-negative");
  if (delta == 0) return values;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CVec<S> out = values;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double r = delta * std::sqrt(unit(gen));
    const double theta = 2 * std::numbers::pi * unit(gen);
    out(i) += std::complex<S>(S(r * std::cos(theta)), S(r * std::sin(theta)));
  }
  return out;
}

template CVec<double> noise_inject<double>(const CVec<double>&, double, std::uint64_t);
template CVec<mp_real> noise_inject<mp_real>(const CVec<mp_real>&, double, std::uint64_t);

namespace {

using Clock = std::chrono::steady_clock;

ResultRow parameter_row(const ExperimentSpec& spec, bool uses_function) {
  ResultRow row(columns_for(spec.command));
  row.set("command", to_string(spec.command));
  if (uses_function) row.set("function", spec.function);
  row.set("digits", static_cast<long long>(spec.extended() ? (spec.digits ? spec.digits : kDefaultDigits) : 0));
  return row;
}

void set_config(ResultRow& row, const ExperimentSpec& spec, const ExtensionConfig& cfg) {
  row.set("grid", grid_name(cfg.grid));
  row.set("T", cfg.T);
  row.set("N", static_cast<long long>(cfg.N));
  if (cfg.grid == GridKind::Equispaced) {
    row.set("M", static_cast<long long>(cfg.M));
    row.set("gamma", spec.gamma);
  }
}

void set_timing(ResultRow& row, const ExperimentSpec& spec, Clock::time_point t0) {
  if (spec.timing) row.set("timing", seconds_since(t0));
}

std::uint64_t point_seed(std::uint64_t seed, int N) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(N)};
  std::uint64_t out[1];
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out[0];
}

template <class S>
void record_solution(ResultRow& row, const ExperimentSpec& spec, const Function<S>& f,
                     const ExtensionSolution<S>& sol) {
  row.set("supError", to_double(sup_error(f, sol, spec.supPoints)));
  row.set("l2Error", to_double(l2_distance<S>(f, sol.config, sol.coefficients)));
  row.set("coeffNorm", to_double(S(sol.coefficients.norm())));
  row.set("keptRank", static_cast<long long>(sol.keptRank));
  row.set("residual", to_double(sol.residualNorm));
}

template <class S>
std::vector<ResultRow> approx_point(const ExperimentSpec& spec, int N) {
  const auto t0 = Clock::now();
  const TestFunction& fn = lookup(spec.function);
  const Function<S>& f = fn.as<S>();
  const ExtensionConfig cfg = spec.config_for(N);
  const int digits = spec.digits ? spec.digits : kDefaultDigits;
  std::vector<ResultRow> rows;
  auto base = [&]() {
    ResultRow row = parameter_row(spec, true);
    set_config(row, spec, cfg);
    row.set("solver", to_string(spec.solver));
    if (spec.command == Command::Noise || spec.noise > 0) {
      row.set("delta", spec.noise);
      row.set("seed", static_cast<long long>(spec.seed));
    }
    return row;
  };

  if (spec.solver == SolverMode::Exact) {
    if constexpr (is_extended<S>::value) {
      ExtensionSolution<mp_real> sol = exact_extension(fn.eval_mp, cfg, digits);
      ResultRow row = base();
      record_solution<mp_real>(row, spec, fn.eval_mp, sol);
      set_timing(row, spec, t0);
      rows.push_back(std::move(row));
      return rows;
    } else {
      throw std::logic_error("exact mode runs in extended precision");
    }
  }

  LinearSystem<S> sys = build_system<S>(cfg);
  attach_rhs(sys, f);
  if (spec.noise > 0) {
    CVec<S> clean = *sys.rhs;
    CVec<S> perturbed = noise_inject<S>(CVec<S>::Zero(clean.size()), spec.noise, point_seed(spec.seed, N));
    sys.rhs = CVec<S>(clean + perturbed * sys.row_scale);
  }
  const SvdFactorization<S> fact = svd(sys);
  if (spec.solver == SolverMode::LeastSquares) {
    ResultRow row = base();
    record_solution<S>(row, spec, f, lsq_solve(sys, fact));
    set_timing(row, spec, t0);
    rows.push_back(std::move(row));
    return rows;
  }
  std::vector<double> eps = spec.epsilons;
  if (spec.command != Command::Sweep) eps.resize(1);
  for (double e : eps) {
    ResultRow row = base();
    row.set("epsilon", e);
    record_solution<S>(row, spec, f, truncated_solve(sys, fact, S(e)));
    set_timing(row, spec, t0);
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class S>
std::vector<ResultRow> spectrum_point(const ExperimentSpec& spec, int N) {
  const auto t0 = Clock::now();
  const ExtensionConfig cfg = spec.config_for(N);
  const SpectrumReport rep = spectrum_report(build_system<S>(cfg));
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    ResultRow row = parameter_row(spec, false);
    set_config(row, spec, cfg);
    row.set("index", static_cast<long long>(i));
    row.set("sigma", rep.values[i]);
    row.set("nearOne", static_cast<long long>(rep.nearOne));
    row.set("nearZero", static_cast<long long>(rep.nearZero));
    row.set("transitionWidth", static_cast<long long>(rep.transitionWidth));
    if (rep.symmetryResidual) row.set("symmetryResidual", *rep.symmetryResidual);
    set_timing(row, spec, t0);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> condition_point(const ExperimentSpec& spec, int N) {
  const ExtensionConfig cfg = spec.config_for(N);
  std::vector<ResultRow> rows;
  for (double e : spec.epsilons) {
    const auto t0 = Clock::now();
    ResultRow row = parameter_row(spec, false);
    row.set("digits", 0LL);
    set_config(row, spec, cfg);
    row.set("epsilon", e);
    row.set("K", condition_bound(kind_of(cfg), N, cfg.T, spec.gamma, SolverParams{e}));
    set_timing(row, spec, t0);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> constants_point(const ExperimentSpec& spec, int N) {
  const auto t0 = Clock::now();
  const int digits = spec.digits ? spec.digits : kDefaultDigits;
  const double T = spec.T_for(N);
  const int M = oversampled(N, spec.gamma);
  const ExtensionConfig cfg = ExtensionConfig::equispaced(N, M, T);
  std::vector<ResultRow> rows;
  for (const StabilityReport& r : stability_constants(N, M, T, spec.epsilons, digits)) {
    ResultRow row = parameter_row(spec, false);
    set_config(row, spec, cfg);
    row.set("epsilon", r.epsilon);
    row.set("C1", r.C1);
    row.set("C2", r.C2);
    row.set("D", r.D);
    row.set("B", r.B);
    row.set("sigmaMin", r.sigmaMin);
    row.set("keptRank", static_cast<long long>(r.keptRank));
    set_timing(row, spec, t0);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> breakpoint_rows(const ExperimentSpec& spec) {
  std::vector<ResultRow> rows;
  const int digits = spec.digits ? spec.digits : kDefaultDigits;
  for (double e : spec.epsilons) {
    const auto t0 = Clock::now();
    const BreakpointReport r = breakpoints(spec.T, e, spec.gamma, spec.N.last, digits);
    ResultRow row = parameter_row(spec, false);
    row.set("grid", grid_name(GridKind::Equispaced));
    row.set("T", spec.T);
    row.set("gamma", spec.gamma);
    row.set("epsilon", e);
    row.set("digits", static_cast<long long>(digits));
    row.set("N0", r.N0);
    row.set("N1", r.N1);
    row.set("N2", static_cast<long long>(r.N2));
    if (std::isfinite(r.N2predicted)) row.set("N2predicted", r.N2predicted);
    set_timing(row, spec, t0);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> runge_rows(const ExperimentSpec& spec) {
  const RungeRegion region = runge_region_scan(spec.T);
  std::vector<ResultRow> rows;
  for (const auto& s : region.samples) {
    ResultRow row = parameter_row(spec, false);
    row.set("digits", 0LL);
    row.set("T", spec.T);
    row.set("xRe", s.x.real());
    row.set("xIm", s.x.imag());
    row.set("phi", s.phi);
    row.set("indicator", s.indicator);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

namespace detail {

std::vector<ResultRow> execute(const std::vector<Task>& tasks, int threads) {
  std::vector<std::vector<ResultRow>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(tasks.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
          try {
            results[i] = tasks[i]();
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<ResultRow> rows;
  for (auto& r : results)
    for (auto& row : r) rows.push_back(std::move(row));
  return rows;
}

}  // namespace detail

std::vector<ResultRow> run(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.command == Command::Breakpoints) return breakpoint_rows(spec);
  if (spec.command == Command::RungeRegion) return runge_rows(spec);

  const bool extended = spec.extended();
  std::vector<Task> tasks;
  for (int N : spec.N.values(spec.grid)) {
    switch (spec.command) {
      case Command::Approx:
      case Command::Sweep:
      case Command::Noise:
        if (extended)
          tasks.push_back([&spec, N] {
            DigitsScope scope(spec.digits ? spec.digits : kDefaultDigits);
            return approx_point<mp_real>(spec, N);
          });
        else
          tasks.push_back([&spec, N] { return approx_point<double>(spec, N); });
        break;
      case Command::Spectrum:
        if (extended)
          tasks.push_back([&spec, N] {
            DigitsScope scope(spec.digits);
            return spectrum_point<mp_real>(spec, N);
          });
        else
          tasks.push_back([&spec, N] { return spectrum_point<double>(spec, N); });
        break;
      case Command::Condition: tasks.push_back([&spec, N] { return condition_point(spec, N); }); break;
      case Command::Constants: tasks.push_back([&spec, N] { return constants_point(spec, N); }); break;
      default: break;
    }
  }
  // The working precision of extended arithmetic is process-wide, so those points run one at a time.
  return detail::execute(tasks, extended ? 1 : spec.threads);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string csv_field(const std::optional<Value>& v) {
  if (!v) return "null";
  if (const auto* d = std::get_if<double>(&*v)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&*v)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(*v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  if (rows.empty()) return;
  const auto cols = rows.front().columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(row.get(cols[i]));
    out << "\n";
  }
}

void write_jsonl(std::ostream& out, const std::vector<ResultRow>& rows) {
  for (const auto& row : rows) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : row.fields) {
      if (!v)
        j[k] = nullptr;
      else if (const auto* d = std::get_if<double>(&*v))
        j[k] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(format_number(*d));
      else if (const auto* i = std::get_if<long long>(&*v))
        j[k] = *i;
      else
        j[k] = std::get<std::string>(*v);
    }
    out << j.dump() << "\n";
  }
}

void write_rows(const std::vector<ResultRow>& rows, const std::string& path, OutputFormat format) {
  auto emit = [&](std::ostream& out) {
    if (format == OutputFormat::Csv)
      write_csv(out, rows);
    else
      write_jsonl(out, rows);
  };
  if (path.empty() || path == "-") {
    emit(std::cout);
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + path);
  emit(out);
}

}  // namespace fext
