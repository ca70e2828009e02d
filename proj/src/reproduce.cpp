#include "fext/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fext {

namespace {

constexpr int kExtendedSupGrid = 2001;
constexpr int kProfilePoints = 401;

ExperimentSpec base(Command c, const std::string& fn, GridKind grid, NRange N, std::vector<double> eps) {
  ExperimentSpec s;
  s.command = c;
  s.function = fn;
  s.grid = grid;
  s.N = N;
  if (!eps.empty()) s.epsilons = std::move(eps);
  return s;
}

ExperimentSpec extended(ExperimentSpec s, int digits) {
  s.digits = digits;
  s.supPoints = kExtendedSupGrid;
  return s;
}

ExperimentSpec exact(ExperimentSpec s, int digits) {
  s.solver = SolverMode::Exact;
  return extended(std::move(s), digits);
}

std::vector<ResultRow> concat(const std::vector<ExperimentSpec>& specs) {
  std::vector<ResultRow> rows;
  for (const auto& s : specs) {
    auto r = run(s);
    rows.insert(rows.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  }
  return rows;
}

Panel panel(std::string name, std::string description, bool ext, double seconds, std::vector<ExperimentSpec> specs) {
  return {std::move(name), std::move(description), ext, seconds, [specs = std::move(specs)] { return concat(specs); }};
}

// Pointwise error |f - G(f)| on [-1,1] for noisy data.
std::vector<ResultRow> error_profile(const std::string& fn, GridKind grid, int N, double gamma,
                                     const std::vector<double>& deltas, std::uint64_t seed) {
  const std::vector<std::string> cols = {"function", "grid", "T", "N", "M", "gamma", "epsilon",
                                         "delta",    "seed", "x", "error"};
  const double eps = 1e-14;
  const TestFunction& f = lookup(fn);
  ExperimentSpec spec = base(Command::Noise, fn, grid, NRange{N, N, 1}, {eps});
  spec.gamma = gamma;
  const ExtensionConfig cfg = spec.config_for(N);
  const Vec<double> x = uniform_grid(kProfilePoints);
  std::vector<ResultRow> rows;
  for (double delta : deltas) {
    LinearSystem<double> sys = build_system<double>(cfg);
    attach_rhs(sys, f.eval);
    CVec<double> eta = noise_inject<double>(CVec<double>::Zero(sys.rhs->size()), delta, seed);
    sys.rhs = CVec<double>(*sys.rhs + eta * sys.row_scale);
    const auto sol = truncated_solve(sys, eps);
    const CVec<double> v = evaluate(sol, x);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      ResultRow row(cols);
      row.set("function", fn);
      row.set("grid", grid_name(grid));
      row.set("T", cfg.T);
      row.set("N", static_cast<long long>(N));
      if (grid == GridKind::Equispaced) {
        row.set("M", static_cast<long long>(cfg.M));
        row.set("gamma", gamma);
      }
      row.set("epsilon", eps);
      row.set("delta", delta);
      row.set("seed", static_cast<long long>(seed));
      row.set("x", x(i));
      row.set("error", std::abs(f.eval(x(i)) - v(i)));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ResultRow> singular_functions(int digits, bool zeros) {
  DigitsScope scope(digits);
  const int N = 20;
  const ExtensionConfig cfg = ExtensionConfig::continuous(N, 2);
  const auto fact = svd(build_system<mp_real>(cfg));
  std::vector<ResultRow> rows;
  if (zeros) {
    for (int n : {0, 5, 10, 20, 40}) {
      ResultRow row(std::vector<std::string>{"N", "T", "n", "sigma", "zeroCount"});
      const auto phi = frame_function(fact, n, cfg);
      row.set("N", static_cast<long long>(N));
      row.set("T", cfg.T);
      row.set("n", static_cast<long long>(n));
      row.set("sigma", to_double(phi.sigma));
      row.set("zeroCount", static_cast<long long>(zero_count(phi)));
      rows.push_back(std::move(row));
    }
    return rows;
  }
  const Vec<double> xd = uniform_grid(2 * kProfilePoints - 1, -cfg.T, cfg.T);
  Vec<mp_real> x(xd.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = mp_real(xd(i));
  for (int n : {0, 20, 40}) {
    const auto phi = frame_function(fact, n, cfg);
    const CVec<mp_real> v = evaluate(phi, x);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      ResultRow row(std::vector<std::string>{"N", "T", "n", "x", "absPhi"});
      row.set("N", static_cast<long long>(N));
      row.set("T", cfg.T);
      row.set("n", static_cast<long long>(n));
      row.set("x", xd(i));
      row.set("absPhi", std::abs(to_double(v(i))));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ResultRow> contour_rows() {
  const int N = 200;
  const double eps = 1e-14;
  std::vector<Task> tasks;
  for (int t = 1; t <= 12; ++t)
    for (int g = 0; g <= 12; ++g)
      tasks.push_back([t, g, N, eps] {
        const double T = 1 + 0.25 * t;
        const double gamma = 1 + 0.25 * g;
        ResultRow row(std::vector<std::string>{"N", "gamma", "T", "M", "epsilon", "K"});
        row.set("N", static_cast<long long>(N));
        row.set("gamma", gamma);
        row.set("T", T);
        row.set("M", static_cast<long long>(oversampled(N, gamma)));
        row.set("epsilon", eps);
        row.set("K", condition_bound(SystemKind::Equispaced, N, T, gamma, SolverParams{eps}));
        return std::vector<ResultRow>{row};
      });
  return detail::execute(tasks, 0);
}

const std::vector<std::string> kTargets = {"table1", "table2", "fig1", "fig2", "fig3",  "fig4",       "fig5",
                                           "fig6",   "fig7",   "fig8", "fig9", "fig10", "fig-contour"};

}  // namespace

std::vector<std::string> reproduce_targets() {
  return kTargets;
}

std::vector<Panel> panels_for(const std::string& target, int digits) {
  const auto C = GridKind::Continuous;
  const auto D = GridKind::MappedChebyshev;
  const auto E = GridKind::Equispaced;
  std::vector<Panel> out;
  if (target == "table1") {
    out.push_back(panel("table1", "K for the continuous (eps=2.5e-13) and discrete (eps=1e-14) extensions, T=2", false,
                        10,
                        {base(Command::Condition, "", C, {40, 200, 40}, {2.5e-13}),
                         base(Command::Condition, "", D, {40, 200, 40}, {1e-14})}));
  } else if (target == "table2") {
    std::vector<ExperimentSpec> specs;
    for (double g : {1.0, 2.0, 4.0}) {
      auto s = base(Command::Condition, "", E, {40, 200, 40}, {1e-14});
      s.gamma = g;
      specs.push_back(s);
    }
    out.push_back(panel("table2", "K for the equispaced extension, T=2, gamma=1,2,4, eps=1e-14", false, 15, specs));
  } else if (target == "fig1") {
    out.push_back(panel("fig1-spectrum", "eigenvalues of the continuous Gram matrix and singular values of the "
                                         "discrete matrix, N=200, T=2",
                        false, 5,
                        {base(Command::Spectrum, "", C, {200, 200, 1}, {}),
                         base(Command::Spectrum, "", D, {200, 200, 1}, {})}));
    out.push_back(panel("fig1-symmetry", "eigenvalue symmetry about 1/2 at T=2, N=10,20", true, 15,
                        {extended(base(Command::Spectrum, "", C, {10, 20, 10}, {}), digits)}));
  } else if (target == "fig2") {
    for (const std::string fn : {"oscil", "runge25", "pole87", "absx7"}) {
      std::vector<ExperimentSpec> specs;
      for (GridKind g : {C, D})
        for (bool adaptive : {false, true}) {
          auto s = base(Command::Approx, fn, g, {2, 120, 2}, {1e-14});
          if (adaptive) s.adaptiveTolerance = 1e-14;
          specs.push_back(s);
        }
      out.push_back(panel("fig2-" + fn, "sup error of the continuous and discrete extensions, T=2 and adaptive T",
                          false, 20, specs));
    }
  } else if (target == "fig3") {
    for (const std::string fn : {"runge16", "pole87", "cosh40", "pole101"}) {
      out.push_back(panel("fig3-" + fn + "-numerical", "error and coefficient norm, eps=1e-14, T=2", false, 5,
                          {base(Command::Approx, fn, C, {2, 80, 2}, {1e-14}),
                           base(Command::Approx, fn, D, {2, 80, 2}, {1e-14})}));
      out.push_back(panel("fig3-" + fn + "-exact", "error and coefficient norm of the exact extensions, T=2", true, 100,
                          {exact(base(Command::Approx, fn, C, {2, 40, 2}, {}), digits),
                           exact(base(Command::Approx, fn, D, {2, 40, 2}, {}), digits)}));
    }
  } else if (target == "fig4") {
    const std::vector<double> eps = {1e-6, 1e-12, 1e-18, 1e-24};
    for (const std::string fn : {"runge16", "pole87", "linear"})
      for (GridKind g : {C, D}) {
        const std::string kind = g == C ? "continuous" : "discrete";
        out.push_back(panel("fig4-" + fn + "-" + kind, "truncated SVD error and coefficient norm, T=2", true, 150,
                            {extended(base(Command::Sweep, fn, g, {2, 40, 2}, eps), digits),
                             exact(base(Command::Approx, fn, g, {2, 40, 2}, {}), digits)}));
      }
  } else if (target == "fig5") {
    out.push_back({"fig5-functions", "|Phi_n| on [-T,T] for n=0,20,40, N=20, T=2", true, 15,
                   [digits] { return singular_functions(digits, false); }});
    out.push_back({"fig5-zeros", "zero counts of Phi_n in (-1,1), N=20, T=2", true, 15,
                   [digits] { return singular_functions(digits, true); }});
  } else if (target == "fig6") {
    std::vector<ExperimentSpec> specs;
    for (GridKind g : {C, D})
      for (double delta : {1e-4, 1e-8, 1e-12, 0.0}) {
        auto s = base(Command::Noise, "expx", g, {2, 60, 2}, {1e-14});
        s.noise = delta;
        s.seed = 7;
        specs.push_back(s);
      }
    out.push_back(panel("fig6-error", "sup error with noisy data, expx, T=2", false, 20, specs));
    out.push_back({"fig6-profile", "pointwise error with noisy data, expx, N=30, T=2", false, 5, [] {
                     auto a = error_profile("expx", GridKind::Continuous, 30, 1, {1e-4, 1e-8, 1e-12, 0}, 7);
                     auto b = error_profile("expx", GridKind::MappedChebyshev, 30, 1, {1e-4, 1e-8, 1e-12, 0}, 7);
                     a.insert(a.end(), b.begin(), b.end());
                     return a;
                   }});
  } else if (target == "fig7") {
    std::vector<ExperimentSpec> ex, num;
    for (double g : {1.0, 2.0, 4.0}) {
      auto s = base(Command::Approx, "runge100", E, {4, 40, 4}, {});
      s.gamma = g;
      ex.push_back(exact(s, digits));
      auto t = base(Command::Approx, "runge100", E, {4, 200, 4}, {1e-14});
      t.gamma = g;
      num.push_back(t);
    }
    out.push_back(panel("fig7-exact", "exact equispaced extension of runge100, T=2, gamma=1,2,4", true, 120, ex));
    out.push_back(panel("fig7-numerical", "truncated SVD equispaced extension of runge100, eps=1e-14, T=2", false, 60,
                        num));
  } else if (target == "fig8" || target == "fig9") {
    std::vector<ExperimentSpec> specs;
    for (double g : {1.0, 2.0}) {
      auto s = base(Command::Constants, "", E, {4, 40, 4}, {1e-6, 1e-12, 1e-18, 1e-24, 1e-30});
      s.gamma = g;
      s.digits = digits;
      specs.push_back(s);
    }
    const std::string what = target == "fig8" ? "C1" : "C2";
    out.push_back(panel(target, what + " against N, T=2, gamma=1,2", true, 120, specs));
  } else if (target == "fig10") {
    std::vector<ExperimentSpec> tsvd;
    for (double g : {1.0, 2.0}) {
      auto s = extended(base(Command::Sweep, "runge16", E, {4, 40, 4}, {1e-6, 1e-12, 1e-18}), digits);
      s.gamma = g;
      tsvd.push_back(s);
      auto x = exact(base(Command::Approx, "runge16", E, {4, 40, 4}, {}), digits);
      x.gamma = g;
      tsvd.push_back(x);
    }
    out.push_back(panel("fig10-tsvd", "truncated SVD equispaced extension of runge16, T=2, gamma=1,2", true, 180,
                        tsvd));
    std::vector<ExperimentSpec> fns;
    for (const std::string fn : {"oscil", "absx7", "runge25", "pole87"}) {
      auto s = base(Command::Approx, fn, E, {4, 200, 4}, {1e-14});
      s.gamma = 2;
      fns.push_back(s);
    }
    out.push_back(panel("fig10-functions", "equispaced extension with gamma=2, T=2", false, 60, fns));
    out.push_back({"fig10-noise", "pointwise error with noisy equispaced data, expx, N=30, T=2", false, 5, [] {
                     const std::vector<double> deltas = {1e-4, 1e-6, 1e-8, 1e-10, 0};
                     auto a = error_profile("expx", GridKind::Equispaced, 30, 1, deltas, 7);
                     auto b = error_profile("expx", GridKind::Equispaced, 30, 2, deltas, 7);
                     a.insert(a.end(), b.begin(), b.end());
                     return a;
                   }});
  } else if (target == "fig-contour") {
    out.push_back({"fig-contour", "K for the equispaced extension over gamma in [1,4] and T in (1,4], N=200", false,
                   150, [] { return contour_rows(); }});
  } else {
    throw std::invalid_argument("unknown reproduce target: " + target);
  }
  return out;
}

bool ReproduceResult::ok() const {
  for (const auto& p : panels)
    if (!p.ok) return false;
  return true;
}

ReproduceResult reproduce(const std::string& target, const std::string& directory, int digits) {
  const std::vector<Panel> panels = panels_for(target, digits);
  std::filesystem::create_directories(directory);
  ReproduceResult result;
  result.target = target;
  nlohmann::ordered_json manifest;
  manifest["target"] = target;
  manifest["digits"] = digits;
  manifest["panels"] = nlohmann::ordered_json::array();
  for (const Panel& p : panels) {
    PanelOutcome o;
    o.name = p.name;
    o.file = (std::filesystem::path(directory) / (p.name + ".csv")).string();
    o.extended = p.extended;
    o.expectedSeconds = p.expectedSeconds;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const std::vector<ResultRow> rows = p.produce();
      write_rows(rows, o.file, OutputFormat::Csv);
      o.rows = rows.size();
      if (!rows.empty()) o.columns = rows.front().columns();
    } catch (const std::exception& e) {
      o.ok = false;
      o.error = e.what();
      o.file.clear();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::ordered_json j;
    j["name"] = o.name;
    j["description"] = p.description;
    j["file"] = o.file.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(o.file);
    j["extendedPrecision"] = o.extended;
    j["expectedSeconds"] = o.expectedSeconds;
    j["seconds"] = o.seconds;
    j["status"] = o.ok ? "ok" : "failed";
    j["error"] = o.ok ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(o.error);
    j["columns"] = o.columns;
    j["rows"] = o.rows;
    manifest["panels"].push_back(j);
    result.panels.push_back(std::move(o));
  }
  manifest["status"] = result.ok() ? "ok" : "partial";
  result.manifest = (std::filesystem::path(directory) / "manifest.json").string();
  std::ofstream(result.manifest) << manifest.dump(2) << "\n";
  return result;
}

}  // namespace fext
