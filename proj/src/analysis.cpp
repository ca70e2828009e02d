#include "fext/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fext {

template <class S>
SpectrumReport spectrum_report(const LinearSystem<S>& system, double delta) {
  using std::abs;
  SpectrumReport r;
  r.delta = delta;
  SvdFactorization<S> fact = svd(system);
  const Eigen::Index n = fact.S.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double v = to_double(fact.S(k));
    r.values.push_back(v);
    if (v > 1 - delta)
      ++r.nearOne;
    else if (v < delta)
      ++r.nearZero;
    else
      ++r.transitionWidth;
  }
  r.predictedTransitionIndex = system.config.dimension() / system.config.T;
  if (system.kind == SystemKind::Continuous && system.config.T == 2) {
    S worst(0);
    for (Eigen::Index k = 0; k < n; ++k) {
      S e = abs(fact.S(k) + fact.S(n - 1 - k) - 1);
      if (e > worst) worst = e;
    }
    r.symmetryResidual = to_double(worst);
  }
  return r;
}

double slepian_gap_asymptote(int k, int N, double T) {
  const double size = 2.0 * N + 1;
  const double alpha = 1 - std::cos(std::numbers::pi / T);
  const double beta = fe_constant(T);
  const double log_value = 0.5 * std::log(std::numbers::pi) - std::lgamma(k + 1.0) +
                           (14.0 * k + 9) / 4 * std::log(2.0) + (2.0 * k + 1) / 4 * std::log(alpha) -
                           (k + 0.5) * std::log(2 - alpha) + (k + 0.5) * std::log(size) - size * std::log(beta);
  return std::exp(log_value);
}

double breakpoint_N0(double epsilon, double T) {
  if (!(epsilon > 0 && epsilon < 1)) throw DomainError("breakpoint_N0: epsilon must lie in (0,1)");
  return -std::log(epsilon) / (2 * std::log(fe_constant(T)));
}

int oversampled(int N, double gamma) {
  return std::max(N, static_cast<int>(std::lround(gamma * N)));
}

namespace {

double sigma_min_equispaced(int N, int M, double T, int digits) {
  auto sys = build_system<double>(ExtensionConfig::equispaced(N, M, T));
  auto fact = svd(sys);
  const double smin = fact.S(fact.S.size() - 1);
  if (smin > 1e-12 * fact.S(0)) return smin;
  DigitsScope scope(digits);
  auto sysx = build_system<mp_real>(ExtensionConfig::equispaced(N, M, T));
  auto factx = svd(sysx);
  return to_double(factx.S(factx.S.size() - 1));
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) throw DomainError("rate_fit: degenerate window");
  return (n * sxy - sx * sy) / den;
}

}  // namespace

BreakpointReport breakpoints(double T, double epsilon, double gamma, int Nmax, int digits) {
  BreakpointReport r;
  r.N0 = breakpoint_N0(epsilon, T);
  r.N1 = 2 * r.N0;
  int last_above = 0;
  bool crossed = false;
  for (int N = 1; N <= Nmax; ++N) {
    const double s = sigma_min_equispaced(N, oversampled(N, gamma), T, digits);
    r.sigmaMin.emplace_back(N, s);
    if (s > epsilon)
      last_above = N;
    else
      crossed = true;
  }
  if (!crossed) throw DomainError("breakpoints: Nmax too small to bracket N2");
  r.N2 = last_above;
  std::vector<double> xs, ys;
  for (auto [N, s] : r.sigmaMin)
    if (N >= std::max(2, r.N2 / 2) && N <= r.N2 + 1) {
      xs.push_back(N);
      ys.push_back(-std::log(s));
    }
  if (xs.size() >= 4) {
    const double dhat = std::exp(fit_slope(xs, ys));
    if (dhat > 1) r.N2predicted = -std::log(epsilon) / std::log(dhat);
  }
  return r;
}

double condition_bound(SystemKind kind, int N, double T, double gamma, const SolverParams& params) {
  ExtensionConfig cfg;
  switch (kind) {
    case SystemKind::Continuous: cfg = ExtensionConfig::continuous(N, T); break;
    case SystemKind::Discrete: cfg = ExtensionConfig::discrete(N, T); break;
    case SystemKind::Equispaced: cfg = ExtensionConfig::equispaced(N, oversampled(N, gamma), T); break;
  }
  auto sys = build_system<double>(cfg);
  auto fact = svd(sys);
  const int k = fact.count_above(params.epsilon);
  // G(e_n) = V_k S_k^{-1} U_k^* e_n; summing over n leaves the Frobenius norm of V_k S_k^{-1}.
  CMat<double> X = fact.V.leftCols(k) * fact.S.head(k).cwiseInverse().asDiagonal();
  if (kind == SystemKind::Discrete) return (sys.matrix * X).norm();
  return (l2_factor<double>(cfg) * X).norm();
}

namespace {

mp_real largest_eigenvalue(const CMat<mp_real>& H) {
  if (H.rows() == 0) return mp_real(0);
  CMat<mp_real> sym = (H + H.adjoint()) / mp_real(2);
  Eigen::SelfAdjointEigenSolver<CMat<mp_real>> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("stability_constants: eigensolver failed");
  return es.eigenvalues().maxCoeff();
}

double root(const mp_real& v) { return v > 0 ? to_double(sqrt(v)) : 0.0; }

}  // namespace

std::vector<StabilityReport> stability_constants(int N, int M, double T, const std::vector<double>& epsilons,
                                                int digits) {
  if (M < N) throw DomainError("stability_constants: M must be at least N");
  const PrecisionContext ctx = PrecisionContext::extended(digits);
  DigitsScope scope(ctx.digits);
  auto sys = build_system<mp_real>(ExtensionConfig::equispaced(N, M, T));
  auto fact = svd(sys);
  const CMat<mp_real> A = continuous_gram<mp_real>(ExtensionConfig::continuous(N, T));
  const int n = static_cast<int>(fact.S.size());
  const mp_real smin = fact.S(n - 1);
  if (smin * pow(mp_real(10), digits) < 1)
    throw PrecisionError("stability_constants: smallest singular value is below the digit budget");

  double D = std::numeric_limits<double>::infinity();
  const mp_real floor = pow(mp_real(10), -mp_real(digits) / 2);
  if (smin > floor) {
    CMat<mp_real> W = fact.V * fact.S.cwiseInverse().asDiagonal();
    D = root(largest_eigenvalue(W.adjoint() * A * W));
  }

  std::vector<StabilityReport> out;
  for (double epsilon : epsilons) {
    StabilityReport r;
    r.N = N;
    r.M = M;
    r.T = T;
    r.epsilon = epsilon;
    const int k = fact.count_above(mp_real(epsilon));
    r.keptRank = k;
    r.sigmaMin = to_double(smin);
    r.B = to_double(1 / smin);
    r.D = D;
    CMat<mp_real> Wk = fact.V.leftCols(k) * fact.S.head(k).cwiseInverse().asDiagonal();
    r.C1 = root(largest_eigenvalue(Wk.adjoint() * A * Wk));
    CMat<mp_real> Vd = fact.V.rightCols(n - k);
    r.C2 = root(largest_eigenvalue(Vd.adjoint() * A * Vd));
    out.push_back(r);
  }
  return out;
}

StabilityReport stability_constants(int N, int M, double T, double epsilon, int digits) {
  return stability_constants(N, M, T, std::vector<double>{epsilon}, digits).front();
}

std::pair<int, int> default_growth_window(int N2) {
  return {6, std::min(N2 - 2, 24)};
}

GrowthRates growth_rates(double gamma, double T, std::pair<int, int> window, double epsilon, int digits) {
  if (window.second - window.first + 1 < 4) throw DomainError("growth_rates: window needs at least 4 points");
  GrowthRates g;
  std::vector<double> xs, logD, logB;
  for (int N = window.first; N <= window.second; ++N) {
    StabilityReport r = stability_constants(N, oversampled(N, gamma), T, epsilon, digits);
    xs.push_back(N);
    logD.push_back(std::log(r.D));
    logB.push_back(std::log(r.B));
    g.samples.push_back(r);
  }
  g.cHat = std::exp(fit_slope(xs, logD));
  g.dHat = std::exp(fit_slope(xs, logB));
  g.aHat = std::log(g.cHat) / std::log(g.dHat);
  return g;
}

double rate_fit(const ErrorSeries& errors, std::optional<std::pair<int, int>> window) {
  std::vector<double> xs, ys;
  for (auto [N, e] : errors) {
    if (window && (N < window->first || N > window->second)) continue;
    if (!(e > 0)) throw DomainError("rate_fit: errors must be positive");
    xs.push_back(N);
    ys.push_back(std::log(e));
  }
  if (xs.size() < 4) throw DomainError("rate_fit: degenerate window");
  return std::exp(-fit_slope(xs, ys));
}

namespace {

using cd = std::complex<double>;

// Real part of the antiderivative w log w - w, continuous at w = 0.
double xlogx(cd w) {
  if (std::abs(w) == 0) return 0;
  return (w * std::log(w) - w).real();
}

// Integral over s in [0,1] of log|s + shift|.
double log_integral(cd shift) {
  return xlogx(cd(1) + shift) - xlogx(shift);
}

// log|sin(k u)/u|, smooth near u = 0.
double log_sinc(cd u, double k) {
  if (std::abs(u) < 1e-6) {
    cd ku = k * u;
    return std::log(std::abs(k * (1.0 - ku * ku / 6.0)));
  }
  return std::log(std::abs(std::sin(k * u))) - std::log(std::abs(u));
}

// Zeros 2Tj of sin(k u) within reach of u = x + sign*s, s in [0,1].
std::vector<double> nearby_zeros(cd x, double sign, double T) {
  const double lo = std::min(x.real(), x.real() + sign) - 1;
  const double hi = std::max(x.real(), x.real() + sign) + 1;
  std::vector<double> zeros;
  for (long j = std::lround(std::ceil(lo / (2 * T))); 2 * T * j <= hi; ++j) zeros.push_back(2 * T * j);
  return zeros;
}

// log|sin(k u)| minus the logarithms of the listed zeros, smooth in u.
double log_sin_remainder(cd u, double k, double T, const std::vector<double>& zeros) {
  const double nearest = 2 * T * std::round(u.real() / (2 * T));
  double v = log_sinc(u - nearest, k);
  bool listed = false;
  for (double z : zeros) {
    if (z == nearest)
      listed = true;
    else
      v -= std::log(std::abs(u - z));
  }
  if (!listed) v += std::log(std::abs(u - nearest));
  return v;
}

}  // namespace

double potential(double T, cd x) {
  if (!(T > 1)) throw DomainError("potential: T must exceed 1");
  const double c = std::cos(std::numbers::pi / T);
  const double k = std::numbers::pi / (2 * T);
  const std::vector<double> plus = nearby_zeros(x, 1, T);
  const std::vector<double> minus = nearby_zeros(x, -1, T);
  auto remainder = [&](const double& s) -> double {
    return log_sin_remainder(x + s, k, T, plus) + log_sin_remainder(x - s, k, T, minus);
  };
  QuadratureRule rule{16, 24, 0.0, 1.0};
  const double smooth = integrate_adaptive<double>(remainder, rule, 1e-12, 1e-13);
  double singular = 0;
  for (double z : plus) singular += log_integral(x - z);
  for (double z : minus) singular += log_integral(z - x);
  return -(std::log(4 / (1 - c)) + singular + smooth);
}

std::vector<PotentialSample> potential_profile(double T, const std::vector<cd>& xs) {
  const double ref = potential(T, cd(1, 0));
  std::vector<PotentialSample> out;
  out.reserve(xs.size());
  for (cd x : xs) {
    const double phi = potential(T, x);
    out.push_back({x, phi, phi - ref});
  }
  return out;
}

RungeRegion runge_region_scan(double T, int nx, int ny) {
  RungeRegion region;
  region.T = T;
  region.nx = nx;
  region.ny = ny;
  std::vector<cd> xs;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) xs.emplace_back(-1.5 + 3.0 * i / (nx - 1), -1.0 + 2.0 * j / (ny - 1));
  region.samples = potential_profile(T, xs);
  for (const auto& s : region.samples)
    if (s.indicator > 0) ++region.positive;
  return region;
}

template SpectrumReport spectrum_report<double>(const LinearSystem<double>&, double);
template SpectrumReport spectrum_report<mp_real>(const LinearSystem<mp_real>&, double);

}  // namespace fext
