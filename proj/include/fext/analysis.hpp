#ifndef FEXT_ANALYSIS_HPP
#define FEXT_ANALYSIS_HPP

#include "fext/solver.hpp"

#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace fext {

inline constexpr double kDefaultDelta = 0.1;

struct SpectrumReport {
  std::vector<double> values;
  int nearOne = 0;
  int nearZero = 0;
  int transitionWidth = 0;
  double predictedTransitionIndex = 0;
  double delta = kDefaultDelta;
  std::optional<double> symmetryResidual;
};

template <class S>
SpectrumReport spectrum_report(const LinearSystem<S>& system, double delta = kDefaultDelta);

// Leading-order asymptote of 1 - lambda_k for the prolate matrix of the continuous extension.
double slepian_gap_asymptote(int k, int N, double T);

struct BreakpointReport {
  double N0 = 0;
  double N1 = 0;
  int N2 = 0;
  double N2predicted = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<int, double>> sigmaMin;
};

double breakpoint_N0(double epsilon, double T);

BreakpointReport breakpoints(double T, double epsilon, double gamma, int Nmax, int digits = kDefaultDigits);

int oversampled(int N, double gamma);

struct SolverParams {
  double epsilon = 1e-14;
};

double condition_bound(SystemKind kind, int N, double T, double gamma = 1, const SolverParams& params = {});

struct StabilityReport {
  int N = 0;
  int M = 0;
  double T = 2;
  double epsilon = 0;
  double C1 = 0;
  double C2 = 0;
  double D = 0;
  double B = 0;
  double sigmaMin = 0;
  int keptRank = 0;
  double cHat = std::numeric_limits<double>::quiet_NaN();
  double dHat = std::numeric_limits<double>::quiet_NaN();
  double aHat = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> Kvalues;
};

StabilityReport stability_constants(int N, int M, double T, double epsilon, int digits = kDefaultDigits);

// One factorization shared across the cutoffs.
std::vector<StabilityReport> stability_constants(int N, int M, double T, const std::vector<double>& epsilons,
                                                int digits = kDefaultDigits);

struct GrowthRates {
  double cHat = 0;
  double dHat = 0;
  double aHat = 0;
  std::vector<StabilityReport> samples;
};

std::pair<int, int> default_growth_window(int N2);

GrowthRates growth_rates(double gamma, double T, std::pair<int, int> window, double epsilon,
                         int digits = kDefaultDigits);

using ErrorSeries = std::vector<std::pair<int, double>>;

// rho = exp(-slope) of the least-squares line through (N, log error).
double rate_fit(const ErrorSeries& errors, std::optional<std::pair<int, int>> window = std::nullopt);

struct PotentialSample {
  std::complex<double> x;
  double phi = 0;
  double indicator = 0;
};

double potential(double T, std::complex<double> x);
std::vector<PotentialSample> potential_profile(double T, const std::vector<std::complex<double>>& xs);

struct RungeRegion {
  double T = 2;
  int nx = 61;
  int ny = 41;
  std::vector<PotentialSample> samples;
  int positive = 0;
};

RungeRegion runge_region_scan(double T, int nx = 61, int ny = 41);

}  // namespace fext

#endif
