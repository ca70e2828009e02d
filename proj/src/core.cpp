#include "fext/core.hpp"

#include <cmath>
#include <limits>

namespace fext {

std::string to_string(Basis b) {
  return b == Basis::ComplexExponential ? "complex-exponential" : "symmetric-trig";
}

std::string to_string(GridKind g) {
  switch (g) {
    case GridKind::Continuous: return "continuous";
    case GridKind::MappedChebyshev: return "discrete";
    case GridKind::Equispaced: return "equispaced";
  }
  return "unknown";
}

ExtensionConfig ExtensionConfig::continuous(int N, double T) {
  ExtensionConfig c{T, N, Basis::ComplexExponential, GridKind::Continuous, 0};
  c.validate();
  return c;
}

ExtensionConfig ExtensionConfig::discrete(int N, double T) {
  ExtensionConfig c{T, N, Basis::SymmetricTrig, GridKind::MappedChebyshev, 0};
  c.validate();
  return c;
}

ExtensionConfig ExtensionConfig::equispaced(int N, int M, double T) {
  ExtensionConfig c{T, N, Basis::ComplexExponential, GridKind::Equispaced, M};
  c.validate();
  return c;
}

void ExtensionConfig::validate() const {
  if (!(T > 1)) throw DomainError("ExtensionConfig: T must exceed 1");
  if (N < 0) throw DomainError("ExtensionConfig: N must be non-negative");
  if (grid == GridKind::Equispaced && M < std::max(N, 1))
    throw DomainError("ExtensionConfig: equispaced grids need M >= N");
  if (grid == GridKind::MappedChebyshev && basis != Basis::SymmetricTrig)
    throw DomainError("ExtensionConfig: mapped Chebyshev grids use the symmetric trig basis");
}

MappedDomain MappedDomain::of(double T) {
  return {T, cos_pi_over(T), image_of_T(T), fe_constant(T)};
}

AnalyticityInfo analyticity_rate(std::optional<std::complex<double>> x0, double T) {
  AnalyticityInfo info;
  const double E = fe_constant(T);
  info.singularity = x0;
  if (!x0) {
    info.rhoStar = std::numeric_limits<double>::infinity();
  } else {
    if (x0->imag() == 0 && std::abs(x0->real()) <= 1)
      throw DomainError("analyticity_rate: singularity lies on [-1,1]");
    info.rhoStar = joukowski_index(map_to_z(*x0, T));
  }
  info.expectedRate = std::min(info.rhoStar, E);
  info.d_f = std::log(info.expectedRate) / std::log(E);
  return info;
}

double adaptive_T(int N, double eps_tol) {
  if (N < 1) throw DomainError("adaptive_T: N must be positive");
  if (!(eps_tol > 0 && eps_tol < 1)) throw DomainError("adaptive_T: tolerance must lie in (0,1)");
  return (std::numbers::pi / 4) / std::atan(std::pow(eps_tol, 1.0 / (2.0 * N)));
}

double node_density(double z, double T) {
  if (!(T > 1)) throw DomainError("node_density: T must exceed 1");
  if (!(z >= -1 && z < 1)) throw DomainError("node_density: z must lie in [-1,1)");
  const double m = image_of_T(T);
  return T / (std::numbers::pi * std::sqrt((1 - z) * (z - m)));
}

}  // namespace fext
