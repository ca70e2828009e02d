#ifndef FEXT_CORE_HPP
#define FEXT_CORE_HPP

#include "fext/precision.hpp"

#include <optional>
#include <string>

namespace fext {

enum class Basis { ComplexExponential, SymmetricTrig };
enum class GridKind { Continuous, MappedChebyshev, Equispaced };

std::string to_string(Basis b);
std::string to_string(GridKind g);

struct ExtensionConfig {
  double T = 2.0;
  int N = 1;
  Basis basis = Basis::ComplexExponential;
  GridKind grid = GridKind::Continuous;
  int M = 0;

  static ExtensionConfig continuous(int N, double T);
  static ExtensionConfig discrete(int N, double T);
  static ExtensionConfig equispaced(int N, int M, double T);

  void validate() const;
  int dimension() const { return basis == Basis::ComplexExponential ? 2 * N + 1 : 2 * N + 2; }
  int min_index() const { return basis == Basis::ComplexExponential ? -N : -N - 1; }
  int max_index() const { return N; }
  int column(int index) const { return index - min_index(); }
  int index(int column) const { return column + min_index(); }
};

struct MappedDomain {
  double T;
  double cT;
  double mT;
  double ET;

  static MappedDomain of(double T);
};

template <class S>
S fe_constant(const S& T) {
  using std::tan;
  if (!(T > 1)) throw DomainError("fe_constant: T must exceed 1");
  S t = 1 / tan(pi_v<S>() / (4 * T));
  return t * t;
}

template <class S>
S cos_pi_over(const S& T) {
  using std::cos;
  return cos(pi_v<S>() / T);
}

template <class S>
S map_to_z(const S& x, const S& T) {
  using std::cos;
  S c = cos_pi_over(T);
  return 2 * (cos(pi_v<S>() * x / T) - c) / (1 - c) - 1;
}

template <class S>
std::complex<S> map_to_z(const std::complex<S>& x, const S& T) {
  using std::cos;
  S c = cos_pi_over(T);
  std::complex<S> arg = x * (pi_v<S>() / T);
  return (cos(arg) - c) * (2 / (1 - c)) - S(1);
}

template <class S>
S image_of_T(const S& T) {
  using std::sin;
  S s = sin(pi_v<S>() / (2 * T));
  return 1 - 2 / (s * s);
}

template <class S>
S joukowski_index(const std::complex<S>& z) {
  using std::abs;
  using std::sqrt;
  if (z.imag() == 0 && z.real() > -1 && z.real() < 1)
    throw DomainError("joukowski_index: argument on the branch cut (-1,1)");
  std::complex<S> r = sqrt(z * z - S(1));
  S a = abs(z + r);
  S b = abs(z - r);
  return a > b ? a : b;
}

template <class S>
S joukowski_index(const S& z) {
  return joukowski_index(std::complex<S>(z, S(0)));
}

struct AnalyticityInfo {
  std::optional<std::complex<double>> singularity;
  double rhoStar = 0;
  double expectedRate = 0;
  double d_f = 0;

  bool entire() const { return !singularity.has_value(); }
};

AnalyticityInfo analyticity_rate(std::optional<std::complex<double>> x0, double T);

enum class NodeKind { MappedChebyshev, Equispaced };

template <class S>
struct NodeSet {
  NodeKind kind;
  Vec<S> nodes;
};

template <class S>
NodeSet<S> mapped_chebyshev_nodes(int N, const S& T) {
  using std::acos;
  using std::cos;
  if (N < 0) throw DomainError("mapped_chebyshev_nodes: N must be non-negative");
  const S pi = pi_v<S>();
  const S c = cos_pi_over(T);
  Vec<S> x(2 * N + 2);
  for (int n = 0; n <= N; ++n) {
    S t = (1 - c) * cos((2 * n + 1) * pi / (2 * N + 2)) / 2 + (1 + c) / 2;
    if (t > 1) t = 1;
    S v = T / pi * acos(t);
    x(N + 1 + n) = v;
    x(N - n) = -v;
  }
  return {NodeKind::MappedChebyshev, x};
}

template <class S>
NodeSet<S> equispaced_nodes(int M) {
  if (M < 1) throw DomainError("equispaced_nodes: M must be positive");
  Vec<S> x(2 * M + 1);
  for (int n = -M; n <= M; ++n) x(n + M) = S(n) / S(M);
  return {NodeKind::Equispaced, x};
}

double adaptive_T(int N, double eps_tol);

template <class S>
std::complex<S> basis_eval(int index, const S& x, const ExtensionConfig& cfg) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (index < cfg.min_index() || index > cfg.max_index())
    throw DomainError("basis_eval: index out of range");
  const S T(cfg.T);
  const S pi = pi_v<S>();
  if (cfg.basis == Basis::ComplexExponential) {
    S theta = index * pi * x / T;
    return std::complex<S>(cos(theta), sin(theta)) / sqrt(2 * T);
  }
  if (index >= 0) return {cos(index * pi * x / T), S(0)};
  return {sin(-index * pi * x / T), S(0)};
}

// All basis functions at x, ordered by column.
template <class S>
CVec<S> basis_row(const S& x, const ExtensionConfig& cfg) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const S T(cfg.T);
  const S pi = pi_v<S>();
  const int N = cfg.N;
  CVec<S> row(cfg.dimension());
  if constexpr (is_extended<S>::value) {
    const std::complex<S> w(cos(pi * x / T), sin(pi * x / T));
    std::complex<S> p(S(1), S(0));
    if (cfg.basis == Basis::ComplexExponential) {
      const S scale = 1 / sqrt(2 * T);
      row(N) = std::complex<S>(scale, S(0));
      for (int n = 1; n <= N; ++n) {
        p *= w;
        row(N + n) = p * scale;
        row(N - n) = std::conj(p) * scale;
      }
    } else {
      row(N + 1) = std::complex<S>(S(1), S(0));
      for (int n = 1; n <= N + 1; ++n) {
        p *= w;
        if (n <= N) row(N + 1 + n) = std::complex<S>(p.real(), S(0));
        row(N + 1 - n) = std::complex<S>(p.imag(), S(0));
      }
    }
  } else {
    for (int j = 0; j < cfg.dimension(); ++j) row(j) = basis_eval(cfg.index(j), x, cfg);
  }
  return row;
}

double node_density(double z, double T);

}  // namespace fext

#endif
