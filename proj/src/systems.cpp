#include "fext/systems.hpp"

#include <cmath>
#include <stdexcept>

namespace fext {

SystemKind kind_of(const ExtensionConfig& cfg) {
  switch (cfg.grid) {
    case GridKind::Continuous: return SystemKind::Continuous;
    case GridKind::MappedChebyshev: return SystemKind::Discrete;
    case GridKind::Equispaced: return SystemKind::Equispaced;
  }
  return SystemKind::Continuous;
}

std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::Continuous: return "continuous";
    case SystemKind::Discrete: return "discrete";
    case SystemKind::Equispaced: return "equispaced";
  }
  return "unknown";
}

namespace {

// Integral of cos(p x) over [-1,1].
template <class S>
S cos_integral(const S& p) {
  using std::sin;
  if (p == 0) return S(2);
  return 2 * sin(p) / p;
}

template <class S>
S noise_level(const ExtensionConfig& cfg, const CVec<S>& a) {
  using std::abs;
  using std::sqrt;
  S l1(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) l1 += abs(a(i));
  S amp = cfg.basis == Basis::ComplexExponential ? l1 / sqrt(2 * S(cfg.T)) : l1;
  return Eigen::NumTraits<S>::epsilon() * (1 + amp);
}

}  // namespace

template <class S>
CMat<S> continuous_gram(const ExtensionConfig& cfg) {
  const int d = cfg.dimension();
  const S T(cfg.T);
  const S w = pi_v<S>() / T;
  CMat<S> A(d, d);
  if (cfg.basis == Basis::ComplexExponential) {
    Vec<S> band(d);
    band(0) = 1 / T;
    for (int k = 1; k < d; ++k) {
      using std::sin;
      band(k) = sin(k * w) / (k * pi_v<S>());
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = std::complex<S>(band(std::abs(i - j)), S(0));
    return A;
  }
  A.setZero();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const int p = cfg.index(i), q = cfg.index(j);
      if ((p >= 0) != (q >= 0)) continue;
      const int a = p >= 0 ? p : -p;
      const int b = q >= 0 ? q : -q;
      S minus = cos_integral<S>(S(a - b) * w);
      S plus = cos_integral<S>(S(a + b) * w);
      S v = p >= 0 ? (minus + plus) / 2 : (minus - plus) / 2;
      A(i, j) = std::complex<S>(v, S(0));
    }
  }
  return A;
}

template <class S>
Vec<S> extended_domain_gram(const ExtensionConfig& cfg) {
  const int d = cfg.dimension();
  const S T(cfg.T);
  Vec<S> g(d);
  for (int j = 0; j < d; ++j) {
    if (cfg.basis == Basis::ComplexExponential)
      g(j) = S(1);
    else
      g(j) = cfg.index(j) == 0 ? 2 * T : T;
  }
  return g;
}

template <class S>
LinearSystem<S> build_system(const ExtensionConfig& cfg, long max_entries) {
  cfg.validate();
  LinearSystem<S> sys;
  sys.config = cfg;
  sys.kind = kind_of(cfg);
  sys.precision = precision_of<S>();
  const long cols = cfg.dimension();
  long rows = cols;
  if (sys.kind == SystemKind::Equispaced) rows = 2L * cfg.M + 1;
  if (rows * cols > max_entries) throw BudgetError("build_system: matrix size exceeds the configured cap");
  using std::sqrt;
  switch (sys.kind) {
    case SystemKind::Continuous:
      sys.matrix = continuous_gram<S>(cfg);
      break;
    case SystemKind::Discrete: {
      sys.nodes = mapped_chebyshev_nodes<S>(cfg.N, S(cfg.T)).nodes;
      sys.row_scale = sqrt(pi_v<S>() / S(cfg.N + 1));
      sys.matrix.resize(rows, cols);
      for (long i = 0; i < rows; ++i) sys.matrix.row(i) = basis_row(sys.nodes(i), cfg).transpose() * sys.row_scale;
      break;
    }
    case SystemKind::Equispaced: {
      sys.nodes = equispaced_nodes<S>(cfg.M).nodes;
      sys.row_scale = 1 / sqrt(S(cfg.M) + S(0.5));
      sys.matrix.resize(rows, cols);
      for (long i = 0; i < rows; ++i) sys.matrix.row(i) = basis_row(sys.nodes(i), cfg).transpose() * sys.row_scale;
      break;
    }
  }
  return sys;
}

template <class S>
CMat<S> weighted_gram(int N, const S& T) {
  auto sys = build_system<S>(ExtensionConfig::discrete(N, to_double(T)));
  return sys.matrix.adjoint() * sys.matrix;
}

template <class S>
GramMatrices<S> gram_matrices(const ExtensionConfig& cfg) {
  GramMatrices<S> g;
  g.A = continuous_gram<S>(cfg);
  if (cfg.basis == Basis::SymmetricTrig) g.AW = weighted_gram<S>(cfg.N, S(cfg.T));
  g.GT = extended_domain_gram<S>(cfg);
  return g;
}

// Basis rows carry phases up to pi N / T, so argument rounding scales the evaluation noise.
inline QuadratureRule basis_rule(const ExtensionConfig& cfg) {
  QuadratureRule rule = QuadratureRule::for_degree(cfg.N);
  rule.noise = 64 * (1 + cfg.N * (1 + pi_v<double>() / cfg.T));
  return rule;
}

template <class S>
CVec<S> continuous_rhs(const Function<S>& f, const ExtensionConfig& cfg, const QuadratureRule& rule) {
  auto integrand = [&](const S& x) -> CVec<S> { return basis_row(x, cfg).conjugate() * f(x); };
  return integrate_adaptive<S>(integrand, rule);
}

template <class S>
CVec<S> sampled_rhs(const Function<S>& f, const LinearSystem<S>& system) {
  if (system.kind == SystemKind::Continuous) throw std::invalid_argument("sampled_rhs: continuous systems use quadrature");
  CVec<S> b(system.nodes.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = f(system.nodes(i)) * system.row_scale;
  return b;
}

template <class S>
void attach_rhs(LinearSystem<S>& system, const Function<S>& f) {
  if (system.kind == SystemKind::Continuous)
    system.rhs = continuous_rhs<S>(f, system.config, basis_rule(system.config));
  else
    system.rhs = sampled_rhs<S>(f, system);
}

template <class S>
CMat<S> l2_factor(const ExtensionConfig& cfg) {
  int panels = std::max(8, (cfg.N + 1) / 2);
  if constexpr (is_extended<S>::value) panels *= (static_cast<int>(mp_real::default_precision()) + 9) / 10;
  const auto& g = gauss_legendre<S>(24);
  const S h = S(2) / panels;
  CMat<S> F(24 * panels, cfg.dimension());
  using std::sqrt;
  for (int p = 0; p < panels; ++p) {
    const S mid = -1 + (p + S(0.5)) * h;
    for (int j = 0; j < 24; ++j) {
      const S x = mid + h / 2 * g.nodes(j);
      F.row(24 * p + j) = basis_row(x, cfg).transpose() * sqrt(g.weights(j) * h / 2);
    }
  }
  return F;
}

template <class S>
CVec<S> evaluate_coefficients(const ExtensionConfig& cfg, const CVec<S>& a, const Vec<S>& points) {
  if (a.size() != cfg.dimension()) throw std::invalid_argument("evaluate: coefficient size mismatch");
  CVec<S> out(points.size());
  for (Eigen::Index i = 0; i < points.size(); ++i) out(i) = basis_row(points(i), cfg).cwiseProduct(a).sum();
  return out;
}

template <class S>
S l2_norm(const Function<S>& f, const QuadratureRule& rule) {
  using std::norm;
  using std::sqrt;
  auto integrand = [&](const S& x) -> S { return norm(f(x)); };
  return sqrt(integrate_adaptive<S>(integrand, rule));
}

template <class S>
S l2_norm_coefficients(const ExtensionConfig& cfg, const CVec<S>& a) {
  using std::sqrt;
  if constexpr (is_extended<S>::value) {
    S q = (a.adjoint() * continuous_gram<S>(cfg) * a)(0, 0).real();
    return q > 0 ? sqrt(q) : S(0);
  } else {
    return (l2_factor<S>(cfg) * a).norm();
  }
}

template <class S>
S l2_distance(const Function<S>& f, const ExtensionConfig& cfg, const CVec<S>& a) {
  using std::abs;
  using std::norm;
  using std::sqrt;
  auto integrand = [&](const S& x) -> S {
    return norm(f(x) - basis_row(x, cfg).cwiseProduct(a).sum());
  };
  const QuadratureRule rule = QuadratureRule::for_degree(cfg.N);
  const S noise = 16 * noise_level(cfg, a);
  const S estimate = sqrt(abs(integrate<S>(integrand, rule)));
  const S floor = 2 * noise * (2 * estimate + noise);
  const S value = integrate_adaptive<S>(integrand, rule, detail::default_tolerance<S>(), floor);
  return value > 0 ? sqrt(value) : S(0);
}

template <class S>
S w_norm(const ExtensionConfig& cfg, const CVec<S>& a) {
  if (cfg.basis != Basis::SymmetricTrig) throw std::invalid_argument("w_norm: defined for the discrete extension space");
  return (build_system<S>(cfg).matrix * a).norm();
}

template <class S>
S extended_domain_norm(const ExtensionConfig& cfg, const CVec<S>& a) {
  using std::sqrt;
  Vec<S> g = extended_domain_gram<S>(cfg);
  S acc(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += g(i) * std::norm(a(i));
  return sqrt(acc);
}

Vec<double> uniform_grid(int points, double a, double b) {
  if (points < 2) throw std::invalid_argument("uniform_grid: need at least two points");
  return Vec<double>::LinSpaced(points, a, b);
}

double sup_norm(const Function<double>& f, int points) {
  Vec<double> x = uniform_grid(points);
  double m = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) m = std::max(m, std::abs(f(x(i))));
  return m;
}

double sup_distance(const Function<double>& f, const ExtensionConfig& cfg, const CVec<double>& a, int points) {
  Vec<double> x = uniform_grid(points);
  CVec<double> v = evaluate_coefficients(cfg, a, x);
  double m = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) m = std::max(m, std::abs(f(x(i)) - v(i)));
  return m;
}

template <class S>
S norm(const Function<S>& f, NormKind kind, int points) {
  switch (kind) {
    case NormKind::L2: return l2_norm<S>(f);
    case NormKind::SupGrid: {
      using std::abs;
      Vec<double> x = uniform_grid(points);
      S m(0);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        S v = abs(f(S(x(i))));
        if (v > m) m = v;
      }
      return m;
    }
    case NormKind::W: throw std::invalid_argument("norm: the W-norm is only defined on the extension space");
    case NormKind::ExtendedDomain: throw std::invalid_argument("norm: the extended-domain norm needs coefficients");
  }
  return S(0);
}

template <class S>
S norm(const ExtensionConfig& cfg, const CVec<S>& a, NormKind kind, int points) {
  switch (kind) {
    case NormKind::L2: return l2_norm_coefficients<S>(cfg, a);
    case NormKind::SupGrid: {
      using std::abs;
      Vec<double> xd = uniform_grid(points);
      Vec<S> x(xd.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = S(xd(i));
      CVec<S> v = evaluate_coefficients<S>(cfg, a, x);
      S m(0);
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        S t = abs(v(i));
        if (t > m) m = t;
      }
      return m;
    }
    case NormKind::W: return w_norm<S>(cfg, a);
    case NormKind::ExtendedDomain: return extended_domain_norm<S>(cfg, a);
  }
  return S(0);
}

std::vector<double> gram_limit_check(int N, const std::vector<int>& Ms, double T) {
  const CMat<double> A = continuous_gram<double>(ExtensionConfig::continuous(N, T));
  std::vector<double> out;
  for (int M : Ms) {
    if (M < N) throw DomainError("gram_limit_check: M must be at least N");
    auto sys = build_system<double>(ExtensionConfig::equispaced(N, M, T));
    CMat<double> B = sys.matrix.adjoint() * sys.matrix;
    out.push_back((B - A).cwiseAbs().maxCoeff());
  }
  return out;
}

#define FEXT_INSTANTIATE(S)                                                                            \
  template CMat<S> continuous_gram<S>(const ExtensionConfig&);                                         \
  template Vec<S> extended_domain_gram<S>(const ExtensionConfig&);                                     \
  template LinearSystem<S> build_system<S>(const ExtensionConfig&, long);                              \
  template CMat<S> weighted_gram<S>(int, const S&);                                                    \
  template GramMatrices<S> gram_matrices<S>(const ExtensionConfig&);                                   \
  template CVec<S> continuous_rhs<S>(const Function<S>&, const ExtensionConfig&, const QuadratureRule&); \
  template CVec<S> sampled_rhs<S>(const Function<S>&, const LinearSystem<S>&);                         \
  template void attach_rhs<S>(LinearSystem<S>&, const Function<S>&);                                   \
  template CMat<S> l2_factor<S>(const ExtensionConfig&);                                               \
  template CVec<S> evaluate_coefficients<S>(const ExtensionConfig&, const CVec<S>&, const Vec<S>&);    \
  template S l2_norm<S>(const Function<S>&, const QuadratureRule&);                                    \
  template S l2_norm_coefficients<S>(const ExtensionConfig&, const CVec<S>&);                          \
  template S l2_distance<S>(const Function<S>&, const ExtensionConfig&, const CVec<S>&);               \
  template S w_norm<S>(const ExtensionConfig&, const CVec<S>&);                                        \
  template S extended_domain_norm<S>(const ExtensionConfig&, const CVec<S>&);                          \
  template S norm<S>(const Function<S>&, NormKind, int);                                               \
  template S norm<S>(const ExtensionConfig&, const CVec<S>&, NormKind, int);

FEXT_INSTANTIATE(double)
FEXT_INSTANTIATE(mp_real)

}  // namespace fext
