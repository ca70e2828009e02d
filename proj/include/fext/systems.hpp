#ifndef FEXT_SYSTEMS_HPP
#define FEXT_SYSTEMS_HPP

#include "fext/core.hpp"
#include "fext/quadrature.hpp"
#include "fext/registry.hpp"

#include <optional>
#include <vector>

namespace fext {

enum class SystemKind { Continuous, Discrete, Equispaced };

SystemKind kind_of(const ExtensionConfig& cfg);
std::string to_string(SystemKind k);

inline constexpr long kMaxSystemEntries = 1L << 24;

template <class S>
struct LinearSystem {
  CMat<S> matrix;
  std::optional<CVec<S>> rhs;
  SystemKind kind = SystemKind::Continuous;
  ExtensionConfig config;
  PrecisionContext precision;
  Vec<S> nodes;
  S row_scale = S(1);
};

template <class S>
struct GramMatrices {
  CMat<S> A;
  CMat<S> AW;
  Vec<S> GT;
};

enum class NormKind { L2, SupGrid, W, ExtendedDomain };

inline constexpr int kDefaultSupGrid = 10001;

template <class S>
LinearSystem<S> build_system(const ExtensionConfig& cfg, long max_entries = kMaxSystemEntries);

// Closed-form Gram matrix on [-1,1] in the configured basis.
template <class S>
CMat<S> continuous_gram(const ExtensionConfig& cfg);

// Diagonal of the Gram matrix on [-T,T].
template <class S>
Vec<S> extended_domain_gram(const ExtensionConfig& cfg);

template <class S>
CMat<S> weighted_gram(int N, const S& T);

template <class S>
GramMatrices<S> gram_matrices(const ExtensionConfig& cfg);

template <class S>
CVec<S> continuous_rhs(const Function<S>& f, const ExtensionConfig& cfg, const QuadratureRule& rule);

template <class S>
CVec<S> sampled_rhs(const Function<S>& f, const LinearSystem<S>& system);

template <class S>
void attach_rhs(LinearSystem<S>& system, const Function<S>& f);

// Matrix F with ||F a|| equal to the L2[-1,1] norm of the expansion with coefficients a.
template <class S>
CMat<S> l2_factor(const ExtensionConfig& cfg);

template <class S>
CVec<S> evaluate_coefficients(const ExtensionConfig& cfg, const CVec<S>& a, const Vec<S>& points);

template <class S>
S l2_norm(const Function<S>& f, const QuadratureRule& rule = QuadratureRule{});

template <class S>
S l2_norm_coefficients(const ExtensionConfig& cfg, const CVec<S>& a);

template <class S>
S l2_distance(const Function<S>& f, const ExtensionConfig& cfg, const CVec<S>& a);

template <class S>
S w_norm(const ExtensionConfig& cfg, const CVec<S>& a);

template <class S>
S extended_domain_norm(const ExtensionConfig& cfg, const CVec<S>& a);

Vec<double> uniform_grid(int points, double a = -1, double b = 1);

double sup_norm(const Function<double>& f, int points = kDefaultSupGrid);
double sup_distance(const Function<double>& f, const ExtensionConfig& cfg, const CVec<double>& a,
                    int points = kDefaultSupGrid);

// Norm of a raw function; W and extended-domain norms are rejected.
template <class S>
S norm(const Function<S>& f, NormKind kind, int points = kDefaultSupGrid);

// Norm of an element of the extension space given by its coefficients.
template <class S>
S norm(const ExtensionConfig& cfg, const CVec<S>& a, NormKind kind, int points = kDefaultSupGrid);

std::vector<double> gram_limit_check(int N, const std::vector<int>& Ms, double T);

}  // namespace fext

#endif
