#ifndef FEXT_QUADRATURE_HPP
#define FEXT_QUADRATURE_HPP

#include "fext/precision.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <type_traits>
#include <mutex>
#include <utility>

namespace fext {

template <class S>
struct GaussLegendre {
  Vec<S> nodes;
  Vec<S> weights;
};

template <class S>
GaussLegendre<S> compute_gauss_legendre(int order) {
  using std::abs;
  using std::cos;
  GaussLegendre<S> g{Vec<S>(order), Vec<S>(order)};
  const S pi = pi_v<S>();
  const S tol = Eigen::NumTraits<S>::epsilon() * 4;
  for (int i = 0; i < (order + 1) / 2; ++i) {
    S x = cos(pi * (S(i) + S(0.75)) / (S(order) + S(0.5)));
    S dp(0);
    for (int it = 0; it < 100; ++it) {
      S p0(1), p1 = x;
      for (int k = 2; k <= order; ++k) {
        S p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1);
      S dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= tol) break;
    }
    S p0(1), p1 = x;
    for (int k = 2; k <= order; ++k) {
      S p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1);
    S w = 2 / ((1 - x * x) * dp * dp);
    g.nodes(i) = -x;
    g.nodes(order - 1 - i) = x;
    g.weights(i) = w;
    g.weights(order - 1 - i) = w;
  }
  if (order % 2 == 1) g.nodes(order / 2) = S(0);
  return g;
}

// Cached rule for the current working precision.
template <class S>
const GaussLegendre<S>& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, unsigned>, GaussLegendre<S>> cache;
  unsigned bits = 53;
  if constexpr (is_extended<S>::value) bits = mp_real::default_precision();
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(order, bits);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compute_gauss_legendre<S>(order)).first;
  return it->second;
}

struct QuadratureRule {
  int panels = 8;
  int order = 24;
  double a = -1;
  double b = 1;
  // Relative evaluation noise of the integrand, in units of machine epsilon.
  double noise = 64;

  static QuadratureRule for_degree(int N, double a = -1, double b = 1) {
    return {std::max(8, (N + 1) / 2), 24, a, b};
  }
};

namespace detail {

template <class S>
S sup_abs(const std::complex<S>& z) {
  using std::abs;
  return abs(z);
}

template <class S>
  requires(std::is_floating_point_v<S> || is_extended<S>::value)
S sup_abs(const S& z) {
  using std::abs;
  return abs(z);
}

template <class Derived>
auto sup_abs(const Eigen::MatrixBase<Derived>& v) {
  using R = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  R m(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    using std::abs;
    R a = abs(v(i));
    if (a > m) m = a;
  }
  return m;
}

template <class S>
S default_tolerance() {
  if constexpr (is_extended<S>::value)
    return pow(S(10), -S(static_cast<int>(mp_real::default_precision()) - 6));
  else
    return S(2e-15);
}

// Extended precision raises the order with the digit count so panels stay wide.
template <class S>
int working_order(int order) {
  if constexpr (is_extended<S>::value) return std::max(order, static_cast<int>(mp_real::default_precision()));
  return order;
}

// Panel integral together with the integral of the magnitude (the roundoff scale).
template <class S, class F>
auto panel_with_mass(F& f, const GaussLegendre<S>& g, const S& a, const S& b) {
  const S half = (b - a) / 2;
  const S mid = (a + b) / 2;
  using R = decltype(f(mid));
  R v = f(mid + half * g.nodes(0));
  S mass = sup_abs(v) * g.weights(0) * half;
  R acc = v * (g.weights(0) * half);
  for (Eigen::Index j = 1; j < g.nodes.size(); ++j) {
    v = f(mid + half * g.nodes(j));
    mass += sup_abs(v) * g.weights(j) * half;
    acc += v * (g.weights(j) * half);
  }
  return std::make_pair(acc, mass);
}

template <class S, class F>
auto panel(F& f, const GaussLegendre<S>& g, const S& a, const S& b) {
  return panel_with_mass<S>(f, g, a, b).first;
}

template <class S, class F, class R>
R bisect(F& f, const GaussLegendre<S>& g, const S& a, const S& b, const R& whole, const S& density, const S& noise,
         int depth, long& budget) {
  budget -= 2;
  const S mid = (a + b) / 2;
  auto [left, left_mass] = panel_with_mass<S>(f, g, a, mid);
  auto [right, right_mass] = panel_with_mass<S>(f, g, mid, b);
  R split = left + right;
  R diff = split - whole;
  S err = sup_abs(diff);
  if (err <= density * (b - a) || err <= noise * (left_mass + right_mass)) return split;
  if (depth <= 0 || budget <= 0) throw ConvergenceError("quadrature: refinement disagreement beyond tolerance");
  return bisect<S>(f, g, a, mid, left, density, noise, depth - 1, budget) +
         bisect<S>(f, g, mid, b, right, density, noise, depth - 1, budget);
}

}  // namespace detail

// Composite Gauss-Legendre sum on a fixed partition.
template <class S, class F>
auto integrate(F&& f, const QuadratureRule& rule) {
  const auto& g = gauss_legendre<S>(detail::working_order<S>(rule.order));
  const S a(rule.a), b(rule.b);
  const S h = (b - a) / rule.panels;
  auto acc = detail::panel<S>(f, g, a, a + h);
  for (int p = 1; p < rule.panels; ++p) acc += detail::panel<S>(f, g, a + p * h, a + (p + 1) * h);
  return acc;
}

// Starts from the rule's partition and bisects panels whose refinement disagrees.
template <class S, class F>
auto integrate_adaptive(F&& f, const QuadratureRule& rule, S rel_tol = detail::default_tolerance<S>(),
                        S abs_tol = S(0), int max_depth = 40) {
  const auto& g = gauss_legendre<S>(detail::working_order<S>(rule.order));
  const S a(rule.a), b(rule.b);
  const S h = (b - a) / rule.panels;
  using R = decltype(detail::panel<S>(f, g, a, b));
  std::vector<R> coarse;
  coarse.reserve(rule.panels);
  S mass(0);
  for (int p = 0; p < rule.panels; ++p) {
    auto [v, m] = detail::panel_with_mass<S>(f, g, a + p * h, a + (p + 1) * h);
    coarse.push_back(v);
    mass += m;
  }
  R total = coarse[0];
  for (int p = 1; p < rule.panels; ++p) total += coarse[p];
  S scale = detail::sup_abs(total);
  S tol = rel_tol * (scale > 0 ? scale : S(1));
  if (abs_tol > tol) tol = abs_tol;
  const S noise = S(rule.noise) * Eigen::NumTraits<S>::epsilon();
  const S floor = noise * mass;
  if (floor > tol) tol = floor;
  S density = tol / (b - a);
  long budget = 200000;
  R refined = detail::bisect<S>(f, g, a, a + h, coarse[0], density, noise, max_depth, budget);
  for (int p = 1; p < rule.panels; ++p)
    refined += detail::bisect<S>(f, g, a + p * h, a + (p + 1) * h, coarse[p], density, noise, max_depth, budget);
  return refined;
}

}  // namespace fext

#endif
