#include "fext/registry.hpp"

#include <cmath>
#include <stdexcept>

namespace fext {

namespace {

template <class S>
using C = std::complex<S>;

template <class S>
C<S> real_value(const S& v) {
  return {v, S(0)};
}

template <class S>
C<S> runge(const S& x, int k) {
  return real_value<S>(1 / (1 + k * x * x));
}

template <class S>
C<S> pole(const S& x, int a, int b) {
  return real_value<S>(1 / (a - b * x));
}

template <class S>
C<S> cosh40(const S& x) {
  using std::cosh;
  using std::exp;
  // cosh(40x)/cosh(40) without overflow.
  S t = (exp(40 * (x - 1)) + exp(-40 * (x + 1))) / (1 + exp(S(-80)));
  return real_value<S>(1 + t);
}

template <class S>
C<S> absx7(const S& x) {
  using std::abs;
  S a = abs(x);
  S a2 = a * a;
  return real_value<S>(a2 * a2 * a2 * a);
}

template <class S>
C<S> oscil(const S& x) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  S theta = 25 * sqrt(S(5)) * pi_v<S>() * x;
  return {cos(theta), sin(theta)};
}

template <class S>
C<S> expx(const S& x) {
  using std::exp;
  return real_value<S>(exp(x));
}

template <class S>
C<S> linear(const S& x) {
  return real_value<S>(x);
}

template <class F>
TestFunction make(std::string name, std::string formula, Regularity r, std::complex<double> x0, F f) {
  TestFunction t;
  t.name = std::move(name);
  t.formula = std::move(formula);
  t.regularity = r;
  t.singularity = x0;
  t.eval = [f](const double& x) { return f(x); };
  t.eval_mp = [f](const mp_real& x) { return f(x); };
  return t;
}

std::vector<TestFunction> build_registry() {
  using R = Regularity;
  std::vector<TestFunction> v;
  v.push_back(make("runge16", "1/(1+16x^2)", R::Meromorphic, {0, 0.25},
                   [](const auto& x) { return runge(x, 16); }));
  v.push_back(make("runge25", "1/(1+25x^2)", R::Meromorphic, {0, 0.2},
                   [](const auto& x) { return runge(x, 25); }));
  v.push_back(make("runge100", "1/(1+100x^2)", R::Meromorphic, {0, 0.1},
                   [](const auto& x) { return runge(x, 100); }));
  v.push_back(make("pole87", "1/(8-7x)", R::Meromorphic, {8.0 / 7.0, 0},
                   [](const auto& x) { return pole(x, 8, 7); }));
  v.push_back(make("pole101", "1/(101-100x)", R::Meromorphic, {1.01, 0},
                   [](const auto& x) { return pole(x, 101, 100); }));
  v.push_back(make("cosh40", "1+cosh(40x)/cosh(40)", R::Entire, {},
                   [](const auto& x) { return cosh40(x); }));
  v.push_back(make("absx7", "|x|^7", R::Finite, {0, 0},
                   [](const auto& x) { return absx7(x); }));
  v.push_back(make("oscil", "exp(25 sqrt(5) pi i x)", R::Entire, {},
                   [](const auto& x) { return oscil(x); }));
  v.push_back(make("expx", "exp(x)", R::Entire, {}, [](const auto& x) { return expx(x); }));
  v.push_back(make("linear", "x", R::Entire, {}, [](const auto& x) { return linear(x); }));
  return v;
}

}  // namespace

std::optional<AnalyticityInfo> TestFunction::analyticity(double T) const {
  switch (regularity) {
    case Regularity::Entire: return analyticity_rate(std::nullopt, T);
    case Regularity::Meromorphic: return analyticity_rate(singularity, T);
    case Regularity::Finite: return std::nullopt;
  }
  return std::nullopt;
}

const std::vector<TestFunction>& registry() {
  static const std::vector<TestFunction> r = build_registry();
  return r;
}

const TestFunction& lookup(std::string_view name) {
  for (const auto& f : registry())
    if (f.name == name) return f;
  throw std::invalid_argument("unknown function: " + std::string(name));
}

std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const auto& f : registry()) names.push_back(f.name);
  return names;
}

}  // namespace fext
