#ifndef FEXT_PRECISION_HPP
#define FEXT_PRECISION_HPP

#include <boost/multiprecision/mpfr.hpp>
#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fext {

using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

}  // namespace fext

namespace Eigen {

template <>
struct NumTraits<fext::mp_real> : GenericNumTraits<fext::mp_real> {
  using Real = fext::mp_real;
  using NonInteger = fext::mp_real;
  using Nested = fext::mp_real;
  using Literal = fext::mp_real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    ReadCost = HugeCost,
    AddCost = HugeCost,
    MulCost = HugeCost,
    IsSigned = 1,
    RequireInitialization = 1
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return epsilon() * 1000; }
  static Real highest() { return (std::numeric_limits<Real>::max)(); }
  static Real lowest() { return -(std::numeric_limits<Real>::max)(); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
  static int digits10() { return std::numeric_limits<Real>::digits10; }
};

}  // namespace Eigen

#include <Eigen/Dense>

namespace fext {

template <class S> using Cplx = std::complex<S>;
template <class S> using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S> using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S> using CVec = Eigen::Matrix<std::complex<S>, Eigen::Dynamic, 1>;
template <class S> using CMat = Eigen::Matrix<std::complex<S>, Eigen::Dynamic, Eigen::Dynamic>;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultDigits = 100;

struct PrecisionContext {
  enum class Mode { Double, Extended };
  Mode mode = Mode::Double;
  int digits = 16;

  static PrecisionContext standard() { return {Mode::Double, 16}; }
  static PrecisionContext extended(int digits = kDefaultDigits) {
    if (digits < 30) throw DomainError("extended precision needs at least 30 digits");
    return {Mode::Extended, digits};
  }
  bool is_extended() const { return mode == Mode::Extended; }
};

// Sets the working precision of mp_real for the lifetime of the object.
class DigitsScope {
 public:
  explicit DigitsScope(int digits) : saved_(mp_real::default_precision()) {
    mp_real::default_precision(static_cast<unsigned>(digits));
  }
  ~DigitsScope() { mp_real::default_precision(saved_); }
  DigitsScope(const DigitsScope&) = delete;
  DigitsScope& operator=(const DigitsScope&) = delete;

 private:
  unsigned saved_;
};

template <class S> struct is_extended : std::false_type {};
template <> struct is_extended<mp_real> : std::true_type {};

template <class S>
PrecisionContext precision_of() {
  if constexpr (is_extended<S>::value)
    return {PrecisionContext::Mode::Extended, static_cast<int>(mp_real::default_precision())};
  else
    return PrecisionContext::standard();
}

template <class S>
S pi_v() {
  if constexpr (is_extended<S>::value) {
    mp_real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
  } else {
    return std::numbers::pi_v<S>;
  }
}

inline double to_double(double x) { return x; }
inline double to_double(const mp_real& x) { return x.convert_to<double>(); }
inline std::complex<double> to_double(const std::complex<double>& z) { return z; }
inline std::complex<double> to_double(const std::complex<mp_real>& z) {
  return {to_double(z.real()), to_double(z.imag())};
}

template <class S>
Vec<double> to_double_vec(const Vec<S>& v) {
  Vec<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_double(v(i));
  return out;
}

template <class S>
CVec<double> to_double_vec(const CVec<S>& v) {
  CVec<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_double(v(i));
  return out;
}

}  // namespace fext

#endif
