#include "fext/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fext {

namespace {

template <class S>
bool all_finite(const Vec<S>& v) {
  using std::isfinite;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!isfinite(v(i))) return false;
  return true;
}

// Divide-and-conquer SVD occasionally loses orthogonality; such results are rejected and recomputed by Jacobi.
template <class M, class Solver>
bool accurate(const M& A, const Solver& svd) {
  using Real = typename Eigen::NumTraits<typename M::Scalar>::Real;
  const auto& s = svd.singularValues();
  if (s.size() == 0) return true;
  const Real tol = 1000 * Eigen::NumTraits<Real>::epsilon();
  const M& U = svd.matrixU();
  const M& V = svd.matrixV();
  const Eigen::Index k = s.size();
  if ((U.adjoint() * U - M::Identity(k, k)).cwiseAbs().maxCoeff() > tol) return false;
  if ((V.adjoint() * V - M::Identity(k, k)).cwiseAbs().maxCoeff() > tol) return false;
  const M R = U * s.template cast<typename M::Scalar>().asDiagonal() * V.adjoint();
  return (R - A).cwiseAbs().maxCoeff() <= tol * s(0);
}

template <class S>
SvdFactorization<S> from_real(const Mat<S>& U, const Vec<S>& s, const Mat<S>& V) {
  SvdFactorization<S> f;
  f.U = U.template cast<std::complex<S>>();
  f.S = s;
  f.V = V.template cast<std::complex<S>>();
  return f;
}

template <class S>
SvdFactorization<S> real_svd(const Mat<S>& R) {
  SvdFactorization<S> out;
  Eigen::BDCSVD<Mat<S>> solver(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() == Eigen::Success && accurate<Mat<S>>(R, solver)) {
    out = from_real<S>(solver.matrixU(), solver.singularValues(), solver.matrixV());
  } else {
    Eigen::JacobiSVD<Mat<S>> fallback(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out = from_real<S>(fallback.matrixU(), fallback.singularValues(), fallback.matrixV());
  }
  if (!all_finite(out.S)) throw ConvergenceError("svd: non-finite singular values");
  return out;
}

template <class S>
SvdFactorization<S> complex_svd(const CMat<S>& C) {
  SvdFactorization<S> out;
  Eigen::BDCSVD<CMat<S>> solver(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() == Eigen::Success && accurate<CMat<S>>(C, solver)) {
    out = {solver.matrixU(), solver.singularValues(), solver.matrixV()};
  } else {
    Eigen::JacobiSVD<CMat<S>> fallback(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out = {fallback.matrixU(), fallback.singularValues(), fallback.matrixV()};
  }
  if (!all_finite(out.S)) throw ConvergenceError("svd: non-finite singular values");
  return out;
}

// Symmetric eigendecomposition rearranged as an SVD.
template <class S>
SvdFactorization<S> symmetric_svd(const Mat<S>& R) {
  using std::abs;
  Eigen::SelfAdjointEigenSolver<Mat<S>> solver(R);
  if (solver.info() != Eigen::Success) throw ConvergenceError("svd: symmetric eigensolver did not converge");
  const Vec<S>& lambda = solver.eigenvalues();
  const Mat<S>& W = solver.eigenvectors();
  const Eigen::Index n = lambda.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return abs(lambda(a)) > abs(lambda(b)); });
  Mat<S> U(n, n), V(n, n);
  Vec<S> s(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index j = order[k];
    s(k) = abs(lambda(j));
    V.col(k) = W.col(j);
    U.col(k) = lambda(j) < 0 ? Vec<S>(-W.col(j)) : Vec<S>(W.col(j));
  }
  if (!all_finite(s)) throw ConvergenceError("svd: non-finite eigenvalues");
  return from_real<S>(U, s, V);
}

template <class S>
bool is_real(const CMat<S>& C) {
  for (Eigen::Index j = 0; j < C.cols(); ++j)
    for (Eigen::Index i = 0; i < C.rows(); ++i)
      if (C(i, j).imag() != 0) return false;
  return true;
}

template <class S>
Mat<S> real_part(const CMat<S>& C) {
  Mat<S> R(C.rows(), C.cols());
  for (Eigen::Index j = 0; j < C.cols(); ++j)
    for (Eigen::Index i = 0; i < C.rows(); ++i) R(i, j) = C(i, j).real();
  return R;
}

// Columns of C expressed in the real cosine/sine basis: C Q with Q unitary.
template <class S>
CMat<S> to_trig_columns(const CMat<S>& C, int N) {
  using std::sqrt;
  const S r = 1 / sqrt(S(2));
  const std::complex<S> mi(S(0), S(-1));
  CMat<S> R(C.rows(), C.cols());
  R.col(0) = C.col(N);
  for (int k = 1; k <= N; ++k) {
    R.col(2 * k - 1) = (C.col(N + k) + C.col(N - k)) * r;
    R.col(2 * k) = (C.col(N + k) - C.col(N - k)) * (mi * r);
  }
  return R;
}

// Inverse map of coefficient vectors: V = Q Vt.
template <class S>
CMat<S> from_trig_rows(const CMat<S>& Vt, int N) {
  using std::sqrt;
  const S r = 1 / sqrt(S(2));
  const std::complex<S> i(S(0), S(1));
  CMat<S> V(Vt.rows(), Vt.cols());
  V.row(N) = Vt.row(0);
  for (int k = 1; k <= N; ++k) {
    V.row(N + k) = (Vt.row(2 * k - 1) - i * Vt.row(2 * k)) * r;
    V.row(N - k) = (Vt.row(2 * k - 1) + i * Vt.row(2 * k)) * r;
  }
  return V;
}

template <class S>
S max_abs(const CMat<S>& C, bool imaginary) {
  using std::abs;
  S m(0);
  for (Eigen::Index j = 0; j < C.cols(); ++j)
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
      S v = imaginary ? abs(C(i, j).imag()) : abs(C(i, j));
      if (v > m) m = v;
    }
  return m;
}

template <class S>
ExtensionSolution<S> solve_with_cutoff(const LinearSystem<S>& system, const SvdFactorization<S>& fact, const S& cutoff,
                                       double reported) {
  if (!system.rhs) throw std::invalid_argument("solve: no right-hand side attached");
  ExtensionSolution<S> sol;
  sol.config = system.config;
  sol.cutoff = reported;
  sol.keptRank = fact.count_above(cutoff);
  CMat<S> data = *system.rhs;
  sol.coefficients = truncated_apply(fact, data, cutoff).col(0);
  sol.residualNorm = (system.matrix * sol.coefficients - *system.rhs).norm();
  return sol;
}

}  // namespace

template <class Scalar>
int SvdFactorization<Scalar>::count_above(const Scalar& eps) const {
  int k = 0;
  for (Eigen::Index i = 0; i < S.size(); ++i)
    if (S(i) > eps) ++k;
  return k;
}

template <class S>
SvdFactorization<S> svd(const CMat<S>& matrix) {
  if (is_real(matrix)) return real_svd<S>(real_part(matrix));
  return complex_svd<S>(matrix);
}

template <class S>
SvdFactorization<S> svd(const LinearSystem<S>& system) {
  const CMat<S>& C = system.matrix;
  if (system.kind == SystemKind::Continuous && is_real(C)) return symmetric_svd<S>(real_part(C));
  if (is_real(C)) return real_svd<S>(real_part(C));
  if (system.config.basis == Basis::ComplexExponential) {
    CMat<S> R = to_trig_columns(C, system.config.N);
    const S scale = max_abs(R, false);
    if (max_abs(R, true) <= 64 * Eigen::NumTraits<S>::epsilon() * scale) {
      SvdFactorization<S> f = real_svd<S>(real_part(R));
      f.V = from_trig_rows(f.V, system.config.N);
      return f;
    }
  }
  return complex_svd<S>(C);
}

template <class S>
CMat<S> truncated_apply(const SvdFactorization<S>& fact, const CMat<S>& data, const S& epsilon) {
  const int k = fact.count_above(epsilon);
  CMat<S> coeffs = fact.U.leftCols(k).adjoint() * data;
  for (int i = 0; i < k; ++i) coeffs.row(i) /= fact.S(i);
  return fact.V.leftCols(k) * coeffs;
}

template <class S>
ExtensionSolution<S> truncated_solve(const LinearSystem<S>& system, const SvdFactorization<S>& fact, const S& epsilon) {
  if (epsilon < 0) throw DomainError("truncated_solve: epsilon must be non-negative");
  return solve_with_cutoff(system, fact, epsilon, to_double(epsilon));
}

template <class S>
ExtensionSolution<S> truncated_solve(const LinearSystem<S>& system, const S& epsilon) {
  return truncated_solve(system, svd(system), epsilon);
}

template <class S>
ExtensionSolution<S> lsq_solve(const LinearSystem<S>& system, const SvdFactorization<S>& fact) {
  const S smax = fact.S.size() ? fact.S(0) : S(0);
  const S cutoff = Eigen::NumTraits<S>::epsilon() * smax * S(std::max(system.matrix.rows(), system.matrix.cols()));
  return solve_with_cutoff(system, fact, cutoff, to_double(cutoff));
}

template <class S>
ExtensionSolution<S> lsq_solve(const LinearSystem<S>& system) {
  return lsq_solve(system, svd(system));
}

ExtensionSolution<mp_real> exact_extension(const Function<mp_real>& f, const ExtensionConfig& config, int digits) {
  const PrecisionContext ctx = PrecisionContext::extended(digits);
  DigitsScope scope(ctx.digits);
  LinearSystem<mp_real> sys = build_system<mp_real>(config);
  attach_rhs(sys, f);
  SvdFactorization<mp_real> fact = svd(sys);
  const mp_real smin = fact.S(fact.S.size() - 1);
  if (smin * pow(mp_real(10), digits) < 1)
    throw PrecisionError("exact_extension: smallest singular value is below the digit budget");
  return solve_with_cutoff(sys, fact, mp_real(0), 0.0);
}

template <class S>
CVec<S> evaluate(const ExtensionSolution<S>& solution, const Vec<S>& points) {
  for (Eigen::Index i = 0; i < points.size(); ++i)
    if (points(i) < -solution.config.T || points(i) > solution.config.T)
      throw DomainError("evaluate: point outside [-T,T]");
  return evaluate_coefficients(solution.config, solution.coefficients, points);
}

CVec<double> evaluate(const ExtensionSolution<double>& solution, const std::vector<double>& points) {
  return evaluate(solution, Vec<double>(Eigen::Map<const Vec<double>>(points.data(), points.size())));
}

namespace {

int working_digits(const CVec<mp_real>& a) {
  unsigned d = a.size() ? a(0).real().precision() : kDefaultDigits;
  return static_cast<int>(std::max(d, 30u));
}

}  // namespace

CVec<double> evaluate_rounded(const ExtensionSolution<mp_real>& solution, const Vec<double>& points) {
  DigitsScope scope(working_digits(solution.coefficients));
  Vec<mp_real> x(points.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = mp_real(points(i));
  return to_double_vec<mp_real>(evaluate(solution, x));
}

template <class S>
FrameFunction<S> frame_function(const SvdFactorization<S>& fact, int n, const ExtensionConfig& config) {
  if (n < 0 || n >= fact.S.size()) throw DomainError("frame_function: index out of range");
  return {n, fact.V.col(n), fact.S(n), config};
}

template <class S>
CVec<S> evaluate(const FrameFunction<S>& frame, const Vec<S>& points) {
  return evaluate_coefficients(frame.config, frame.coefficients, points);
}

template <class S>
int zero_count(const FrameFunction<S>& frame, int points) {
  using std::abs;
  Vec<double> xd = Vec<double>::LinSpaced(points + 2, -1.0, 1.0).segment(1, points);
  Vec<S> x(points);
  for (int i = 0; i < points; ++i) x(i) = S(xd(i));
  CVec<S> v = evaluate(frame, x);
  Eigen::Index peak = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (abs(v(i)) > abs(v(peak))) peak = i;
  const std::complex<S> phase = std::conj(v(peak)) / abs(v(peak));
  int changes = 0;
  int last = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const S re = (v(i) * phase).real();
    const int sign = re > 0 ? 1 : (re < 0 ? -1 : 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes;
}

double sup_error(const Function<double>& f, const ExtensionSolution<double>& solution, int points) {
  return sup_distance(f, solution.config, solution.coefficients, points);
}

double sup_error(const Function<mp_real>& f, const ExtensionSolution<mp_real>& solution, int points) {
  DigitsScope scope(working_digits(solution.coefficients));
  Vec<double> xd = uniform_grid(points);
  Vec<mp_real> x(points);
  for (int i = 0; i < points; ++i) x(i) = mp_real(xd(i));
  CVec<mp_real> v = evaluate(solution, x);
  double m = 0;
  for (int i = 0; i < points; ++i) m = std::max(m, std::abs(to_double(f(x(i)) - v(i))));
  return m;
}

#define FEXT_INSTANTIATE(S)                                                                                   \
  template struct SvdFactorization<S>;                                                                        \
  template SvdFactorization<S> svd<S>(const CMat<S>&);                                                        \
  template SvdFactorization<S> svd<S>(const LinearSystem<S>&);                                                \
  template CMat<S> truncated_apply<S>(const SvdFactorization<S>&, const CMat<S>&, const S&);                  \
  template ExtensionSolution<S> truncated_solve<S>(const LinearSystem<S>&, const SvdFactorization<S>&, const S&); \
  template ExtensionSolution<S> truncated_solve<S>(const LinearSystem<S>&, const S&);                         \
  template ExtensionSolution<S> lsq_solve<S>(const LinearSystem<S>&, const SvdFactorization<S>&);             \
  template ExtensionSolution<S> lsq_solve<S>(const LinearSystem<S>&);                                         \
  template CVec<S> evaluate<S>(const ExtensionSolution<S>&, const Vec<S>&);                                   \
  template FrameFunction<S> frame_function<S>(const SvdFactorization<S>&, int, const ExtensionConfig&);       \
  template CVec<S> evaluate<S>(const FrameFunction<S>&, const Vec<S>&);                                       \
  template int zero_count<S>(const FrameFunction<S>&, int);

FEXT_INSTANTIATE(double)
FEXT_INSTANTIATE(mp_real)

}  // namespace fext
