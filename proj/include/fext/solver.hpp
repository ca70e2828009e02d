#ifndef FEXT_SOLVER_HPP
#define FEXT_SOLVER_HPP

#include "fext/systems.hpp"

namespace fext {

template <class Scalar>
struct SvdFactorization {
  CMat<Scalar> U;
  Vec<Scalar> S;
  CMat<Scalar> V;

  Eigen::Index size() const { return S.size(); }
  int count_above(const Scalar& eps) const;
};

template <class Scalar>
struct ExtensionSolution {
  CVec<Scalar> coefficients;
  ExtensionConfig config;
  double cutoff = 0;
  int keptRank = 0;
  Scalar residualNorm = Scalar(0);
};

template <class Scalar>
struct FrameFunction {
  int index = 0;
  CVec<Scalar> coefficients;
  Scalar sigma = Scalar(0);
  ExtensionConfig config;
};

// Dense SVD; matrices with vanishing imaginary part are factored in real arithmetic.
template <class S>
SvdFactorization<S> svd(const CMat<S>& matrix);

// SVD that exploits the structure of the assembled system.
template <class S>
SvdFactorization<S> svd(const LinearSystem<S>& system);

template <class S>
ExtensionSolution<S> truncated_solve(const LinearSystem<S>& system, const SvdFactorization<S>& fact, const S& epsilon);

template <class S>
ExtensionSolution<S> truncated_solve(const LinearSystem<S>& system, const S& epsilon);

// Applies the truncated pseudo-inverse to each column of data.
template <class S>
CMat<S> truncated_apply(const SvdFactorization<S>& fact, const CMat<S>& data, const S& epsilon);

template <class S>
ExtensionSolution<S> lsq_solve(const LinearSystem<S>& system, const SvdFactorization<S>& fact);

template <class S>
ExtensionSolution<S> lsq_solve(const LinearSystem<S>& system);

ExtensionSolution<mp_real> exact_extension(const Function<mp_real>& f, const ExtensionConfig& config,
                                           int digits = kDefaultDigits);

template <class S>
CVec<S> evaluate(const ExtensionSolution<S>& solution, const Vec<S>& points);

CVec<double> evaluate(const ExtensionSolution<double>& solution, const std::vector<double>& points);

// Evaluates in the solution's precision and rounds the values to double.
CVec<double> evaluate_rounded(const ExtensionSolution<mp_real>& solution, const Vec<double>& points);

template <class S>
FrameFunction<S> frame_function(const SvdFactorization<S>& fact, int n, const ExtensionConfig& config);

template <class S>
CVec<S> evaluate(const FrameFunction<S>& frame, const Vec<S>& points);

// Sign changes of the phase-normalised real part on a uniform grid of (-1,1).
template <class S>
int zero_count(const FrameFunction<S>& frame, int points = 20001);

double sup_error(const Function<double>& f, const ExtensionSolution<double>& solution, int points = kDefaultSupGrid);
double sup_error(const Function<mp_real>& f, const ExtensionSolution<mp_real>& solution,
                 int points = kDefaultSupGrid);

}  // namespace fext

#endif
