#include "fext/quadrature.hpp"
#include "fext/registry.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fext;
using doctest::Approx;

TEST_CASE("fe_constant matches closed forms") {
  CHECK(fe_constant(2.0) == Approx(3 + 2 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(fe_constant(2.0) == Approx(oracle::kE2).epsilon(1e-15));
  CHECK(fe_constant(4.0) == Approx(oracle::kE4).epsilon(1e-14));
  const double e = fe_constant(1.001);
  CHECK(e > 1);
  CHECK(e < 1.01);
  CHECK_THROWS_AS(fe_constant(1.0), DomainError);
  CHECK_THROWS_AS(fe_constant(0.5), DomainError);
}

TEST_CASE("fe_constant is increasing and exceeds one") {
  double prev = 1;
  for (double T = 1.01; T < 8; T += 0.05) {
    const double e = fe_constant(T);
    CHECK(e > prev);
    CHECK(e == Approx(static_cast<double>(oracle::extension_constant(T))).epsilon(1e-13));
    prev = e;
  }
}

TEST_CASE("map_to_z examples") {
  CHECK(map_to_z(0.0, 2.0) == Approx(1.0));
  CHECK(map_to_z(1.0, 2.0) == Approx(-1.0));
  CHECK(map_to_z(2.0, 2.0) == Approx(-3.0));
  CHECK(map_to_z(2.0, 2.0) == Approx(1 - 2 / std::pow(std::sin(std::numbers::pi / 4), 2)));
}

TEST_CASE("map_to_z is strictly decreasing on [0,1]") {
  for (double T : {4.0 / 3, 2.0, 4.0}) {
    double prev = map_to_z(0.0, T);
    CHECK(prev == Approx(1.0));
    for (int i = 1; i <= 1000; ++i) {
      const double z = map_to_z(i / 1000.0, T);
      CHECK(z < prev);
      prev = z;
    }
    CHECK(prev == Approx(-1.0));
  }
}

TEST_CASE("complex map agrees with the independent evaluation") {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 50; ++k) {
    const std::complex<double> x(u(gen), u(gen));
    const double T = 1.2 + (k % 5) * 0.6;
    const auto z = map_to_z(x, T);
    const auto ref = oracle::mapped({x.real(), x.imag()}, T);
    CHECK(std::abs(z - std::complex<double>(ref)) <= 1e-12 * (1 + std::abs(z)));
  }
}

TEST_CASE("joukowski_index examples") {
  CHECK(joukowski_index(1.0) == Approx(1.0));
  CHECK(joukowski_index(-3.0) == Approx(3 + 2 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(joukowski_index(-3.0) == Approx(fe_constant(2.0)).epsilon(1e-15));
  CHECK(joukowski_index((2.0 + 0.5) / 2) == Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(joukowski_index(0.3), DomainError);
  CHECK_THROWS_AS(joukowski_index(-0.999), DomainError);
  CHECK_NOTHROW(joukowski_index(std::complex<double>(0.3, 1e-9)));
}

TEST_CASE("joukowski_index returns the larger root and matches the ellipse-foci formula") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 200; ++k) {
    const std::complex<double> z(u(gen), u(gen));
    const double rho = joukowski_index(z);
    CHECK(rho >= 1);
    CHECK(rho == Approx(static_cast<double>(oracle::bernstein_index({z.real(), z.imag()}))).epsilon(1e-12));
  }
}

TEST_CASE("mapped domain identities") {
  for (double T : {1.1, 4.0 / 3, 2.0, 3.0, 4.0}) {
    const MappedDomain d = MappedDomain::of(T);
    CHECK(d.mT < -1);
    CHECK(d.mT == Approx(map_to_z(T, T)).epsilon(1e-13));
    CHECK(std::abs(joukowski_index(map_to_z(T, T)) - fe_constant(T)) <= 1e-12 * fe_constant(T));
    CHECK(std::abs(joukowski_index(d.mT) - d.ET) <= 1e-12 * d.ET);
  }
}

TEST_CASE("analyticity_rate") {
  const AnalyticityInfo entire = analyticity_rate(std::nullopt, 2);
  CHECK(entire.entire());
  CHECK(std::isinf(entire.rhoStar));
  CHECK(entire.expectedRate == Approx(oracle::kE2));
  CHECK(entire.d_f == Approx(1.0));

  const AnalyticityInfo r16 = analyticity_rate(std::complex<double>(0, 0.25), 2);
  CHECK(r16.rhoStar == Approx(oracle::kRhoRunge16).epsilon(1e-12));
  CHECK(r16.rhoStar == Approx(joukowski_index(map_to_z(std::complex<double>(0, 0.25), 2.0))));
  CHECK(r16.expectedRate == Approx(oracle::kRhoRunge16).epsilon(1e-12));
  CHECK(r16.d_f == Approx(std::log(oracle::kRhoRunge16) / std::log(oracle::kE2)).epsilon(1e-12));

  const AnalyticityInfo p87 = analyticity_rate(std::complex<double>(8.0 / 7, 0), 2);
  CHECK(p87.rhoStar == Approx(oracle::kRhoPole87).epsilon(1e-12));
  CHECK(p87.d_f > 0);
  CHECK(p87.d_f <= 1);

  CHECK_THROWS_AS(analyticity_rate(std::complex<double>(0.5, 0), 2), DomainError);
}

TEST_CASE("analyticity_rate caps at E(T) for distant singularities") {
  const AnalyticityInfo far = analyticity_rate(std::complex<double>(0, 5), 2);
  CHECK(far.rhoStar > oracle::kE2);
  CHECK(far.expectedRate == Approx(oracle::kE2));
  CHECK(far.d_f == Approx(1.0));
}

TEST_CASE("mapped Chebyshev nodes") {
  const auto n0 = mapped_chebyshev_nodes(0, 2.0).nodes;
  REQUIRE(n0.size() == 2);
  CHECK(n0(0) == Approx(-2.0 / 3).epsilon(1e-15));
  CHECK(n0(1) == Approx(2.0 / 3).epsilon(1e-15));

  const auto n1 = mapped_chebyshev_nodes(1, 2.0).nodes;
  REQUIRE(n1.size() == 4);
  CHECK(n1(2) == Approx(oracle::kChebyshevN1T2[0]).epsilon(1e-15));
  CHECK(n1(3) == Approx(oracle::kChebyshevN1T2[1]).epsilon(1e-15));
  CHECK(map_to_z(n1(2), 2.0) == Approx(std::cos(std::numbers::pi / 4)).epsilon(1e-14));
  CHECK(map_to_z(n1(3), 2.0) == Approx(std::cos(3 * std::numbers::pi / 4)).epsilon(1e-14));
}

TEST_CASE("mapped Chebyshev nodes are symmetric, interior and pull back to Chebyshev points") {
  for (double T : {1.5, 2.0, 4.0})
    for (int N : {0, 1, 5, 17, 64}) {
      const auto x = mapped_chebyshev_nodes(N, T).nodes;
      REQUIRE(x.size() == 2 * N + 2);
      for (int n = 0; n <= N; ++n) {
        CHECK(x(N + 1 + n) == -x(N - n));
        CHECK(std::abs(x(N + 1 + n)) < 1);
        const double cheb = std::cos((2 * n + 1) * std::numbers::pi / (2 * N + 2));
        CHECK(std::abs(map_to_z(x(N + 1 + n), T) - cheb) <= 1e-13);
      }
      for (int i = 1; i < x.size(); ++i) CHECK(x(i) > x(i - 1));
    }
}

TEST_CASE("equispaced nodes") {
  const auto m1 = equispaced_nodes<double>(1).nodes;
  REQUIRE(m1.size() == 3);
  CHECK(m1(0) == -1);
  CHECK(m1(1) == 0);
  CHECK(m1(2) == 1);
  const auto m2 = equispaced_nodes<double>(2).nodes;
  REQUIRE(m2.size() == 5);
  CHECK(m2(1) == -0.5);
  CHECK(m2(3) == 0.5);
  for (int M : {1, 7, 100}) CHECK(equispaced_nodes<double>(M).nodes.size() == 2 * M + 1);
  CHECK_THROWS_AS(equispaced_nodes<double>(0), DomainError);
}

TEST_CASE("adaptive_T") {
  const double T = adaptive_T(20, 1e-14);
  CHECK(std::pow(fe_constant(T), -20) / 1e-14 == Approx(1.0).epsilon(1e-10));
  const double big = adaptive_T(1000000, 1e-14);
  CHECK(big > 1);
  CHECK(big < 1.0001);
  CHECK(adaptive_T(10, 1e-14) > adaptive_T(100, 1e-14));
  CHECK_THROWS_AS(adaptive_T(10, 0.0), DomainError);
  CHECK_THROWS_AS(adaptive_T(10, 1.0), DomainError);
  CHECK_THROWS_AS(adaptive_T(0, 1e-8), DomainError);
}

TEST_CASE("adaptive_T identity on a grid") {
  for (int N : {1, 4, 16, 64, 256})
    for (double eps : {1e-4, 1e-8, 1e-14}) {
      const double T = adaptive_T(N, eps);
      CHECK(std::pow(fe_constant(T), -N) / eps == Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("basis_eval examples") {
  const ExtensionConfig c = ExtensionConfig::continuous(3, 2);
  CHECK(std::abs(basis_eval(0, 0.37, c) - std::complex<double>(0.5, 0)) < 1e-15);
  CHECK(std::abs(basis_eval(1, 1.0, c) - std::complex<double>(0, 0.5)) < 1e-15);
  const ExtensionConfig d = ExtensionConfig::discrete(3, 2);
  for (double x : {-1.0, 0.2, 0.9}) CHECK(std::abs(basis_eval(0, x, d) - std::complex<double>(1, 0)) < 1e-15);
  CHECK(basis_eval(2, 0.3, d).real() == Approx(std::cos(2 * std::numbers::pi * 0.3 / 2)));
  CHECK(basis_eval(-2, 0.3, d).real() == Approx(std::sin(2 * std::numbers::pi * 0.3 / 2)));
  CHECK_THROWS_AS(basis_eval(4, 0.0, c), DomainError);
  CHECK_THROWS_AS(basis_eval(-4, 0.0, c), DomainError);
  CHECK_THROWS_AS(basis_eval(-5, 0.0, d), DomainError);
  CHECK_NOTHROW(basis_eval(-4, 0.0, d));
}

TEST_CASE("basis sizes and basis_row ordering") {
  const ExtensionConfig c = ExtensionConfig::continuous(5, 2.5);
  const ExtensionConfig d = ExtensionConfig::discrete(5, 2.5);
  CHECK(c.dimension() == 11);
  CHECK(d.dimension() == 12);
  const double x = 0.41;
  const CVec<double> rc = basis_row(x, c);
  for (int j = 0; j < c.dimension(); ++j) CHECK(std::abs(rc(j) - basis_eval(c.index(j), x, c)) < 1e-15);
  const CVec<double> rd = basis_row(x, d);
  for (int j = 0; j < d.dimension(); ++j) CHECK(std::abs(rd(j) - basis_eval(d.index(j), x, d)) < 1e-15);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(ExtensionConfig::continuous(4, 1.0), DomainError);
  CHECK_THROWS_AS(ExtensionConfig::equispaced(4, 3, 2.0), DomainError);
  CHECK_NOTHROW(ExtensionConfig::equispaced(4, 4, 2.0));
}

TEST_CASE("node density") {
  const double T = 2;
  CHECK(node_density(-1, T) == Approx(T / (2 * std::numbers::pi) * std::tan(std::numbers::pi / (2 * T))));
  CHECK(node_density(-1, T) == Approx(oracle::kDensityAtMinusOneT2).epsilon(1e-15));
  for (double z : {-0.9, -0.3, 0.0, 0.5, 0.99})
    CHECK(node_density(z, T) == Approx(static_cast<double>(oracle::node_density(z, T))).epsilon(1e-13));
  const double mT = MappedDomain::of(T).mT;
  for (double d : {1e-4, 1e-6, 1e-8})
    CHECK(node_density(1 - d, T) * std::sqrt(d) ==
          Approx(T / (std::numbers::pi * std::sqrt(1 - mT))).epsilon(1e-3));
  CHECK_THROWS_AS(node_density(1, T), DomainError);
  CHECK_THROWS_AS(node_density(-1.5, T), DomainError);
}

TEST_CASE("node density integrates to one") {
  for (double T : {4.0 / 3, 2.0, 4.0}) {
    // Substituting z = 1 - u^2 removes the endpoint singularity; the integrand is constant to O(u^2) near u = 0.
    const double u0 = 1e-6;
    auto integrand = [T](const double& u) -> double { return 2 * u * node_density(1 - u * u, T); };
    const double head = 2 * T / (std::numbers::pi * std::sqrt(1 - MappedDomain::of(T).mT)) * u0;
    const double total = head + integrate_adaptive<double>(integrand, QuadratureRule{8, 24, u0, std::sqrt(2.0)}, 1e-13);
    CHECK(total == Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("registry") {
  const auto names = registry_names();
  CHECK(names.size() == 10);
  for (const char* n : {"runge16", "runge25", "runge100", "pole87", "pole101", "cosh40", "absx7", "oscil", "expx",
                        "linear"})
    CHECK_NOTHROW(lookup(n));
  CHECK_THROWS_AS(lookup("sinc"), std::invalid_argument);
  CHECK(lookup("runge25").eval(0.2).real() == Approx(0.5));
  CHECK(lookup("pole87").eval(1.0).real() == Approx(1.0));
  CHECK(lookup("pole101").eval(1.0).real() == Approx(1.0));
  CHECK(lookup("cosh40").eval(1.0).real() == Approx(2.0));
  CHECK(lookup("cosh40").eval(0.0).real() == Approx(1 + 1 / std::cosh(40.0)));
  CHECK(lookup("absx7").eval(-0.5).real() == Approx(std::pow(0.5, 7)));
  CHECK(std::abs(lookup("oscil").eval(0.3)) == Approx(1.0));
  CHECK(lookup("expx").eval(1.0).real() == Approx(std::exp(1.0)));
  CHECK(lookup("linear").eval(-0.25).real() == Approx(-0.25));
  CHECK_FALSE(lookup("absx7").analyticity(2).has_value());
  CHECK(lookup("runge25").analyticity(2)->rhoStar == Approx(oracle::kRhoRunge25).epsilon(1e-12));
  CHECK(lookup("runge100").analyticity(2)->rhoStar == Approx(oracle::kRhoRunge100).epsilon(1e-12));
  CHECK(lookup("pole101").analyticity(2)->rhoStar == Approx(oracle::kRhoPole101).epsilon(1e-12));
  CHECK(lookup("expx").analyticity(2)->entire());
}
