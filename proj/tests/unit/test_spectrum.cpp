#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "oracles.hpp"
#include "pdmosc/spectrum.hpp"

using namespace pdmosc;
using doctest::Approx;

namespace {
const ModelParams kFig(0.02, 1.0, 1.0, 3);
}

TEST_CASE("omega of energy") {
  CHECK(omega_of_energy(0.0, kFig) == 1.0);
  CHECK(omega_of_energy(1e6, kFig.with_lambda(0.0)) == 1.0);
  const double below = std::nextafter(25.0, 0.0);
  CHECK(omega_of_energy(below, kFig) > 0.0);
  CHECK(omega_of_energy(below, kFig) < 1e-7);
  CHECK_THROWS_AS((void)omega_of_energy(25.0, kFig), std::domain_error);
  CHECK_THROWS_AS((void)omega_of_energy(30.0, kFig), std::domain_error);
}

TEST_CASE("closed-form energies") {
  CHECK(energy_closed_form(0, kFig.with_lambda(0.0)) == 1.5);
  CHECK(energy_closed_form(0, kFig) == Approx(oracle::implicit_energy(0, 3, 0.02, 1.0, 1.0)).epsilon(1e-14));
  CHECK(energy_closed_form(0, kFig) == Approx(1.45567).epsilon(1e-5));
  const double e100 = energy_closed_form(100, kFig);
  CHECK(e100 == Approx(23.64).epsilon(1e-3));
  CHECK(e100 < 25.0);
  CHECK_THROWS_AS((void)energy_closed_form(0, ModelParams(0.02, 0.0)), std::domain_error);
  CHECK_THROWS_AS((void)energy_closed_form(-1, kFig), std::invalid_argument);

  SUBCASE("matches the independent bisection across parameters") {
    for (int dim : {1, 2, 3, 6})
      for (double lam : {1e-6, 0.005, 0.3, 5.0})
        for (double w : {0.3, 1.0, 4.0})
          for (double hb : {0.5, 1.0})
            for (int n : {0, 1, 7, 50, 1000}) {
              const ModelParams p(lam, w, hb, dim);
              CHECK(energy_closed_form(n, p) ==
                    Approx(oracle::implicit_energy(n, dim, lam, w, hb)).epsilon(1e-13).scale(w * w));
            }
  }
}

TEST_CASE("implicit solver") {
  CHECK(std::abs(energy_implicit(0, kFig) - energy_closed_form(0, kFig)) < 1e-10);
  const ModelParams tiny = kFig.with_lambda(1e-10);
  for (int n : {0, 3, 10}) CHECK(std::abs(energy_implicit(n, tiny) - (n + 1.5)) < 1e-6);
  CHECK(energy_implicit(300, kFig) == Approx(25.0).epsilon(0.01));
  CHECK(std::abs(implicit_residual(energy_implicit(42, kFig), 42, kFig)) < 1e-12);
  CHECK_THROWS_AS((void)energy_implicit(0, kFig.with_lambda(0.0)), std::domain_error);
  CHECK_THROWS_AS((void)energy_implicit(0, kFig, 0.0), std::invalid_argument);
}

TEST_CASE("degeneracy") {
  for (int dim : {1, 2, 3, 7}) CHECK(degeneracy(0, dim) == 1u);
  CHECK(degeneracy(2, 3) == 6u);
  CHECK(degeneracy(3, 2) == 4u);
  for (int dim = 1; dim <= 5; ++dim)
    for (int n = 0; n <= 15; ++n) CHECK(degeneracy(n, dim) == oracle::count_tuples(n, dim));
  // binomial(10^6 + 2, 2) fits easily; a huge one must overflow cleanly.
  CHECK(degeneracy(1000000, 3) == 500001500001ull);
  CHECK_THROWS_AS((void)degeneracy(1000000, 20), std::overflow_error);
}

TEST_CASE("hyperspherical harmonic dimension") {
  CHECK(harmonic_dimension(0, 2) == 1u);
  CHECK(harmonic_dimension(5, 2) == 2u);
  for (int l = 0; l < 10; ++l) CHECK(harmonic_dimension(l, 3) == static_cast<std::uint64_t>(2 * l + 1));
  CHECK(harmonic_dimension(2, 4) == 9u);  // (l+1)^2 on S^3
  for (int dim : {2, 3, 4, 5})
    for (int n = 0; n <= 12; ++n) {
      std::uint64_t s = 0;
      for (int l = n % 2; l <= n; l += 2) s += harmonic_dimension(l, dim);
      CHECK(s == degeneracy(n, dim));
    }
}

TEST_CASE("continuum threshold") {
  CHECK(continuum_threshold(kFig) == 25.0);
  CHECK(continuum_threshold(kFig.with_lambda(0.1)) == Approx(5.0).epsilon(1e-15));
  CHECK(continuum_threshold(ModelParams(0.5, 2.0)) == 4.0);
  CHECK(continuum_threshold(kFig.with_lambda(0.0)) == std::numeric_limits<double>::infinity());
}

TEST_CASE("deformation of a base spectrum") {
  const BaseSpectrum h3 = harmonic_base(3, 1.0);
  for (int n = 0; n <= 50; ++n)
    CHECK(std::abs(solve_deformed_spectrum(h3, n, kFig) - energy_closed_form(n, kFig)) < 1e-10);
  const ModelParams tiny = kFig.with_lambda(1e-12);
  for (int n = 0; n <= 50; ++n) CHECK(std::abs(solve_deformed_spectrum(h3, n, tiny) - h3.eval(1.0, n)) < 1e-6);

  const ModelParams one(0.05, 1.0, 1.0, 1);
  const BaseSpectrum h1 = harmonic_base(1, 1.0);
  CHECK(std::abs(solve_deformed_spectrum(h1, 2, one) - energy_closed_form(2, one)) < 1e-12);

  SUBCASE("a non-harmonic base: E = a omega'^2 (n+1), solvable by hand") {
    // E = a (omega^2 - 2 lambda E)(n+1)  =>  E = a omega^2 (n+1) / (1 + 2 lambda a (n+1))
    const double a = 0.3;
    BaseSpectrum quad{[a](double f, int n) { return a * f * f * (n + 1); }, true, "quadratic"};
    for (int n = 0; n < 20; ++n) {
      const double exact = a * (n + 1) / (1.0 + 2 * 0.02 * a * (n + 1));
      CHECK(solve_deformed_spectrum(quad, n, kFig) == Approx(exact).epsilon(1e-12));
    }
  }
  SUBCASE("the fixed-point function has exactly one sign change") {
    for (int n : {0, 5, 40}) {
      int changes = 0;
      double prev = 0.0;
      for (int i = 0; i <= 10000; ++i) {
        const double e = 25.0 * i / 10001.0;
        const double g = h3.eval(std::sqrt(1.0 - 0.04 * e), n) - e;
        if (i > 0 && (g > 0) != (prev > 0)) ++changes;
        prev = g;
      }
      CHECK(changes == 1);
    }
  }
  SUBCASE("misbehaving bases are rejected") {
    BaseSpectrum decreasing{[](double f, int n) { return (n + 1) / f; }, true, "decreasing"};
    CHECK_THROWS_AS((void)solve_deformed_spectrum(decreasing, 0, kFig), DeformationError);
    BaseSpectrum flagged = h3;
    flagged.monotone_in_frequency = false;
    CHECK_THROWS_AS((void)solve_deformed_spectrum(flagged, 0, kFig), std::invalid_argument);
    BaseSpectrum wiggly{[](double f, int) { return f + 0.5 * std::sin(40.0 * f); }, true, "wiggly"};
    CHECK_THROWS_AS((void)solve_deformed_spectrum(wiggly, 0, kFig), DeformationError);
    BaseSpectrum empty;
    CHECK_THROWS_AS((void)solve_deformed_spectrum(empty, 0, kFig), std::invalid_argument);
  }
  CHECK(solve_deformed_spectrum(h3, 4, kFig.with_lambda(0.0)) == 5.5);
}

TEST_CASE("quantum states") {
  const auto c = QuantumState::cartesian({2, 0, 1}, kFig);
  CHECK(c.n == 3);
  CHECK(c.energy == energy_closed_form(3, kFig));
  CHECK(c.beta * c.beta == Approx(omega_of_energy(c.energy, kFig)).epsilon(1e-15));
  CHECK(c.factor_eigenvalue(0, kFig) == Approx(omega_of_energy(c.energy, kFig) * 2.5).epsilon(1e-15));
  // Sum of factor eigenvalues is E.
  double mu = 0.0;
  for (std::size_t i = 0; i < 3; ++i) mu += c.factor_eigenvalue(i, kFig);
  CHECK(mu == Approx(c.energy).epsilon(1e-14));
  CHECK_THROWS_AS((void)c.factor_eigenvalue(3, kFig), std::out_of_range);
  CHECK_THROWS_AS((void)QuantumState::cartesian({1, 1}, kFig), std::invalid_argument);
  CHECK_THROWS_AS((void)QuantumState::cartesian({1, -1, 0}, kFig), std::invalid_argument);

  const auto r = QuantumState::radial(1, 2, kFig);
  CHECK(r.n == 4);
  CHECK(r.energy == energy_closed_form(4, kFig));
  CHECK_THROWS_AS((void)QuantumState::radial(0, 2, kFig.with_dim(1)), std::invalid_argument);
  CHECK(QuantumState::radial(2, 1, kFig.with_dim(1)).n == 5);
}

TEST_CASE("spectrum table") {
  const auto t0 = spectrum_table(0, kFig.with_lambda(0.0));
  REQUIRE(t0.rows.size() == 1);
  CHECK(t0.rows[0].energy == 1.5);
  CHECK(t0.rows[0].degeneracy == 1u);

  const auto t5 = spectrum_table(5, kFig);
  REQUIRE(t5.rows.size() == 6);
  for (std::size_t i = 1; i < t5.rows.size(); ++i) CHECK(t5.rows[i].energy > t5.rows[i - 1].energy);
  for (const auto& row : t5.rows) CHECK(std::abs(row.residual) < 1e-10);

  const auto t400 = spectrum_table(400, kFig);
  for (std::size_t i = 1; i < t400.rows.size(); ++i)
    CHECK(t400.rows[i].gap_to_threshold < t400.rows[i - 1].gap_to_threshold);
  for (const auto& row : t400.rows) {
    CHECK(row.energy > 0.0);
    CHECK(row.energy < 25.0);
    CHECK(row.degeneracy == degeneracy(row.n, 3));
  }
  CHECK_THROWS_AS((void)spectrum_table(-1, kFig), std::invalid_argument);
  CHECK_THROWS_AS((void)spectrum_table(kSpectrumTableMaxN + 1, kFig), std::invalid_argument);
}

TEST_CASE("asymptotic deficit near the threshold") {
  // threshold - E_n ~ omega^4 / (8 lambda^3 hbar^2 (n + N/2)^2)
  for (int n : {1000, 5000, 20000}) {
    const double s = n + 1.5;
    const double predicted = 1.0 / (8.0 * 0.02 * 0.02 * 0.02 * s * s);
    CHECK((25.0 - energy_closed_form(n, kFig)) == Approx(predicted).epsilon(5.0 / s));
  }
}

TEST_CASE("self-consistency grid") {
  for (int dim : {1, 2, 3})
    for (double lam : {0.005, 0.02, 0.1})
      for (double w : {0.5, 1.0, 2.0}) {
        const ModelParams p(lam, w, 1.0, dim);
        for (int n = 0; n <= 400; ++n) {
          const double e = energy_closed_form(n, p);
          CHECK(std::abs(e - omega_of_energy(e, p) * (n + 0.5 * dim)) < 1e-10 * w * w);
          CHECK(e > 0.0);
          CHECK(e < continuum_threshold(p));
        }
      }
}
