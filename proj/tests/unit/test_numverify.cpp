#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pdmosc/numverify.hpp"

using namespace pdmosc;
using namespace pdmosc::numverify;
using doctest::Approx;

namespace {
const ModelParams kP3(0.02, 1.0, 1.0, 3);

Eigen::MatrixXd dense(const Tridiagonal& t) {
  const auto n = static_cast<Eigen::Index>(t.diag.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = t.diag[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = t.offdiag[i];
  return m;
}

Tridiagonal random_tridiagonal(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Tridiagonal t;
  for (int i = 0; i < n; ++i) t.diag.push_back(u(gen));
  for (int i = 0; i + 1 < n; ++i) t.offdiag.push_back(u(gen));
  return t;
}
}  // namespace

TEST_CASE("radial grid") {
  const RadialGrid g(1e-6, 10.0, 1001);
  CHECK(g.spacing() == Approx((10.0 - 1e-6) / 1000).epsilon(1e-15));
  CHECK(g.node(1000) == Approx(10.0).epsilon(1e-15));
  CHECK(g.refined().num_points == 2001);
  CHECK(g.refined().spacing() == Approx(g.spacing() / 2).epsilon(1e-14));
  CHECK_THROWS_AS(RadialGrid(0.0, 1.0, 200), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid(1.0, 0.5, 200), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid(0.1, 1.0, 99), std::invalid_argument);
  const RadialGrid d = default_grid(kP3, 2, 2);
  const double beta = std::sqrt(omega_of_energy(energy_closed_form(6, kP3), kP3));
  CHECK(d.r_max >= 12.0 / beta);
  CHECK(d.num_points == 4000);
  CHECK(d.r_min == 1e-6);
}

TEST_CASE("discretized operator structure") {
  const RadialGrid g(1e-6, 8.0, 400);
  SUBCASE("flat one-dimensional oscillator is the textbook stencil") {
    const ModelParams p(0.0, 1.0, 1.0, 1);
    const auto op = discretize_radial(p, 1, g);
    const double h = g.spacing();
    for (std::size_t i = 0; i < op.size(); ++i) {
      const double r = op.radii[i];
      CHECK(op.diag[i] == Approx(1.0 / (h * h) + 0.5 * r * r).epsilon(1e-14));
      CHECK(op.mass[i] == 1.0);
      if (i + 1 < op.size()) CHECK(op.offdiag[i] == Approx(-0.5 / (h * h)).epsilon(1e-14));
    }
  }
  SUBCASE("mass entries are the nodal weights") {
    for (int l : {0, 1, 2}) {
      const auto op = discretize_radial(kP3, l, g);
      CHECK(op.offdiag.size() + 1 == op.size());
      CHECK(op.first_node == (l == 0 ? 0 : 1));
      for (std::size_t i = 0; i < op.size(); ++i) {
        const double r = op.radii[i];
        const double nodal = (1.0 + 0.02 * r * r) * r * r;
        // The reflective inner cell of l = 0 carries half a cell.
        const double expect = (l == 0 && i == 0) ? 0.5 * nodal : nodal;
        CHECK(op.mass[i] == Approx(expect).epsilon(1e-14));
        CHECK(op.mass[i] > 0.0);
      }
    }
  }
  CHECK_THROWS_AS((void)discretize_radial(kP3.with_dim(1), 2, g), std::invalid_argument);
  auto bad = discretize_radial(kP3, 1, g);
  bad.mass[3] = 0.0;
  CHECK_THROWS_AS((void)symmetric_reduction(bad), std::domain_error);
}

TEST_CASE("tridiagonal eigen-solver against a dense reference") {
  std::mt19937_64 gen(5);
  for (int n : {1, 2, 7, 60}) {
    const Tridiagonal t = random_tridiagonal(gen, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(t));
    const auto& ev = es.eigenvalues();
    for (int j = 0; j < n; ++j) {
      CHECK(tridiagonal_eigenvalue(t, j) == Approx(ev[j]).epsilon(1e-12).scale(1.0));
      CHECK(sturm_count(t, ev[j] + 1e-9) == static_cast<std::size_t>(j + 1));
      const auto v = tridiagonal_eigenvector(t, tridiagonal_eigenvalue(t, j));
      const Eigen::Map<const Eigen::VectorXd> vv(v.data(), n);
      CHECK(vv.norm() == Approx(1.0).epsilon(1e-12));
      CHECK((dense(t) * vv - ev[j] * vv).norm() < 1e-9);
    }
  }
}

TEST_CASE("generalized eigenvalues") {
  SUBCASE("flat three-dimensional oscillator") {
    const ModelParams flat(0.0, 1.0, 1.0, 3);
    const auto g = default_grid(flat, 0, 2);
    const auto e = solve_generalized_eigen(discretize_radial(flat, 0, g), 3);
    CHECK(e[0] == Approx(1.5).epsilon(1e-5));
    CHECK(e[1] == Approx(3.5).epsilon(1e-5));
    CHECK(e[2] == Approx(5.5).epsilon(1e-5));
  }
  SUBCASE("deformed, after Richardson extrapolation") {
    const auto lv = oracle_levels(kP3, 0, 2);
    for (int k = 0; k <= 2; ++k)
      CHECK(std::abs(lv[k].richardson / energy_closed_form(2 * k, kP3) - 1.0) < 1e-5);
    const auto l1 = oracle_levels(kP3, 1, 0);
    CHECK(std::abs(l1[0].richardson / energy_closed_form(1, kP3) - 1.0) < 1e-5);
  }
  SUBCASE("count limit") {
    const RadialGrid g(1e-6, 10.0, 400);
    CHECK_THROWS_AS((void)solve_generalized_eigen(discretize_radial(kP3, 0, g), 101), std::invalid_argument);
    CHECK(solve_generalized_eigen(discretize_radial(kP3, 0, g), 100).size() == 100u);
  }
}

TEST_CASE("eigenvectors: nodes and boundary contamination") {
  const auto g = default_grid(kP3, 1, 4);
  const auto pairs = solve_generalized_eigenpairs(discretize_radial(kP3, 1, g), 5, g);
  for (int j = 0; j < 5; ++j) {
    CHECK(pairs[j].sign_changes == j);
    CHECK_FALSE(pairs[j].boundary_contaminated);
    double norm = 0.0;
    const auto op = discretize_radial(kP3, 1, g);
    for (std::size_t i = 0; i < op.size(); ++i) norm += op.mass[i] * pairs[j].vector[i] * pairs[j].vector[i];
    CHECK(norm == Approx(1.0).epsilon(1e-10));
  }
  // A box far too small squeezes the upper states against the wall.
  const RadialGrid tight(1e-6, 2.5, 400);
  const auto squeezed = solve_generalized_eigenpairs(discretize_radial(kP3, 0, tight), 4, tight);
  CHECK(squeezed.back().boundary_contaminated);
  CHECK(squeezed.back().tail_mass > 0.01);
}

TEST_CASE("oracle report") {
  SUBCASE("flat baseline") {
    for (int dim : {1, 2, 3}) {
      const auto t = oracle_report(kP3.with_lambda(0.0).with_dim(dim), 2, 2);
      for (const auto& r : t.rows) {
        CHECK(r.oracle->rel_error < 1e-5);
        CHECK(r.oracle->closed_form == Approx(2 * r.oracle->k + r.oracle->l + 0.5 * dim).epsilon(1e-15));
      }
    }
  }
  SUBCASE("deformed") {
    for (double lam : {0.02, 0.1})
      for (int dim : {1, 2, 3}) {
        const ModelParams p = kP3.with_lambda(lam).with_dim(dim);
        const auto t = oracle_report(p, 2, 2);
        CHECK(t.provenance == Provenance::oracle);
        CHECK(t.rows.size() == static_cast<std::size_t>(dim == 1 ? 6 : 9));
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
          const auto& r = t.rows[i];
          CHECK(r.oracle->rel_error < 1e-5);
          CHECK(r.oracle->convergence_order == Approx(2.0).epsilon(0.1));
          CHECK(r.energy < continuum_threshold(p));
          CHECK(r.n == 2 * r.oracle->k + r.oracle->l);
          if (i > 0) CHECK(t.rows[i - 1].n <= r.n);
        }
      }
  }
  SUBCASE("degenerate multiplet") {
    const double a = oracle_levels(kP3, 0, 1)[1].richardson;
    const double b = oracle_levels(kP3, 2, 0)[0].richardson;
    CHECK(std::abs(a - b) / a < 1e-5);
  }
}

TEST_CASE("commutation of H and L^2 in two dimensions") {
  const ModelParams p2(0.02, 1.0, 1.0, 2);
  CHECK_THROWS_AS((void)commutation_residual_2d(kP3, Grid2D{}), std::invalid_argument);
  CHECK(commutation_test_functions().size() == 5u);

  SUBCASE("residual vanishes at second order under refinement") {
    for (double lam : {0.0, 0.02}) {
      const ModelParams p = p2.with_lambda(lam);
      const auto coarse = commutation_residual_2d(p, Grid2D{6.0, 61});
      const auto fine = commutation_residual_2d(p, Grid2D{6.0, 121});
      const auto finest = commutation_residual_2d(p, Grid2D{6.0, 241});
      const double order = std::log2((coarse.residual) / (fine.residual));
      const double order2 = std::log2((fine.residual) / (finest.residual));
      INFO("lambda=" << lam << " residuals " << coarse.residual << " " << fine.residual << " " << finest.residual);
      CHECK(order == Approx(2.0).epsilon(0.1));
      CHECK(order2 == Approx(2.0).epsilon(0.1));
      CHECK(finest.residual < coarse.residual / 10);
    }
  }
  SUBCASE("radial functions") {
    const Function2D radial = [](double x, double y) { return std::exp(-(x * x + y * y) / 2); };
    for (double x : {0.3, -1.1, 2.0})
      CHECK(std::abs(apply_angular_momentum_sq(radial, p2, x, 0.7)) < 1e-11);
    const double a = commutator_residual(radial, p2, Grid2D{6.0, 61});
    const double b = commutator_residual(radial, p2, Grid2D{6.0, 121});
    CHECK(std::log2(a / b) == Approx(2.0).epsilon(0.1));
  }
  SUBCASE("angular momentum of a known function") {
    // x e^{-r^2/2} has l = 1, so L^2 f = hbar^2 f; the rotational stencil is exact up to O(delta^2).
    const Function2D f = [](double x, double y) { return x * std::exp(-(x * x + y * y) / 2); };
    const double d = kRotationStep;
    const double stencil = 2.0 * (1.0 - std::cos(d)) / (d * d);
    CHECK(apply_angular_momentum_sq(f, p2, 0.8, -0.4) == Approx(stencil * f(0.8, -0.4)).epsilon(1e-10));
  }
}
