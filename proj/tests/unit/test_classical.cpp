#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pdmosc/classical.hpp"
#include "pdmosc/geometry.hpp"
#include "pdmosc/spectrum.hpp"

using namespace pdmosc;
using doctest::Approx;

namespace {
const ModelParams kP3(0.02, 1.0, 1.0, 3);
const ModelParams kP2(0.02, 1.0, 1.0, 2);
constexpr double kPi = std::numbers::pi;

PhaseState random_state(std::mt19937_64& gen, int dim, double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  PhaseState s;
  for (int i = 0; i < dim; ++i) s.q.push_back(u(gen));
  for (int i = 0; i < dim; ++i) s.p.push_back(u(gen));
  return s;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// In the time tau with dtau = dt / (1 + lambda q^2) every orbit is a harmonic
// oscillator of frequency Omega = sqrt(omega^2 - 2 lambda H). It closes after
// tau = 2 pi / Omega, i.e. after
//   T = (2 pi / Omega) (1 + lambda (|q0|^2 + |p0|^2 / Omega^2) / 2)
// of real time, which is two radial periods.
double oracle_period(const PhaseState& s, const ModelParams& p) {
  const double big = std::sqrt(p.omega() * p.omega() - 2.0 * p.lambda() * hamiltonian(s, p));
  return 2.0 * kPi / big * (1.0 + 0.5 * p.lambda() * (norm2(s.q) + norm2(s.p) / (big * big)));
}

double distance(const PhaseState& a, const PhaseState& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.q.size(); ++i)
    s += (a.q[i] - b.q[i]) * (a.q[i] - b.q[i]) + (a.p[i] - b.p[i]) * (a.p[i] - b.p[i]);
  return std::sqrt(s);
}
}  // namespace

TEST_CASE("Hamiltonian") {
  CHECK(hamiltonian({{0, 0, 0}, {0, 0, 0}}, kP3) == 0.0);
  const PhaseState s{{0.3, -1.0, 2.0}, {0.5, 0.1, -0.7}};
  const ModelParams flat = kP3.with_lambda(0.0);
  CHECK(hamiltonian(s, flat) == Approx(0.5 * norm2(s.p) + 0.5 * norm2(s.q)).epsilon(1e-15));
  const PhaseState e{{1, 0, 0}, {0, 1, 0}};
  CHECK(hamiltonian(e, kP3) == Approx(2.0 / 2.04).epsilon(1e-15));
  CHECK_THROWS_AS((void)hamiltonian({{1, 0}, {0, 1}}, kP3), std::invalid_argument);
}

TEST_CASE("conserved quantities") {
  const PhaseState e{{1, 0, 0}, {0, 1, 0}};
  const auto c = conserved_set(e, kP3);
  const double h = 2.0 / 2.04;
  CHECK(c.energy == Approx(h).epsilon(1e-15));
  CHECK(c.c_upper[0] == Approx(1.0).epsilon(1e-15));
  CHECK(c.i_vals[0] == Approx(-(2 * 0.02 * h - 1.0)).epsilon(1e-15));
  CHECK(c.i_vals[0] == Approx(0.96078).epsilon(1e-5));
  CHECK(c.i_vals[1] == 1.0);
  CHECK(c.i_vals[2] == 0.0);
  CHECK(c.i_vals[0] + c.i_vals[1] + c.i_vals[2] == Approx(2 * h).epsilon(1e-15));

  const PhaseState s{{0.3, -1.0, 2.0}, {0.5, 0.1, -0.7}};
  const auto f = conserved_set(s, kP3.with_lambda(0.0));
  for (int i = 0; i < 3; ++i) CHECK(f.i_vals[i] == Approx(s.p[i] * s.p[i] + s.q[i] * s.q[i]).epsilon(1e-15));

  const PhaseState radial{{0.3, -1.0, 2.0}, {0.6, -2.0, 4.0}};
  const auto r = conserved_set(radial, kP3);
  for (double v : r.c_upper) CHECK(v == Approx(0.0).scale(1.0).epsilon(1e-15));
  for (double v : r.c_lower) CHECK(v == Approx(0.0).scale(1.0).epsilon(1e-15));

  std::mt19937_64 gen(3);
  for (int dim : {2, 3, 4, 5})
    for (int i = 0; i < 50; ++i) {
      const PhaseState x = random_state(gen, dim, 2.0);
      const ModelParams p = kP3.with_dim(dim);
      const auto cs = conserved_set(x, p);
      CHECK(cs.c_upper.size() == static_cast<std::size_t>(dim - 1));
      CHECK(cs.c_upper.back() == Approx(cs.c_lower.back()).epsilon(1e-14));
      for (double v : cs.c_upper) CHECK(v >= 0.0);
      for (double v : cs.c_lower) CHECK(v >= 0.0);
      CHECK(sum_rule_defect(x, p) < 1e-13);
      // C^(N) is |q|^2 |p|^2 - (q.p)^2.
      double qp = 0.0;
      for (int a = 0; a < dim; ++a) qp += x.q[a] * x.p[a];
      CHECK(cs.c_upper.back() == Approx(norm2(x.q) * norm2(x.p) - qp * qp).epsilon(1e-12));
    }
  CHECK(ConservedSet::names(3) == std::vector<std::string>{"H", "Cup_2", "Cup_3", "Clow_2", "Clow_3", "I_1", "I_2", "I_3"});
  CHECK(c.flatten().size() == 8u);
}

TEST_CASE("Hamilton's equations match the gradient of H") {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 20; ++i) {
    const PhaseState x = random_state(gen, 3, 2.0);
    const PhaseState d = hamilton_rhs(x, kP3);
    for (int a = 0; a < 3; ++a) {
      const double h = 1e-5;
      PhaseState up = x, dn = x;
      up.p[a] += h;
      dn.p[a] -= h;
      CHECK(d.q[a] == Approx((hamiltonian(up, kP3) - hamiltonian(dn, kP3)) / (2 * h)).epsilon(1e-8).scale(1.0));
      up = x;
      dn = x;
      up.q[a] += h;
      dn.q[a] -= h;
      CHECK(d.p[a] == Approx(-(hamiltonian(up, kP3) - hamiltonian(dn, kP3)) / (2 * h)).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("functional independence of the integrals") {
  std::mt19937_64 gen(17);
  for (int dim : {2, 3}) {
    const ModelParams p = kP3.with_dim(dim);
    for (int trial = 0; trial < 20; ++trial) {
      const PhaseState x = random_state(gen, dim, 1.5);
      // H, C^(2..N), C_(2..N), I_1
      auto values = [&](const PhaseState& s) {
        const auto c = conserved_set(s, p);
        std::vector<double> v{c.energy};
        v.insert(v.end(), c.c_upper.begin(), c.c_upper.end());
        v.insert(v.end(), c.c_lower.begin(), c.c_lower.end());
        v.push_back(c.i_vals[0]);
        return v;
      };
      const auto base = values(x);
      Eigen::MatrixXd jac(base.size(), 2 * dim);
      for (int col = 0; col < 2 * dim; ++col) {
        const double h = 1e-6;
        PhaseState up = x, dn = x;
        auto& cu = col < dim ? up.q[col] : up.p[col - dim];
        auto& cd = col < dim ? dn.q[col] : dn.p[col - dim];
        cu += h;
        cd -= h;
        const auto vu = values(up), vd = values(dn);
        for (std::size_t r = 0; r < base.size(); ++r) jac(r, col) = (vu[r] - vd[r]) / (2 * h);
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > 1e-8 * sv[0] ? 1 : 0;
      CHECK(rank == 2 * dim - 1);
    }
  }
}

TEST_CASE("integration basics") {
  const ModelParams flat(0.0, 1.0, 1.0, 2);
  const PhaseState x0{{1, 0}, {0, 1}};
  const double tol = 1e-10;
  const Trajectory t = integrate_orbit(x0, flat, 2 * kPi, tol);
  CHECK(t.samples.front().t == 0.0);
  CHECK(t.samples.back().t == 2 * kPi);
  CHECK(distance(t.samples.back(), x0) < 10 * tol);
  for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].t > t.samples[i - 1].t);
  CHECK(t.accepted_steps > 0u);

  // Dense samples against the exact flat solution.
  for (const auto& s : t.samples) {
    CHECK(s.q[0] == Approx(std::cos(s.t)).scale(1.0).epsilon(1e-8));
    CHECK(s.q[1] == Approx(std::sin(s.t)).scale(1.0).epsilon(1e-8));
  }
  const PhaseState mid = interpolate(t, 1.234);
  CHECK(mid.q[0] == Approx(std::cos(1.234)).epsilon(1e-8));
  CHECK_THROWS_AS((void)interpolate(t, 7.0), std::out_of_range);

  CHECK_THROWS_AS((void)integrate_orbit(x0, flat, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)integrate_orbit(x0, flat, -1.0, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS((void)integrate_orbit(x0, flat, 1.0, 1e-8, -0.1), std::invalid_argument);
}

TEST_CASE("circular orbit") {
  const double c = 2.0;  // L^2
  const auto m = effective_minimum(EffectivePotentialSpec(kP2, c));
  const double r = m.r_min;
  const double l = std::sqrt(c);
  const PhaseState x0{{r, 0}, {0, l / r}};
  const double period = 2 * kPi * (1 + 0.02 * r * r) * r * r / l;
  const double tol = 1e-10;
  const Trajectory t = integrate_orbit(x0, kP2, 1.6 * period, tol);
  for (const auto& s : t.samples) CHECK(std::sqrt(norm2(s.q)) == Approx(r).epsilon(10 * tol));
  const auto cl = closure_check(t, 1e-6);
  CHECK(cl.is_closed);
  CHECK(cl.period.value() == Approx(period).epsilon(1e-9));
}

TEST_CASE("bounded orbits stay inside the classical region") {
  std::mt19937_64 gen(23);
  for (int i = 0; i < 10; ++i) {
    const PhaseState x0 = random_state(gen, 3, 2.0);
    const double h = hamiltonian(x0, kP3);
    REQUIRE(h < continuum_threshold(kP3));
    // omega^2 q^2 / (2 (1 + lambda q^2)) <= H bounds |q|.
    const double qmax2 = 2 * h / (1.0 - 2 * 0.02 * h);
    const Trajectory t = integrate_orbit(x0, kP3, 60.0, 1e-10);
    for (const auto& s : t.samples) CHECK(norm2(s.q) <= qmax2 * (1 + 1e-9));
  }
}

TEST_CASE("closure against the tau-oscillator period") {
  std::mt19937_64 gen(29);
  for (double lam : {0.01, 0.02, 0.1}) {
    const ModelParams p = kP2.with_lambda(lam);
    for (int i = 0; i < 10; ++i) {
      const PhaseState x0 = random_state(gen, 2, 1.0);
      const Trajectory t = integrate_radial_periods(x0, p, 8.2, 1e-10);
      const auto cl = closure_check(t, 1e-6);
      REQUIRE(cl.is_closed);
      CHECK(cl.multiple == 2);
      CHECK(cl.mismatch < 1e-6);
      CHECK(cl.period.value() == Approx(oracle_period(x0, p)).epsilon(1e-8));
      CHECK(cl.radial_period.value() == Approx(oracle_period(x0, p) / 2).epsilon(1e-8));
    }
  }
  SUBCASE("flat control") {
    const ModelParams flat(0.0, 1.0, 1.0, 2);
    const Trajectory t = integrate_orbit({{1, 0}, {0, 1}}, flat, 5 * kPi, 1e-10);
    const auto cl = closure_check(t, 1e-6);
    CHECK(cl.is_closed);
    CHECK(std::abs(cl.period.value() - 2 * kPi) < 1e-9);
  }
  SUBCASE("three dimensions") {
    const PhaseState x0{{0.7, -0.2, 0.4}, {0.1, 0.9, -0.5}};
    const Trajectory t = integrate_radial_periods(x0, kP3, 5.0, 1e-10);
    const auto cl = closure_check(t, 1e-6);
    CHECK(cl.is_closed);
    CHECK(cl.period.value() == Approx(oracle_period(x0, kP3)).epsilon(1e-8));
  }
  SUBCASE("unbounded orbit") {
    const PhaseState x0{{1, 0}, {0, 10}};
    CHECK(hamiltonian(x0, kP2) > continuum_threshold(kP2));
    const Trajectory t = integrate_orbit(x0, kP2, 20.0, 1e-10);
    const auto cl = closure_check(t, 1e-6);
    CHECK_FALSE(cl.is_closed);
    CHECK_FALSE(cl.period.has_value());
    CHECK_THROWS_AS((void)integrate_radial_periods(x0, kP2, 3.0), std::domain_error);
  }
}

TEST_CASE("conservation along trajectories") {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 5; ++i) {
    const PhaseState x0 = random_state(gen, 3, 1.5);
    const Trajectory t = integrate_radial_periods(x0, kP3, 10.0, 1e-10);
    const DriftReport d = conservation_drift(t);
    CHECK(d.names == ConservedSet::names(3));
    CHECK(d.max() < 1e-8);
    CHECK(t.max_sum_rule_defect < 1e-12);
  }
  // A planar orbit keeps the out-of-plane integrals at exactly zero.
  const PhaseState planar{{1.0, 0.5, 0.0}, {-0.3, 0.8, 0.0}};
  const DriftReport d = conservation_drift(integrate_orbit(planar, kP3, 30.0, 1e-10));
  CHECK(d.max() < 1e-8);
}
