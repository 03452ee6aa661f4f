#include "pdmosc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "pdmosc/classical.hpp"
#include "pdmosc/geometry.hpp"
#include "pdmosc/numverify.hpp"
#include "pdmosc/spectrum.hpp"
#include "pdmosc/table_io.hpp"
#include "pdmosc/wavefun.hpp"

namespace pdmosc::verify {

namespace {

using Clock = std::chrono::steady_clock;

// Worst sub-check so far, measured as the fraction of the tolerance used.
double severity(const SubCheck& c) {
  if (c.tolerance > 0.0) return std::abs(c.measured - c.expected) / c.tolerance;
  return c.passed ? 0.0 : std::numeric_limits<double>::infinity();
}

template <class Body>
CriterionResult timed(int id, std::string name, double limit_s, Body&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.runtime_limit_s = limit_s;
  r.passed = true;
  const auto start = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.expect_true(std::string("exception: ") + e.what(), false);
  }
  r.runtime_s = std::chrono::duration<double>(Clock::now() - start).count();
  if (r.runtime_s > r.runtime_limit_s) r.passed = false;
  return r;
}

double uniform(std::mt19937_64& gen, double a, double b) {
  return a + (b - a) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

PhaseState random_state(std::mt19937_64& gen, int dim, double extent) {
  PhaseState s;
  for (int i = 0; i < dim; ++i) s.q.push_back(uniform(gen, -extent, extent));
  for (int i = 0; i < dim; ++i) s.p.push_back(uniform(gen, -extent, extent));
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// The headline values track the sub-check that used the largest share of its tolerance.
void record(CriterionResult& r, SubCheck c) {
  const bool worst = std::none_of(r.checks.begin(), r.checks.end(),
                                  [&](const SubCheck& o) { return severity(o) >= severity(c); });
  if (worst) {
    r.measured = c.measured;
    r.expected = c.expected;
    r.tolerance = c.tolerance;
  }
  r.passed = r.passed && c.passed;
  r.checks.push_back(std::move(c));
}

}  // namespace

void CriterionResult::expect_near(std::string label, double m, double e, double tol) {
  record(*this, SubCheck{std::move(label), m, e, tol, std::abs(m - e) <= tol});
}

void CriterionResult::expect_below(std::string label, double m, double bound) {
  record(*this, SubCheck{std::move(label), m, 0.0, bound, m >= 0.0 && m < bound});
}

void CriterionResult::expect_true(std::string label, bool ok) {
  checks.push_back(SubCheck{std::move(label), ok ? 1.0 : 0.0, 1.0, 0.0, ok});
  passed = passed && ok;
}

CriterionResult check_effective_minimum() {
  return timed(1, "effective potential minimum (c=100)", 1e-3, [](CriterionResult& r) {
    const ModelParams deformed(0.02, 1.0, 1.0, 3);
    const auto m = effective_minimum(EffectivePotentialSpec(deformed, 100.0));
    r.expect_near("r_min lambda=0.02", m.r_min, 3.49, 0.01);
    r.expect_near("U_min lambda=0.02", m.u_min, 8.2, 0.01);
    const auto m0 = effective_minimum(EffectivePotentialSpec(deformed.with_lambda(0.0), 100.0));
    r.expect_near("r_min lambda=0", m0.r_min, 3.16, 0.01);
    r.expect_near("U_min lambda=0", m0.u_min, 10.0, 0.01);
  });
}

CriterionResult check_potential_limits() {
  return timed(2, "potential limits and threshold", 1e-3, [](CriterionResult& r) {
    const double lambdas[] = {0.02, 0.04, 0.06, 0.1};
    const double limits[] = {25.0, 12.5, 8.33, 5.0};
    for (int i = 0; i < 4; ++i) {
      const ModelParams p(lambdas[i], 1.0, 1.0, 3);
      r.expect_near("U(1e4) lambda=" + fmt(lambdas[i]), potential(1e4, p), limits[i], 0.01);
      r.expect_near("threshold lambda=" + fmt(lambdas[i]), continuum_threshold(p), limits[i], 0.01);
    }
  });
}

CriterionResult check_self_consistency() {
  return timed(3, "spectrum self-consistency", 1.0, [](CriterionResult& r) {
    for (int dim : {1, 2, 3})
      for (double lam : {0.005, 0.02, 0.1})
        for (double w : {0.5, 1.0, 2.0}) {
          const ModelParams p(lam, w, 1.0, dim);
          double worst_res = 0.0;
          double worst_diff = 0.0;
          for (int n = 0; n <= 400; ++n) {
            const double e = energy_closed_form(n, p);
            worst_res = std::max(worst_res, std::abs(implicit_residual(e, n, p)));
            worst_diff = std::max(worst_diff, std::abs(energy_implicit(n, p) - e));
          }
          const std::string tag = "N=" + std::to_string(dim) + " lambda=" + fmt(lam) + " omega=" + fmt(w);
          r.expect_below("residual " + tag, worst_res, 1e-10 * w * w);
          r.expect_below("implicit-vs-closed " + tag, worst_diff, 1e-10);
        }
  });
}

CriterionResult check_oracle_equivalence(const VerifyOptions& opt) {
  return timed(4, "finite-difference oracle equivalence", 30.0, [&](CriterionResult& r) {
    for (double lam : opt.oracle_lambdas)
      for (int dim : {1, 2, 3}) {
        const ModelParams p(lam, 1.0, 1.0, dim);
        const SpectrumTable t = numverify::oracle_report(p, 2, 2);
        for (const auto& row : t.rows) {
          const auto& oc = *row.oracle;
          const std::string tag = "lambda=" + fmt(lam) + " N=" + std::to_string(dim) + " k=" +
                                  std::to_string(oc.k) + " l=" + std::to_string(oc.l);
          r.expect_below("rel_error " + tag, oc.rel_error, 1e-5);
          r.expect_near("order " + tag, oc.convergence_order, 2.0, 0.2);
        }
      }
  });
}

CriterionResult check_degeneracy() {
  return timed(5, "degeneracy", 10.0, [](CriterionResult& r) {
    const ModelParams p(0.02, 1.0, 1.0, 3);
    const auto l0 = numverify::oracle_levels(p, 0, 1);
    const auto l2 = numverify::oracle_levels(p, 2, 0);
    const double a = l0[1].richardson;
    const double b = l2[0].richardson;
    r.expect_below("oracle (k=1,l=0) vs (k=0,l=2) relative", std::abs(a - b) / std::abs(a), 1e-5);
    for (int dim : {2, 3, 4})
      for (int n = 0; n <= 12; ++n) {
        std::uint64_t sum = 0;
        for (int l = n % 2; l <= n; l += 2) sum += harmonic_dimension(l, dim);
        r.expect_true("sum dim_Y = binomial, N=" + std::to_string(dim) + " n=" + std::to_string(n),
                      sum == degeneracy(n, dim));
      }
  });
}

CriterionResult check_accumulation() {
  return timed(6, "accumulation at the continuum threshold", 1.0, [](CriterionResult& r) {
    const ModelParams p(0.02, 1.0, 1.0, 3);
    const double threshold = continuum_threshold(p);
    const SpectrumTable t = spectrum_table(2000, p);
    bool positive = true;
    bool decreasing = true;
    double worst_tail = 0.0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double gap = t.rows[i].gap_to_threshold;
      positive = positive && gap > 0.0;
      if (i > 0) decreasing = decreasing && gap < t.rows[i - 1].gap_to_threshold;
      if (t.rows[i].n >= 300) worst_tail = std::max(worst_tail, gap / threshold);
    }
    r.expect_true("gaps positive for n <= 2000", positive);
    r.expect_true("gaps strictly decreasing for n <= 2000", decreasing);
    r.expect_below("max gap/threshold for 300 <= n <= 2000", worst_tail, 0.01);
  });
}

CriterionResult check_orthonormality() {
  return timed(7, "weighted orthonormality", 5.0, [](CriterionResult& r) {
    const ModelParams p(0.02, 1.0, 1.0, 1);
    std::vector<CartesianEigenfunction> states;
    for (int n = 0; n < 6; ++n) states.push_back(make_cartesian({n}, p));
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = i; j < states.size(); ++j) {
        const double g = weighted_inner_product(states[i], states[j]);
        r.expect_near("G[" + std::to_string(i) + "][" + std::to_string(j) + "]", g, i == j ? 1.0 : 0.0, 1e-6);
      }
  });
}

CriterionResult check_eigenfunction_residual() {
  return timed(8, "eigenfunction residual", 30.0, [](CriterionResult& r) {
    for (int dim : {1, 2}) {
      const ModelParams p(0.02, 1.0, 1.0, dim);
      std::vector<std::vector<int>> tuples;
      if (dim == 1) {
        for (int n = 0; n <= 3; ++n) tuples.push_back({n});
      } else {
        for (int a = 0; a <= 3; ++a)
          for (int b = 0; a + b <= 3; ++b) tuples.push_back({a, b});
      }
      for (const auto& t : tuples) {
        const auto psi = make_cartesian(t, p);
        const double half = 10.0 / psi.beta();
        const int points = dim == 1 ? 801 : 161;
        const double res = numverify::hamiltonian_residual(psi, half, points, 0.025);
        std::string tag = "N=" + std::to_string(dim) + " n=(";
        for (std::size_t i = 0; i < t.size(); ++i) tag += (i ? "," : "") + std::to_string(t[i]);
        r.expect_below(tag + ")", res, 1e-6);
      }
    }
  });
}

CriterionResult check_classical_conservation(const VerifyOptions& opt) {
  return timed(9, "classical conservation", 60.0, [&](CriterionResult& r) {
    const ModelParams p(0.02, 1.0, 1.0, 3);
    std::mt19937_64 gen(opt.seed);
    for (int i = 0; i < 20; ++i) {
      const PhaseState x0 = random_state(gen, 3, 1.5);
      const Trajectory traj = integrate_radial_periods(x0, p, 10.0, 1e-10);
      const DriftReport drift = conservation_drift(traj);
      r.expect_below("orbit " + std::to_string(i) + " max relative drift", drift.max(), 1e-8);
      r.expect_below("orbit " + std::to_string(i) + " |2H - sum I|", traj.max_sum_rule_defect, 1e-12);
    }
  });
}

CriterionResult check_orbit_closure(const VerifyOptions& opt) {
  return timed(10, "orbit closure", 60.0, [&](CriterionResult& r) {
    std::mt19937_64 gen(opt.seed + 1);
    for (double lam : {0.01, 0.1}) {
      const ModelParams p(lam, 1.0, 1.0, 2);
      for (int i = 0; i < 20; ++i) {
        const PhaseState x0 = random_state(gen, 2, 1.0);
        const Trajectory traj = integrate_radial_periods(x0, p, 8.2, 1e-10);
        const ClosureResult c = closure_check(traj, 1e-6);
        const std::string tag = "lambda=" + fmt(lam) + " orbit " + std::to_string(i);
        r.expect_true(tag + " closed at multiple <= 8", c.is_closed && c.multiple >= 1 && c.multiple <= 8);
        r.expect_below(tag + " return distance", c.mismatch, 1e-6);
      }
    }
    constexpr double kTol = 1e-10;
    const ModelParams flat(0.0, 1.0, 1.0, 2);
    const PhaseState x0{{1.0, 0.0}, {0.0, 1.0}, 0.0};
    const Trajectory traj = integrate_orbit(x0, flat, 2.5 * 2.0 * std::numbers::pi, kTol);
    const ClosureResult c = closure_check(traj, 1e-6);
    r.expect_true("lambda=0 control closed", c.is_closed);
    r.expect_near("lambda=0 control period", c.period.value_or(0.0), 2.0 * std::numbers::pi, 10.0 * kTol);
  });
}

CriterionResult check_deformation_generality() {
  return timed(11, "deformation of an arbitrary base spectrum", 1.0, [](CriterionResult& r) {
    const ModelParams p(0.02, 1.0, 1.0, 3);
    const BaseSpectrum base = harmonic_base(3, 1.0);
    double worst = 0.0;
    double worst_flat = 0.0;
    const ModelParams tiny = p.with_lambda(1e-12);
    for (int n = 0; n <= 50; ++n) {
      worst = std::max(worst, std::abs(solve_deformed_spectrum(base, n, p) - energy_closed_form(n, p)));
      worst_flat = std::max(worst_flat, std::abs(solve_deformed_spectrum(base, n, tiny) - base.eval(1.0, n)));
    }
    r.expect_below("harmonic base vs closed form, n <= 50", worst, 1e-10);
    r.expect_below("lambda=1e-12 vs base spectrum, n <= 50", worst_flat, 1e-6);
  });
}

std::vector<CriterionResult> run_all(const VerifyOptions& opt) {
  return {check_effective_minimum(),   check_potential_limits(),        check_self_consistency(),
          check_oracle_equivalence(opt), check_degeneracy(),        check_accumulation(),
          check_orthonormality(),    check_eigenfunction_residual(), check_classical_conservation(opt),
          check_orbit_closure(opt),  check_deformation_generality()};
}

nlohmann::json to_json(const CriterionResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"label", c.label},
                      {"measured", io::json_number(c.measured)},
                      {"expected", io::json_number(c.expected)},
                      {"tolerance", io::json_number(c.tolerance)},
                      {"passed", c.passed}});
  return {{"id", r.id},
          {"name", r.name},
          {"passed", r.passed},
          {"measured", io::json_number(r.measured)},
          {"expected", io::json_number(r.expected)},
          {"tolerance", io::json_number(r.tolerance)},
          {"runtime_s", r.runtime_s},
          {"runtime_limit_s", r.runtime_limit_s},
          {"checks", checks}};
}

nlohmann::json to_json(const std::vector<CriterionResult>& rs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rs) arr.push_back(to_json(r));
  return arr;
}

std::string summary_line(const CriterionResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "[%s] %2d %-44s measured %.10g (expected %.10g, tol %.1e), %.3f s / %.3g s",
                r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured, r.expected, r.tolerance, r.runtime_s,
                r.runtime_limit_s);
  return buf;
}

}  // namespace pdmosc::verify
