#pragma once

// End-to-end verification checks. Each check measures one property of the
// model against a pinned expected value and tolerance, and records its runtime.
// Used by the acceptance test binary and by `pdmosc verify-all`.

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace pdmosc::verify {

struct SubCheck {
  std::string label;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;      ///< worst-case measured quantity
  double expected = 0.0;
  double tolerance = 0.0;
  double runtime_s = 0.0;
  double runtime_limit_s = 0.0;
  std::vector<SubCheck> checks;

  /// Adds a check |measured - expected| <= tolerance and updates the summary.
  void expect_near(std::string label, double measured, double expected, double tolerance);
  /// Adds a check measured < bound.
  void expect_below(std::string label, double measured, double bound);
  void expect_true(std::string label, bool ok);
};

struct VerifyOptions {
  std::vector<double> oracle_lambdas{0.0, 0.02, 0.1};
  std::uint64_t seed = 20240611ULL;
};

[[nodiscard]] CriterionResult check_effective_minimum();
[[nodiscard]] CriterionResult check_potential_limits();
[[nodiscard]] CriterionResult check_self_consistency();
[[nodiscard]] CriterionResult check_oracle_equivalence(const VerifyOptions& opt = {});
[[nodiscard]] CriterionResult check_degeneracy();
[[nodiscard]] CriterionResult check_accumulation();
[[nodiscard]] CriterionResult check_orthonormality();
[[nodiscard]] CriterionResult check_eigenfunction_residual();
[[nodiscard]] CriterionResult check_classical_conservation(const VerifyOptions& opt = {});
[[nodiscard]] CriterionResult check_orbit_closure(const VerifyOptions& opt = {});
[[nodiscard]] CriterionResult check_deformation_generality();

[[nodiscard]] std::vector<CriterionResult> run_all(const VerifyOptions& opt = {});

[[nodiscard]] nlohmann::json to_json(const CriterionResult& r);
[[nodiscard]] nlohmann::json to_json(const std::vector<CriterionResult>& rs);

/// "[PASS] 4 oracle equivalence ... (0.83 s)"
[[nodiscard]] std::string summary_line(const CriterionResult& r);

}  // namespace pdmosc::verify
