#pragma once

// Classical dynamics of
//   H(q, p) = (p^2 + omega^2 q^2) / (2 (1 + lambda q^2)),  q, p in R^N,
// its 2N - 1 constants of motion, and orbit-closure detection.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdmosc/params.hpp"

namespace pdmosc {

struct PhaseState {
  std::vector<double> q;
  std::vector<double> p;
  double t = 0.0;

  [[nodiscard]] std::size_t dim() const noexcept { return q.size(); }
};

/// H, the angular integrals C^(m) = sum_{1<=i<j<=m} (q_i p_j - q_j p_i)^2 and
/// C_(m) = sum_{N-m<i<j<=N} (...)^2 for m = 2..N, and
/// I_i = p_i^2 - (2 lambda H - omega^2) q_i^2.
struct ConservedSet {
  double energy = 0.0;
  std::vector<double> c_upper;  ///< c_upper[m-2] = C^(m)
  std::vector<double> c_lower;  ///< c_lower[m-2] = C_(m)
  std::vector<double> i_vals;   ///< i_vals[i] = I_{i+1}

  /// All values flattened as H, C^(2..N), C_(2..N), I_1..I_N with their names.
  [[nodiscard]] std::vector<double> flatten() const;
  [[nodiscard]] static std::vector<std::string> names(int dim);
};

[[nodiscard]] double hamiltonian(const PhaseState& s, const ModelParams& p);
[[nodiscard]] ConservedSet conserved_set(const PhaseState& s, const ModelParams& p);

/// |2 H - sum_i I_i|, zero up to rounding.
[[nodiscard]] double sum_rule_defect(const PhaseState& s, const ModelParams& p);

/// Time derivative (dq/dt, dp/dt) from Hamilton's equations.
[[nodiscard]] PhaseState hamilton_rhs(const PhaseState& s, const ModelParams& p);

class StepSizeUnderflow : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Trajectory {
  ModelParams params;
  double tol = 0.0;
  std::vector<PhaseState> samples;     ///< time-ordered, first = initial state, last at t_end
  std::size_t accepted_steps = 0;
  double max_sum_rule_defect = 0.0;    ///< max |2H - sum I_i| / max(1, |H|) over accepted steps
};

/// Dormand-Prince 5(4) with error control (abs = rel = tol) and dense output at
/// multiples of `sample_dt` (0 selects 0.01 / omega). Throws StepSizeUnderflow
/// when the controller cannot make progress.
[[nodiscard]] Trajectory integrate_orbit(const PhaseState& initial, const ModelParams& p, double t_end,
                                         double tol = 1e-10, double sample_dt = 0.0);

/// State at time t by cubic Hermite interpolation between samples, using the
/// vector field for the slopes.
[[nodiscard]] PhaseState interpolate(const Trajectory& traj, double t);

/// Times of the minima of |q| located to interpolation accuracy.
[[nodiscard]] std::vector<double> radial_minima(const Trajectory& traj);

/// Mean spacing of successive |q| minima; empty with fewer than two minima.
[[nodiscard]] std::optional<double> radial_period(const Trajectory& traj);

struct ClosureResult {
  bool is_closed = false;
  std::optional<double> period;
  std::optional<double> radial_period;
  int multiple = 0;            ///< period / radial_period when closed via radial detection
  double mismatch = 0.0;       ///< phase-space distance at the reported (or best) candidate
};

/// Smallest T (a multiple <= 8 of the radial period, or the first return of a
/// circular orbit) with ||(q,p)(t0+T) - (q,p)(t0)|| < tol.
[[nodiscard]] ClosureResult closure_check(const Trajectory& traj, double tol);

/// Integrate long enough to cover `periods` radial periods (measured on a probe run).
[[nodiscard]] Trajectory integrate_radial_periods(const PhaseState& initial, const ModelParams& p,
                                                  double periods, double tol = 1e-10);

/// Per-invariant drift max_t |Q(t) - Q(0)| / ref, where ref = |Q(0)| unless that
/// is negligible, in which case a scale built from max |q| and max |p| is used.
struct DriftReport {
  std::vector<std::string> names;
  std::vector<double> relative_drift;
  [[nodiscard]] double max() const;
};

[[nodiscard]] DriftReport conservation_drift(const Trajectory& traj);

}  // namespace pdmosc
