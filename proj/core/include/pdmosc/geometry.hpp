#pragma once

// Metric, curvature and radial potentials of the deformed oscillator.
//
// The configuration space is R^N with the conformally flat metric
//   ds^2 = (1 + lambda r^2) dq^2,
// equivalently a position-dependent mass m(q) = 1 + lambda q^2.
// All functions here are pure.

#include "pdmosc/params.hpp"

namespace pdmosc {

/// Radial potential parameters: model plus the value c_N of the total
/// squared angular momentum L^2.
struct EffectivePotentialSpec {
  EffectivePotentialSpec(const ModelParams& p, double c_n);

  ModelParams params;
  double c_n;
};

struct EffectiveMinimum {
  double r_min;
  double u_min;
};

/// 1 + lambda r^2.
[[nodiscard]] double metric_factor(double r, const ModelParams& p);

/// Scalar curvature R(r) of the metric. Identically zero for N = 1 or lambda = 0.
[[nodiscard]] double scalar_curvature(double r, const ModelParams& p);

/// omega^2 r^2 / (2 (1 + lambda r^2)). Pass r = +inf for the asymptote.
[[nodiscard]] double potential(double r, const ModelParams& p);

/// c_N / (2 (1 + lambda r^2) r^2) + omega^2 r^2 / (2 (1 + lambda r^2)).
/// Throws std::domain_error at r = 0 when c_N > 0.
[[nodiscard]] double effective_potential(double r, const EffectivePotentialSpec& s);

/// Closed-form location and value of the effective potential minimum.
/// Throws std::domain_error if omega == 0 or c_N == 0 (no interior minimum).
[[nodiscard]] EffectiveMinimum effective_minimum(const EffectivePotentialSpec& s);

/// Flattening coordinate Q(r) with dQ/dr = sqrt(1 + lambda r^2).
/// Reduces to Q = r at lambda = 0.
[[nodiscard]] double canonical_Q(double r, const ModelParams& p);

/// Conjugate momentum P = p_r / sqrt(1 + lambda r^2).
[[nodiscard]] double canonical_P(double r, double p_r, const ModelParams& p);

/// Hyperspherical Hamiltonian (p_r^2 + L^2 / r^2 + omega^2 r^2) / (2 (1 + lambda r^2)).
[[nodiscard]] double radial_hamiltonian(double r, double p_r, double l_squared,
                                        const ModelParams& p);

}  // namespace pdmosc
