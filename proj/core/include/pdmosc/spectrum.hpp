#pragma once

// Discrete spectrum of the deformed oscillator.
//
// The Hamiltonian separates into one-dimensional oscillators whose common
// frequency depends on the energy being sought:
//   Omega(E) = sqrt(omega^2 - 2 lambda E),   E = hbar Omega(E) (n + N/2).
// This header exposes the closed-form root of that equation, an independent
// bisection solver for it, and the same fixed-point construction applied to an
// arbitrary base spectrum.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdmosc/params.hpp"

namespace pdmosc {

enum class StateMode { cartesian, radial };

/// Quantum numbers of one eigenstate with its self-consistent energy.
///
/// In Cartesian mode `n_tuple` holds (n_1..n_N) and n = sum n_i.
/// In radial mode `k`, `l` hold the radial and angular numbers and n = 2k + l.
/// `beta` is the Gaussian width sqrt(Omega(E)/hbar).
struct QuantumState {
  StateMode mode = StateMode::cartesian;
  std::vector<int> n_tuple;
  int k = 0;
  int l = 0;
  int n = 0;
  double energy = 0.0;
  double beta = 0.0;

  static QuantumState cartesian(std::vector<int> n_tuple, const ModelParams& p);
  static QuantumState radial(int k, int l, const ModelParams& p);

  /// Eigenvalue mu_i = hbar Omega (n_i + 1/2) of I_i / 2 (Cartesian mode).
  [[nodiscard]] double factor_eigenvalue(std::size_t i, const ModelParams& p) const;
};

/// Thrown by the deformation solver when the base spectrum misbehaves.
class DeformationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Spectrum E(omega', n) of a solvable constant-mass problem whose potential
/// scales as omega'^2. Must be continuous and strictly increasing in omega'.
struct BaseSpectrum {
  std::function<double(double frequency, int n)> eval;
  bool monotone_in_frequency = true;
  std::string name = "custom";
};

/// Isotropic N-dimensional oscillator hbar omega' (n + N/2).
[[nodiscard]] BaseSpectrum harmonic_base(int dim, double hbar);

/// sqrt(omega^2 - 2 lambda E). Throws std::domain_error when omega^2 <= 2 lambda E.
[[nodiscard]] double omega_of_energy(double energy, const ModelParams& p);

/// Closed-form bound-state energy E_n. Valid for lambda >= 0 and all n >= 0.
[[nodiscard]] double energy_closed_form(int n, const ModelParams& p);

/// Root of hbar Omega(E) (n + N/2) - E on [0, omega^2/(2 lambda)) by bisection.
/// Requires lambda > 0.
[[nodiscard]] double energy_implicit(int n, const ModelParams& p, double tol = 1e-12);

/// E - hbar Omega(E) (n + N/2); zero at an eigenvalue. Uses Omega = 0 past the threshold.
[[nodiscard]] double implicit_residual(double energy, int n, const ModelParams& p);

/// Number of tuples (n_1..n_N) >= 0 with sum n, i.e. binomial(n+N-1, N-1).
/// Throws std::overflow_error if the result does not fit in 64 bits.
[[nodiscard]] std::uint64_t degeneracy(int n, int dim);

/// Dimension of the space of degree-l hyperspherical harmonics on S^{N-1}.
[[nodiscard]] std::uint64_t harmonic_dimension(int l, int dim);

/// Bottom of the continuous spectrum, omega^2 / (2 lambda).
/// Returns +infinity for lambda = 0 (no continuum).
[[nodiscard]] double continuum_threshold(const ModelParams& p);

/// Solve E = base.eval(sqrt(omega^2 - 2 lambda E), n) by bisection.
/// At lambda = 0 the deformation is absent and base.eval(omega, n) is returned.
[[nodiscard]] double solve_deformed_spectrum(const BaseSpectrum& base, int n,
                                             const ModelParams& p, double tol = 1e-12);

enum class Provenance { closed_form, oracle };

/// Extra columns carried by rows produced by the finite-difference oracle.
struct OracleColumns {
  int k = 0;
  int l = 0;
  double closed_form = 0.0;
  double rel_error = 0.0;
  double convergence_order = 0.0;
  bool boundary_contaminated = false;
};

struct SpectrumRow {
  int n = 0;
  double energy = 0.0;
  std::uint64_t degeneracy = 0;
  double gap_to_threshold = 0.0;
  double residual = 0.0;
  std::optional<OracleColumns> oracle;
};

struct SpectrumTable {
  ModelParams params;
  Provenance provenance = Provenance::closed_form;
  std::vector<SpectrumRow> rows;
};

inline constexpr int kSpectrumTableMaxN = 100000;

/// Rows (n, E_n, degeneracy, threshold - E_n, implicit residual) for n = 0..n_max.
[[nodiscard]] SpectrumTable spectrum_table(int n_max, const ModelParams& p);

}  // namespace pdmosc
