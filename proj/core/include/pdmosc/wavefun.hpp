#pragma once

// Bound-state eigenfunctions and the weighted scalar product
//   <f|g>_lambda = integral f(q) g(q) (1 + lambda q^2) dq,
// the space in which the position-dependent-mass Hamiltonian is self-adjoint.
//
// Eigenfunctions are stored as a scale times a product of flat-normalized
// factors (Hermite functions or normalized Laguerre functions), which keeps
// evaluation finite for large quantum numbers. `norm_constant()` reports the
// equivalent multiplier of the raw polynomial form exp(-beta^2 q^2/2) H_n(beta q)
// (resp. r^l exp(-beta^2 r^2/2) L_k(beta^2 r^2)); it underflows for n beyond ~170.

#include <span>

#include "pdmosc/params.hpp"
#include "pdmosc/specfun.hpp"
#include "pdmosc/spectrum.hpp"

namespace pdmosc {

class CartesianEigenfunction {
public:
  /// Unit-scale product of flat-normalized Hermite factors.
  /// Throws std::invalid_argument if the state is not a self-consistent
  /// Cartesian bound state of `params`.
  CartesianEigenfunction(QuantumState state, const ModelParams& params);

  [[nodiscard]] const QuantumState& state() const noexcept { return state_; }
  [[nodiscard]] const ModelParams& params() const noexcept { return params_; }
  [[nodiscard]] double beta() const noexcept { return state_.beta; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] double norm_constant() const;

  /// sqrt(beta) h_{n_i}(beta x): the i-th factor, unit norm in L^2(R, dx).
  [[nodiscard]] double factor(std::size_t i, double x) const;

  [[nodiscard]] double operator()(std::span<const double> q) const;

  [[nodiscard]] CartesianEigenfunction rescaled(double scale) const;

private:
  QuantumState state_;
  ModelParams params_;
  double scale_ = 1.0;
};

class RadialEigenfunction {
public:
  /// Unit-scale radial function, normalized against r^{N-1} dr.
  RadialEigenfunction(QuantumState state, const ModelParams& params);

  [[nodiscard]] const QuantumState& state() const noexcept { return state_; }
  [[nodiscard]] const ModelParams& params() const noexcept { return params_; }
  [[nodiscard]] int k() const noexcept { return state_.k; }
  [[nodiscard]] int l() const noexcept { return state_.l; }
  [[nodiscard]] double energy() const noexcept { return state_.energy; }
  [[nodiscard]] double beta() const noexcept { return state_.beta; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  /// Laguerre index l + (N-2)/2.
  [[nodiscard]] double alpha() const noexcept { return state_.l + 0.5 * (params_.dim() - 2); }
  [[nodiscard]] double norm_constant() const;

  [[nodiscard]] double operator()(double r) const;

  [[nodiscard]] RadialEigenfunction rescaled(double scale) const;

private:
  QuantumState state_;
  ModelParams params_;
  double scale_ = 1.0;
};

/// Convenience: normalized eigenfunctions straight from quantum numbers.
[[nodiscard]] CartesianEigenfunction make_cartesian(std::vector<int> n_tuple, const ModelParams& p);
[[nodiscard]] RadialEigenfunction make_radial(int k, int l, const ModelParams& p);

[[nodiscard]] double cartesian_eigenfunction_value(const CartesianEigenfunction& f,
                                                   std::span<const double> q);
/// Throws std::domain_error for r < 0.
[[nodiscard]] double radial_eigenfunction_value(const RadialEigenfunction& f, double r);

/// Weighted scalar product of two Cartesian eigenfunctions of the same model.
/// The product structure reduces it to one-dimensional quadratures.
[[nodiscard]] double weighted_inner_product(const CartesianEigenfunction& f,
                                            const CartesianEigenfunction& g);

/// Weighted radial scalar product with measure (1 + lambda r^2) r^{N-1} dr.
/// Both functions are taken with the same orthonormal angular factor, so
/// states with different l are orthogonal and give exactly 0.
[[nodiscard]] double weighted_inner_product(const RadialEigenfunction& f,
                                            const RadialEigenfunction& g);

/// Weighted product of arbitrary functions on the real line (N = 1).
/// `decay_scale` is the length over which the integrand becomes negligible.
[[nodiscard]] double weighted_inner_product_1d(const specfun::Integrand& f,
                                               const specfun::Integrand& g,
                                               const ModelParams& p, double decay_scale);

/// Weighted radial product of arbitrary functions on [0, inf).
[[nodiscard]] double weighted_radial_inner_product(const specfun::Integrand& f,
                                                   const specfun::Integrand& g,
                                                   const ModelParams& p, double decay_scale);

/// Rescale so that <f|f>_lambda = 1. Throws std::domain_error for a zero function.
[[nodiscard]] CartesianEigenfunction normalize(const CartesianEigenfunction& f);
[[nodiscard]] RadialEigenfunction normalize(const RadialEigenfunction& f);

/// Real circular harmonic on S^1: m = 0 constant, m > 0 cos(m phi), m < 0 sin(|m| phi),
/// orthonormal on [0, 2 pi).
[[nodiscard]] double circular_harmonic(int m, double phi);

/// Real spherical harmonic on S^2 (orthonormal), |m| <= l; m < 0 selects sin(|m| phi).
[[nodiscard]] double spherical_harmonic(int l, int m, double theta, double phi);

/// Full eigenfunction phi_{k,l}(r) Y(angles) at a Cartesian point, N = 2 or 3.
/// For N = 2 the angular label `m` must satisfy |m| = l; for N = 3, |m| <= l.
[[nodiscard]] double hyperspherical_eigenfunction_value(const RadialEigenfunction& f, int m,
                                                        std::span<const double> q);

}  // namespace pdmosc
