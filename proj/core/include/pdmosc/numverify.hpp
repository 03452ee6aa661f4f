#pragma once

// Independent numerical checks of the closed-form spectrum.
//
// The radial equation is discretized directly in its self-adjoint form with
// the position-dependent mass kept as a weight on the right-hand side,
//   -(hbar^2/2) (r^{N-1} phi')' + (hbar^2 l(l+N-2)/(2 r^2) + omega^2 r^2/2) r^{N-1} phi
//     = E (1 + lambda r^2) r^{N-1} phi,
// giving a generalized problem A u = E B u with A symmetric tridiagonal and B
// positive diagonal. Nothing here uses the energy-dependent frequency trick,
// except for choosing a box large enough to hold the requested states.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pdmosc/params.hpp"
#include "pdmosc/spectrum.hpp"
#include "pdmosc/wavefun.hpp"

namespace pdmosc::numverify {

/// Uniform grid r_min + i * spacing, i = 0..num_points-1.
struct RadialGrid {
  RadialGrid(double r_min, double r_max, int num_points);

  double r_min;
  double r_max;
  int num_points;

  [[nodiscard]] double spacing() const noexcept { return (r_max - r_min) / (num_points - 1); }
  [[nodiscard]] double node(int i) const noexcept { return r_min + i * spacing(); }
  /// Same end points with the spacing halved.
  [[nodiscard]] RadialGrid refined() const { return {r_min, r_max, 2 * num_points - 1}; }
};

/// Box sized for the states (k <= k_max, l): r_max = max(12/beta, 3 r_turn),
/// r_min = 1e-6, 4000 points.
[[nodiscard]] RadialGrid default_grid(const ModelParams& p, int l, int k_max);

/// Generalized tridiagonal problem A u = E B u on the free nodes of a grid.
/// The outer end carries a Dirichlet condition. The inner end is Dirichlet
/// for l >= 1 and a zero-flux (reflective) half cell for l = 0, whose mass
/// entry is half the nodal weight.
struct DiscretizedOperator {
  std::vector<double> diag;       ///< A_ii
  std::vector<double> offdiag;    ///< A_{i,i+1}
  std::vector<double> mass;       ///< B_ii > 0
  std::vector<double> radii;      ///< r of each free node
  int first_node = 0;             ///< grid index of radii[0]
  int l = 0;
  double spacing = 0.0;

  [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
};

[[nodiscard]] DiscretizedOperator discretize_radial(const ModelParams& p, int l, const RadialGrid& grid);

/// Symmetric tridiagonal matrix.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
};

/// B^{-1/2} A B^{-1/2}. Throws std::domain_error for a non-positive mass entry.
[[nodiscard]] Tridiagonal symmetric_reduction(const DiscretizedOperator& op);

/// Number of eigenvalues of `t` strictly below x (Sturm sequence count).
[[nodiscard]] std::size_t sturm_count(const Tridiagonal& t, double x);

/// j-th smallest eigenvalue (0-based) by Sturm bisection.
[[nodiscard]] double tridiagonal_eigenvalue(const Tridiagonal& t, std::size_t j);

/// Eigenvector for a known eigenvalue by inverse iteration (unit 2-norm).
[[nodiscard]] std::vector<double> tridiagonal_eigenvector(const Tridiagonal& t, double eigenvalue);

/// The `count` smallest eigenvalues of A u = E B u in ascending order.
/// Requires count <= num_points / 4.
[[nodiscard]] std::vector<double> solve_generalized_eigen(const DiscretizedOperator& op, int count);

struct Eigenpair {
  double value;
  std::vector<double> vector;   ///< phi at op.radii, normalized to sum B_ii phi_i^2 = 1
  int sign_changes;
  double tail_mass;              ///< weighted mass in the outer 10% of the box
  bool boundary_contaminated;    ///< tail_mass > 1%
};

[[nodiscard]] std::vector<Eigenpair> solve_generalized_eigenpairs(const DiscretizedOperator& op,
                                                                  int count, const RadialGrid& grid);

/// One radial level computed on grids h, h/2, h/4.
struct OracleLevel {
  int k = 0;
  int l = 0;
  double coarse = 0.0;        ///< spacing h
  double fine = 0.0;          ///< spacing h/2
  double finest = 0.0;        ///< spacing h/4
  double richardson = 0.0;    ///< (4 fine - coarse) / 3
  double order = 0.0;         ///< log2((coarse - fine) / (fine - finest))
  bool boundary_contaminated = false;
  int sign_changes = 0;
};

/// Oracle levels k = 0..k_max for one angular number l. A null grid selects
/// default_grid(p, l, k_max).
[[nodiscard]] std::vector<OracleLevel> oracle_levels(const ModelParams& p, int l, int k_max,
                                                     const RadialGrid* grid = nullptr);

/// Oracle versus closed form for all k <= k_max, l <= l_max (l <= 1 when N = 1).
/// Rows are sorted by (n, l) and carry OracleColumns.
[[nodiscard]] SpectrumTable oracle_report(const ModelParams& p, int l_max, int k_max,
                                          const RadialGrid* grid = nullptr);

/// Square grid [-half_width, half_width]^2 with `points` nodes per side.
/// The finite-difference step of the discretized Hamiltonian equals the grid spacing.
struct Grid2D {
  double half_width = 6.0;
  int points = 121;
  [[nodiscard]] double spacing() const noexcept { return 2.0 * half_width / (points - 1); }
};

using Function2D = std::function<double(double, double)>;

struct CommutationReport {
  double residual = 0.0;                 ///< max over test functions
  std::vector<double> per_function;
  double spacing = 0.0;
};

/// Angle step of the rotational stencil used for L^2.
inline constexpr double kRotationStep = 0.05;

/// -hbar^2 d^2/dtheta^2 via rotations of the argument by +-kRotationStep.
/// Exact (to rounding) on radial functions.
[[nodiscard]] double apply_angular_momentum_sq(const Function2D& f, const ModelParams& p, double x, double y);

/// H f with the 5-point Cartesian Laplacian of step h.
[[nodiscard]] double apply_hamiltonian_2d(const Function2D& f, const ModelParams& p, double x, double y,
                                          double h);

/// || (H L^2 - L^2 H) f || / || f || over the grid nodes for one function.
[[nodiscard]] double commutator_residual(const Function2D& f, const ModelParams& p, const Grid2D& grid);

/// Max commutator residual over 5 fixed-seed smooth Gaussian-polynomial test functions.
/// Requires N = 2.
[[nodiscard]] CommutationReport commutation_residual_2d(const ModelParams& p, const Grid2D& grid);

/// The fixed test functions used by commutation_residual_2d.
[[nodiscard]] std::vector<Function2D> commutation_test_functions();

/// Relative residual || H psi - E psi || / || psi || of a Cartesian eigenfunction
/// on the cube [-half_width, half_width]^N with `points` nodes per axis, using an
/// 8th-order central difference of step h for the Laplacian.
[[nodiscard]] double hamiltonian_residual(const CartesianEigenfunction& psi, double half_width,
                                          int points, double h);

/// Same for an eigenfunction given in hyperspherical form (N = 2 or 3).
[[nodiscard]] double hamiltonian_residual(const RadialEigenfunction& psi, int m, double half_width,
                                          int points, double h);

/// Residual of the one-dimensional factor equation
///   (-hbar^2 d^2/dq^2 + (omega^2 - 2 lambda E) q^2) psi_i = 2 mu_i psi_i
/// for factor i of a Cartesian eigenfunction, relative to || psi_i ||.
[[nodiscard]] double factor_equation_residual(const CartesianEigenfunction& psi, std::size_t i,
                                              double half_width, int points, double h);

}  // namespace pdmosc::numverify
