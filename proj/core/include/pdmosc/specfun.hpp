#pragma once

// Orthogonal polynomials and quadrature used to build and normalize
// eigenfunctions.

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace pdmosc::specfun {

/// Physicists' Hermite polynomial H_n(x) by three-term recurrence.
/// Overflows for n beyond ~150 at moderate |x|; use hermite_function there.
[[nodiscard]] double hermite(int n, double x);

/// Orthonormal Hermite function
///   h_n(x) = (2^n n! sqrt(pi))^{-1/2} exp(-x^2/2) H_n(x),
/// evaluated with the normalized recurrence so it stays finite for large n.
[[nodiscard]] double hermite_function(int n, double x);

/// Generalized Laguerre polynomial L_k^{(alpha)}(x), alpha > -1.
[[nodiscard]] double laguerre(int k, double alpha, double x);

/// Normalized Laguerre function
///   sqrt(k! / Gamma(k+alpha+1)) x^{alpha/2} exp(-x/2) L_k^{(alpha)}(x),
/// orthonormal on [0, inf) with respect to dx. Requires x > 0 when alpha < 0.
[[nodiscard]] double laguerre_function(int k, double alpha, double x);

enum class QuadratureKind {
  adaptive_interval,      ///< finite [lower, upper]
  half_line_with_decay,   ///< one or both bounds infinite; integrand decays
};

struct QuadratureSpec {
  QuadratureKind kind = QuadratureKind::adaptive_interval;
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_refinements = 2000;

  void validate() const;
};

/// Integration domain. Infinite bounds are allowed for half_line_with_decay;
/// `scale` is the decay length used to pick the truncation radius
/// (e.g. 1/beta for a Gaussian of width beta).
struct Domain {
  double lower;
  double upper;
  double scale = 1.0;

  static Domain interval(double a, double b) { return {a, b, 1.0}; }
  static Domain half_line(double a, double scale) {
    return {a, std::numeric_limits<double>::infinity(), scale};
  }
  static Domain real_line(double scale) {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), scale};
  }
};

struct QuadratureResult {
  double value;
  double error_estimate;
  int intervals;
};

/// Thrown when the adaptive scheme cannot meet the tolerance within
/// max_refinements subdivisions. Carries the last estimate.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, QuadratureResult last)
      : std::runtime_error(what), last_(last) {}
  [[nodiscard]] const QuadratureResult& last_estimate() const noexcept { return last_; }

private:
  QuadratureResult last_;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) integration with global error control.
[[nodiscard]] QuadratureResult integrate(const Integrand& f, const Domain& domain,
                                         const QuadratureSpec& spec = {});

}  // namespace pdmosc::specfun
