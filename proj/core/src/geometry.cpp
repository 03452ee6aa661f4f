#include "pdmosc/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdmosc {

namespace {

void require_nonnegative_radius(double r) {
  if (std::isnan(r) || r < 0.0)
    throw std::domain_error("radius must be >= 0");
}

}  // namespace

EffectivePotentialSpec::EffectivePotentialSpec(const ModelParams& p, double c)
    : params(p), c_n(c) {
  if (!std::isfinite(c) || c < 0.0)
    throw std::invalid_argument("c_N must be finite and >= 0");
}

double metric_factor(double r, const ModelParams& p) {
  require_nonnegative_radius(r);
  return 1.0 + p.lambda() * r * r;
}

double scalar_curvature(double r, const ModelParams& p) {
  require_nonnegative_radius(r);
  const double lam = p.lambda();
  const double n = p.dim();
  if (lam == 0.0 || p.dim() == 1) return 0.0;
  if (std::isinf(r)) return 0.0;
  const double lr2 = lam * r * r;
  const double m = 1.0 + lr2;
  return -lam * (n - 1.0) * (n * (2.0 + 3.0 * lr2) - 6.0 * lr2) / (m * m * m);
}

double potential(double r, const ModelParams& p) {
  require_nonnegative_radius(r);
  const double w2 = p.omega() * p.omega();
  if (std::isinf(r)) {
    return p.deformed() ? w2 / (2.0 * p.lambda())
                        : (w2 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  }
  return w2 * r * r / (2.0 * (1.0 + p.lambda() * r * r));
}

double effective_potential(double r, const EffectivePotentialSpec& s) {
  require_nonnegative_radius(r);
  if (r == 0.0) {
    if (s.c_n > 0.0)
      throw std::domain_error("effective potential is singular at r = 0 for c_N > 0");
    return 0.0;
  }
  if (std::isinf(r)) return potential(r, s.params);
  const double m = 1.0 + s.params.lambda() * r * r;
  return s.c_n / (2.0 * m * r * r) + potential(r, s.params);
}

EffectiveMinimum effective_minimum(const EffectivePotentialSpec& s) {
  const double w2 = s.params.omega() * s.params.omega();
  if (w2 == 0.0) throw std::domain_error("effective potential has no minimum for omega = 0");
  if (s.c_n == 0.0) throw std::domain_error("effective potential minimum requires c_N > 0");
  const double lc = s.params.lambda() * s.c_n;
  const double root = std::sqrt(lc * lc + w2 * s.c_n);
  // root - lc loses digits when lc dominates; use the conjugate form.
  const double u_min = w2 * s.c_n / (root + lc);
  const double r2 = (lc + root) / w2;
  return {std::sqrt(r2), u_min};
}

double canonical_Q(double r, const ModelParams& p) {
  require_nonnegative_radius(r);
  const double lam = p.lambda();
  if (lam == 0.0) return r;
  const double sl = std::sqrt(lam);
  const double x = sl * r;
  if (x < 1e-4) {
    // r + lambda r^3/6 - lambda^2 r^5/40 avoids cancellation in asinh(x)/sl.
    const double x2 = x * x;
    return r * (1.0 + x2 / 6.0 - x2 * x2 / 40.0);
  }
  return 0.5 * r * std::sqrt(1.0 + x * x) + std::asinh(x) / (2.0 * sl);
}

double canonical_P(double r, double p_r, const ModelParams& p) {
  return p_r / std::sqrt(metric_factor(r, p));
}

double radial_hamiltonian(double r, double p_r, double l_squared, const ModelParams& p) {
  require_nonnegative_radius(r);
  const double w2 = p.omega() * p.omega();
  const double m = metric_factor(r, p);
  double centrifugal = 0.0;
  if (l_squared > 0.0) {
    if (r == 0.0) throw std::domain_error("centrifugal term singular at r = 0");
    centrifugal = l_squared / (r * r);
  }
  return (p_r * p_r + centrifugal + w2 * r * r) / (2.0 * m);
}

}  // namespace pdmosc
