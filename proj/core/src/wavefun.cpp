#include "pdmosc/wavefun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pdmosc {

namespace {

using specfun::Domain;
using specfun::QuadratureKind;
using specfun::QuadratureSpec;

constexpr QuadratureSpec kInnerProductSpec{QuadratureKind::half_line_with_decay, 1e-15, 1e-13, 4000};

void check_self_consistent(const QuantumState& s, const ModelParams& p) {
  const double expected = energy_closed_form(s.n, p);
  if (!(std::abs(s.energy - expected) <= 1e-9 * std::max(1.0, expected)))
    throw std::invalid_argument("state energy does not solve the self-consistency equation");
}

QuantumState validated(QuantumState s, const ModelParams& p, StateMode mode) {
  if (s.mode != mode) throw std::invalid_argument("eigenfunction built from a state of the wrong mode");
  check_self_consistent(s, p);
  // Continuum states have no Gaussian width; omega_of_energy throws for them.
  s.beta = std::sqrt(omega_of_energy(s.energy, p) / p.hbar());
  return s;
}

}  // namespace

CartesianEigenfunction::CartesianEigenfunction(QuantumState state, const ModelParams& params)
    : state_(std::move(state)), params_(params) {
  if (static_cast<int>(state_.n_tuple.size()) != params_.dim())
    throw std::invalid_argument("state dimension does not match params");
  int total = 0;
  for (int v : state_.n_tuple) {
    if (v < 0) throw std::invalid_argument("quantum numbers must be >= 0");
    total += v;
  }
  if (total != state_.n) throw std::invalid_argument("principal number differs from sum of n_i");
  state_ = validated(std::move(state_), params_, StateMode::cartesian);
}

double CartesianEigenfunction::factor(std::size_t i, double x) const {
  const double b = state_.beta;
  return std::sqrt(b) * specfun::hermite_function(state_.n_tuple.at(i), b * x);
}

double CartesianEigenfunction::operator()(std::span<const double> q) const {
  if (q.size() != state_.n_tuple.size()) throw std::invalid_argument("point has wrong dimension");
  double v = scale_;
  for (std::size_t i = 0; i < q.size(); ++i) v *= factor(i, q[i]);
  return v;
}

double CartesianEigenfunction::norm_constant() const {
  // sqrt(beta) h_n(beta x) = (beta^2/pi)^{1/4} (2^n n!)^{-1/2} exp(-beta^2 x^2/2) H_n(beta x)
  double log_c = 0.0;
  for (int ni : state_.n_tuple) {
    log_c += 0.25 * std::log(state_.beta * state_.beta / std::numbers::pi) -
             0.5 * (ni * std::numbers::ln2 + std::lgamma(ni + 1.0));
  }
  return scale_ * std::exp(log_c);
}

CartesianEigenfunction CartesianEigenfunction::rescaled(double scale) const {
  CartesianEigenfunction copy = *this;
  copy.scale_ = scale;
  return copy;
}

RadialEigenfunction::RadialEigenfunction(QuantumState state, const ModelParams& params)
    : state_(std::move(state)), params_(params) {
  if (state_.k < 0 || state_.l < 0) throw std::invalid_argument("k and l must be >= 0");
  if (state_.n != 2 * state_.k + state_.l) throw std::invalid_argument("principal number differs from 2k + l");
  if (params_.dim() == 1 && state_.l > 1)
    throw std::invalid_argument("in one dimension l is a parity label (0 or 1)");
  state_ = validated(std::move(state_), params_, StateMode::radial);
}

double RadialEigenfunction::operator()(double r) const {
  if (std::isnan(r) || r < 0.0) throw std::domain_error("radius must be >= 0");
  const double b = state_.beta;
  const int dim = params_.dim();
  const double a = alpha();
  const double pref = scale_ * std::sqrt(2.0 * std::pow(b, dim));
  if (r == 0.0) {
    if (state_.l > 0) return 0.0;
    const double ratio = std::exp(0.5 * (std::lgamma(state_.k + 1.0) - std::lgamma(state_.k + a + 1.0)));
    return pref * ratio * specfun::laguerre(state_.k, a, 0.0);
  }
  const double br = b * r;
  // (beta r)^{1 - N/2} x^{alpha/2} = (beta r)^l with x = (beta r)^2.
  return pref * std::pow(br, 1.0 - 0.5 * dim) * specfun::laguerre_function(state_.k, a, br * br);
}

double RadialEigenfunction::norm_constant() const {
  const double b = state_.beta;
  const double a = alpha();
  const double log_b = 0.5 * (std::numbers::ln2 + params_.dim() * std::log(b)) + state_.l * std::log(b) +
                       0.5 * (std::lgamma(state_.k + 1.0) - std::lgamma(state_.k + a + 1.0));
  return scale_ * std::exp(log_b);
}

RadialEigenfunction RadialEigenfunction::rescaled(double scale) const {
  RadialEigenfunction copy = *this;
  copy.scale_ = scale;
  return copy;
}

CartesianEigenfunction make_cartesian(std::vector<int> n_tuple, const ModelParams& p) {
  return normalize(CartesianEigenfunction(QuantumState::cartesian(std::move(n_tuple), p), p));
}

RadialEigenfunction make_radial(int k, int l, const ModelParams& p) {
  return normalize(RadialEigenfunction(QuantumState::radial(k, l, p), p));
}

double cartesian_eigenfunction_value(const CartesianEigenfunction& f, std::span<const double> q) {
  return f(q);
}

double radial_eigenfunction_value(const RadialEigenfunction& f, double r) { return f(r); }

double weighted_inner_product(const CartesianEigenfunction& f, const CartesianEigenfunction& g) {
  if (!(f.params() == g.params())) throw std::invalid_argument("eigenfunctions of different models");
  const std::size_t dim = f.state().n_tuple.size();
  const double decay = 1.0 / std::min(f.beta(), g.beta());
  std::vector<double> a(dim);
  std::vector<double> b(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    a[i] = specfun::integrate([&](double x) { return f.factor(i, x) * g.factor(i, x); },
                              Domain::real_line(decay), kInnerProductSpec)
               .value;
    b[i] = specfun::integrate([&](double x) { return x * x * f.factor(i, x) * g.factor(i, x); },
                              Domain::real_line(decay), kInnerProductSpec)
               .value;
  }
  // (1 + lambda sum q_j^2) splits into one term per coordinate.
  double flat = 1.0;
  for (double ai : a) flat *= ai;
  double moment = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    double term = b[j];
    for (std::size_t i = 0; i < dim; ++i)
      if (i != j) term *= a[i];
    moment += term;
  }
  return f.scale() * g.scale() * (flat + f.params().lambda() * moment);
}

double weighted_inner_product(const RadialEigenfunction& f, const RadialEigenfunction& g) {
  if (!(f.params() == g.params())) throw std::invalid_argument("eigenfunctions of different models");
  if (f.l() != g.l()) return 0.0;
  const double decay = 1.0 / std::min(f.beta(), g.beta());
  return weighted_radial_inner_product([&](double r) { return f(r); }, [&](double r) { return g(r); },
                                       f.params(), decay);
}

double weighted_inner_product_1d(const specfun::Integrand& f, const specfun::Integrand& g,
                                 const ModelParams& p, double decay_scale) {
  const double lam = p.lambda();
  return specfun::integrate([&](double x) { return f(x) * g(x) * (1.0 + lam * x * x); },
                            Domain::real_line(decay_scale), kInnerProductSpec)
      .value;
}

double weighted_radial_inner_product(const specfun::Integrand& f, const specfun::Integrand& g,
                                     const ModelParams& p, double decay_scale) {
  const double lam = p.lambda();
  const int dim = p.dim();
  return specfun::integrate(
             [&](double r) { return f(r) * g(r) * (1.0 + lam * r * r) * std::pow(r, dim - 1); },
             Domain::half_line(0.0, decay_scale), kInnerProductSpec)
      .value;
}

CartesianEigenfunction normalize(const CartesianEigenfunction& f) {
  const double norm2 = weighted_inner_product(f, f);
  if (!(norm2 > 0.0)) throw std::domain_error("cannot normalize a zero function");
  return f.rescaled(f.scale() / std::sqrt(norm2));
}

RadialEigenfunction normalize(const RadialEigenfunction& f) {
  const double norm2 = weighted_inner_product(f, f);
  if (!(norm2 > 0.0)) throw std::domain_error("cannot normalize a zero function");
  return f.rescaled(f.scale() / std::sqrt(norm2));
}

double circular_harmonic(int m, double phi) {
  if (m == 0) return 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double c = 1.0 / std::sqrt(std::numbers::pi);
  return m > 0 ? c * std::cos(m * phi) : c * std::sin(-m * phi);
}

double spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw std::invalid_argument("spherical_harmonic: need |m| <= l");
  const int am = std::abs(m);
  const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) *
                                std::exp(std::lgamma(l - am + 1.0) - std::lgamma(l + am + 1.0)));
  const double leg = std::assoc_legendre(static_cast<unsigned>(l), static_cast<unsigned>(am), std::cos(theta));
  if (m == 0) return norm * leg;
  const double azimuth = m > 0 ? std::cos(am * phi) : std::sin(am * phi);
  return std::numbers::sqrt2 * norm * leg * azimuth;
}

double hyperspherical_eigenfunction_value(const RadialEigenfunction& f, int m, std::span<const double> q) {
  const int dim = f.params().dim();
  if (static_cast<int>(q.size()) != dim) throw std::invalid_argument("point has wrong dimension");
  if (dim == 2) {
    if (std::abs(m) != f.l()) throw std::invalid_argument("N = 2 harmonics need |m| = l");
    const double r = std::hypot(q[0], q[1]);
    return f(r) * circular_harmonic(m, std::atan2(q[1], q[0]));
  }
  if (dim == 3) {
    const double r = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
    if (r == 0.0) return f.l() == 0 ? f(0.0) * spherical_harmonic(0, 0, 0.0, 0.0) : 0.0;
    return f(r) * spherical_harmonic(f.l(), m, std::acos(q[2] / r), std::atan2(q[1], q[0]));
  }
  throw std::invalid_argument("explicit angular harmonics are provided for N = 2 and N = 3 only");
}

}  // namespace pdmosc
