#include "pdmosc/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace pdmosc {

namespace {

__extension__ typedef unsigned __int128 u128;

double half_dim(const ModelParams& p) { return 0.5 * p.dim(); }

// Exact binomial(m, k) in 128-bit arithmetic; throws if it exceeds 64 bits.
std::uint64_t binomial(std::uint64_t m, std::uint64_t k) {
  if (k > m) return 0;
  k = std::min(k, m - k);
  u128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (m - k + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

// Bisection on a strictly decreasing g with g(lo) > 0 > g(hi), run until the
// bracket cannot shrink further. Returns the endpoint with the smaller |g|.
template <class G>
double bisect_decreasing(G&& g, double lo, double hi, double tol) {
  double glo = g(lo);
  double ghi = g(hi);
  for (int it = 0; it < 2000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double gm = g(mid);
    if (gm > 0.0) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
    if (hi - lo <= tol * 1e-3 && std::min(std::abs(glo), std::abs(ghi)) <= tol * 1e-3) break;
  }
  return std::abs(glo) <= std::abs(ghi) ? lo : hi;
}

}  // namespace

QuantumState QuantumState::cartesian(std::vector<int> n_tuple, const ModelParams& p) {
  if (static_cast<int>(n_tuple.size()) != p.dim())
    throw std::invalid_argument("cartesian state needs exactly dim quantum numbers");
  if (std::any_of(n_tuple.begin(), n_tuple.end(), [](int v) { return v < 0; }))
    throw std::invalid_argument("quantum numbers must be >= 0");
  QuantumState s;
  s.mode = StateMode::cartesian;
  s.n = std::accumulate(n_tuple.begin(), n_tuple.end(), 0);
  s.n_tuple = std::move(n_tuple);
  s.energy = energy_closed_form(s.n, p);
  s.beta = std::sqrt(omega_of_energy(s.energy, p) / p.hbar());
  return s;
}

QuantumState QuantumState::radial(int k, int l, const ModelParams& p) {
  if (k < 0 || l < 0) throw std::invalid_argument("k and l must be >= 0");
  if (p.dim() == 1 && l > 1)
    throw std::invalid_argument("in one dimension l is a parity label (0 or 1)");
  QuantumState s;
  s.mode = StateMode::radial;
  s.k = k;
  s.l = l;
  s.n = 2 * k + l;
  s.energy = energy_closed_form(s.n, p);
  s.beta = std::sqrt(omega_of_energy(s.energy, p) / p.hbar());
  return s;
}

double QuantumState::factor_eigenvalue(std::size_t i, const ModelParams& p) const {
  if (mode != StateMode::cartesian || i >= n_tuple.size())
    throw std::out_of_range("factor_eigenvalue: no such Cartesian factor");
  return p.hbar() * omega_of_energy(energy, p) * (n_tuple[i] + 0.5);
}

BaseSpectrum harmonic_base(int dim, double hbar) {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
  return {[dim, hbar](double w, int n) { return hbar * w * (n + 0.5 * dim); }, true,
          "harmonic"};
}

double omega_of_energy(double energy, const ModelParams& p) {
  const double w2 = p.omega() * p.omega();
  const double arg = w2 - 2.0 * p.lambda() * energy;
  if (!(arg > 0.0))
    throw std::domain_error("omega^2 <= 2 lambda E: energy lies in the continuum");
  return std::sqrt(arg);
}

double energy_closed_form(int n, const ModelParams& p) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(p.omega() > 0.0)) throw std::domain_error("no bound states for omega = 0");
  const double s = n + half_dim(p);
  const double a = p.hbar() * p.lambda() * s;
  const double w2 = p.omega() * p.omega();
  // -hbar^2 lambda s^2 + hbar s sqrt(hbar^2 lambda^2 s^2 + omega^2), rationalized.
  return p.hbar() * s * w2 / (a + std::sqrt(a * a + w2));
}

double implicit_residual(double energy, int n, const ModelParams& p) {
  const double w2 = p.omega() * p.omega();
  const double omega_e = std::sqrt(std::max(0.0, w2 - 2.0 * p.lambda() * energy));
  return energy - p.hbar() * omega_e * (n + half_dim(p));
}

double energy_implicit(int n, const ModelParams& p, double tol) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (!p.deformed()) throw std::domain_error("energy_implicit requires lambda > 0");
  if (!(p.omega() > 0.0)) throw std::domain_error("no bound states for omega = 0");
  return bisect_decreasing([&](double e) { return -implicit_residual(e, n, p); }, 0.0,
                           continuum_threshold(p), tol);
}

std::uint64_t degeneracy(int n, int dim) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  return binomial(static_cast<std::uint64_t>(n) + dim - 1, static_cast<std::uint64_t>(dim) - 1);
}

std::uint64_t harmonic_dimension(int l, int dim) {
  if (l < 0) throw std::invalid_argument("l must be >= 0");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (dim == 1) return l <= 1 ? 1 : 0;
  if (dim == 2) return l == 0 ? 1 : 2;
  // (2l+N-2) (l+N-3)! / (l! (N-2)!) = (2l+N-2) binomial(l+N-3, l) / (N-2)
  const auto c = static_cast<u128>(binomial(static_cast<std::uint64_t>(l) + dim - 3, l));
  const u128 v = c * static_cast<unsigned>(2 * l + dim - 2) / static_cast<unsigned>(dim - 2);
  if (v > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("harmonic dimension exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

double continuum_threshold(const ModelParams& p) {
  if (!p.deformed()) return std::numeric_limits<double>::infinity();
  return p.omega() * p.omega() / (2.0 * p.lambda());
}

double solve_deformed_spectrum(const BaseSpectrum& base, int n, const ModelParams& p, double tol) {
  if (!base.eval) throw std::invalid_argument("base spectrum has no evaluator");
  if (!base.monotone_in_frequency)
    throw std::invalid_argument("base spectrum must be increasing in frequency");
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  const double w = p.omega();
  if (!(w > 0.0)) throw std::domain_error("deformation needs omega > 0");
  if (!p.deformed()) return base.eval(w, n);

  constexpr int kSamples = 16;
  std::array<double, kSamples + 1> sampled{};
  for (int i = 0; i <= kSamples; ++i) {
    sampled[i] = base.eval(w * i / kSamples, n);
    if (!std::isfinite(sampled[i]))
      throw DeformationError("base spectrum returned a non-finite value");
    if (i > 0 && !(sampled[i] > sampled[i - 1]))
      throw DeformationError("base spectrum is not increasing in frequency");
  }

  const double threshold = continuum_threshold(p);
  const auto freq = [&](double e) {
    return std::sqrt(std::max(0.0, w * w - 2.0 * p.lambda() * e));
  };
  if (!(sampled[kSamples] > 0.0) || !(sampled[0] < threshold))
    throw DeformationError("fixed-point equation has no sign change on [0, threshold)");

  // Track base values at the bracket ends: since the frequency decreases in E,
  // base(mid) must lie between base(hi) and base(lo).
  double base_lo = sampled[kSamples];
  double base_hi = sampled[0];
  double lo = 0.0;
  double hi = threshold;
  double glo = base_lo - lo;
  double ghi = base_hi - hi;
  for (int it = 0; it < 2000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double bm = base.eval(freq(mid), n);
    const double slack = 1e-13 * std::max(std::abs(base_lo), std::abs(base_hi));
    if (bm > base_lo + slack || bm < base_hi - slack)
      throw DeformationError("base spectrum is not monotone in frequency");
    const double gm = bm - mid;
    if (gm > 0.0) {
      lo = mid;
      glo = gm;
      base_lo = bm;
    } else {
      hi = mid;
      ghi = gm;
      base_hi = bm;
    }
    if (hi - lo <= tol * 1e-3 && std::min(std::abs(glo), std::abs(ghi)) <= tol * 1e-3) break;
  }
  return std::abs(glo) <= std::abs(ghi) ? lo : hi;
}

SpectrumTable spectrum_table(int n_max, const ModelParams& p) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  if (n_max > kSpectrumTableMaxN) throw std::invalid_argument("n_max exceeds 100000");
  SpectrumTable table{p, Provenance::closed_form, {}};
  table.rows.reserve(static_cast<std::size_t>(n_max) + 1);
  const double threshold = continuum_threshold(p);
  for (int n = 0; n <= n_max; ++n) {
    SpectrumRow row;
    row.n = n;
    row.energy = energy_closed_form(n, p);
    row.degeneracy = degeneracy(n, p.dim());
    row.gap_to_threshold = threshold - row.energy;
    row.residual = implicit_residual(row.energy, n, p);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace pdmosc
