#include "pdmosc/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

namespace pdmosc::specfun {

double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: n must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_function(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_function: n must be >= 0");
  const double h0 = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
  if (n == 0) return h0;
  double prev = h0;
  double cur = std::numbers::sqrt2 * x * h0;
  for (int k = 1; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre(int k, double alpha, double x) {
  if (k < 0) throw std::invalid_argument("laguerre: k must be >= 0");
  if (!(alpha > -1.0)) throw std::invalid_argument("laguerre: alpha must be > -1");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre_function(int k, double alpha, double x) {
  if (k < 0) throw std::invalid_argument("laguerre_function: k must be >= 0");
  if (!(alpha > -1.0)) throw std::invalid_argument("laguerre_function: alpha must be > -1");
  if (x < 0.0) throw std::domain_error("laguerre_function: x must be >= 0");
  double pref;
  if (x == 0.0) {
    if (alpha < 0.0) throw std::domain_error("laguerre_function: singular at x = 0 for alpha < 0");
    pref = alpha == 0.0 ? std::exp(-0.5 * std::lgamma(1.0)) : 0.0;
    if (pref == 0.0) return 0.0;
  } else {
    pref = std::exp(0.5 * alpha * std::log(x) - 0.5 * x - 0.5 * std::lgamma(alpha + 1.0));
  }
  // l_j = sqrt(j!/Gamma(j+alpha+1)) L_j; recurrence rescaled from the polynomial one.
  double prev = 1.0;
  if (k == 0) return pref * prev;
  double cur = (1.0 + alpha - x) / std::sqrt(1.0 + alpha);
  for (int j = 1; j < k; ++j) {
    const double a = std::sqrt((j + 1.0) / (j + alpha + 1.0));
    const double b = std::sqrt((j + 1.0) * j / ((j + alpha + 1.0) * (j + alpha)));
    const double next = ((2.0 * j + 1.0 + alpha - x) * a * cur - (j + alpha) * b * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return pref * cur;
}

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw std::invalid_argument("quadrature tolerances must be > 0");
  if (max_refinements < 1)
    throw std::invalid_argument("max_refinements must be >= 1");
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

// Walk outward from `start` in steps of `scale` until the integrand stays
// below `floor` over several consecutive probes.
double truncation_point(const Integrand& f, double start, double direction, double scale,
                        double floor) {
  constexpr int kQuiet = 4;
  constexpr int kMaxSteps = 4000;
  double x = start;
  int quiet = 0;
  for (int i = 0; i < kMaxSteps; ++i) {
    x += direction * scale;
    if (std::abs(f(x)) < floor) {
      if (++quiet == kQuiet) return x;
    } else {
      quiet = 0;
    }
  }
  throw QuadratureError("integrand does not decay on the half line", {0.0, 0.0, 0});
}

}  // namespace

QuadratureResult integrate(const Integrand& f, const Domain& domain, const QuadratureSpec& spec) {
  spec.validate();
  double a = domain.lower;
  double b = domain.upper;
  if (std::isnan(a) || std::isnan(b) || !(a < b)) {
    if (a == b) return {0.0, 0.0, 0};
    throw std::invalid_argument("integrate: domain must satisfy lower < upper");
  }
  const bool infinite = std::isinf(a) || std::isinf(b);
  if (infinite) {
    if (spec.kind != QuadratureKind::half_line_with_decay)
      throw std::invalid_argument("integrate: infinite bounds need half_line_with_decay");
    if (!(domain.scale > 0.0)) throw std::invalid_argument("integrate: decay scale must be > 0");
    const double floor = spec.abs_tol * 1e-2;
    const double step = 0.5 * domain.scale;
    if (std::isinf(a) && std::isinf(b)) {
      a = truncation_point(f, 0.0, -1.0, step, floor);
      b = truncation_point(f, 0.0, +1.0, step, floor);
    } else if (std::isinf(b)) {
      b = truncation_point(f, a, +1.0, step, floor);
    } else {
      a = truncation_point(f, b, -1.0, step, floor);
    }
  }

  // Seed with a few panels so narrow features away from the centre are seen.
  constexpr int kInitialPanels = 8;
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double error = 0.0;
  const double width = (b - a) / kInitialPanels;
  for (int i = 0; i < kInitialPanels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == kInitialPanels) ? b : lo + width;
    Segment s = gk15(f, lo, hi);
    total += s.value;
    error += s.error;
    heap.push(s);
  }

  int refinements = 0;
  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (refinements >= spec.max_refinements) {
      throw QuadratureError("integrate: tolerance not met after max_refinements",
                            {total, error, static_cast<int>(heap.size())});
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++refinements;
    if (error < 0.0) {
      // Accumulated cancellation; recompute exactly.
      std::vector<Segment> all;
      total = error = 0.0;
      while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
      }
      for (const auto& s : all) {
        total += s.value;
        error += s.error;
        heap.push(s);
      }
    }
  }
  return {total, error, static_cast<int>(heap.size())};
}

}  // namespace pdmosc::specfun
