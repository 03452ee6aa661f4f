#include "pdmosc/numverify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace pdmosc::numverify {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 8th-order central second-derivative weights for offsets 0..4.
constexpr std::array<double, 5> kD2 = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};

double weight(double r, int dim) { return dim == 1 ? 1.0 : std::pow(r, dim - 1); }

int max_level_l(int dim, int l_max) { return dim == 1 ? std::min(l_max, 1) : l_max; }

using PointFunction = std::function<double(std::span<const double>)>;

double residual_on_cube(const PointFunction& psi, double energy, const ModelParams& p, double half_width,
                        int points, double h) {
  if (points < 2) throw std::invalid_argument("need at least 2 points per axis");
  if (!(h > 0.0) || !(half_width > 0.0)) throw std::invalid_argument("spacing and box must be > 0");
  const int dim = p.dim();
  const double hb2 = p.hbar() * p.hbar();
  const double w2 = p.omega() * p.omega();
  const double dx = 2.0 * half_width / (points - 1);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> q(static_cast<std::size_t>(dim));
  std::vector<double> shifted(static_cast<std::size_t>(dim));
  double num = 0.0;
  double den = 0.0;
  for (;;) {
    double q2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      q[a] = -half_width + idx[a] * dx;
      q2 += q[a] * q[a];
    }
    const double v = psi(q);
    double lap = 0.0;
    for (int a = 0; a < dim; ++a) {
      shifted = q;
      double acc = kD2[0] * v;
      for (int s = 1; s <= 4; ++s) {
        shifted[a] = q[a] + s * h;
        double pair = psi(shifted);
        shifted[a] = q[a] - s * h;
        pair += psi(shifted);
        acc += kD2[s] * pair;
      }
      lap += acc / (h * h);
    }
    const double hv = (-hb2 * lap + w2 * q2 * v) / (2.0 * (1.0 + p.lambda() * q2));
    num += (hv - energy * v) * (hv - energy * v);
    den += v * v;
    int a = 0;
    while (a < dim && ++idx[a] == points) idx[a++] = 0;
    if (a == dim) break;
  }
  if (!(den > 0.0)) throw std::domain_error("eigenfunction vanishes on the sampling grid");
  return std::sqrt(num / den);
}

}  // namespace

RadialGrid::RadialGrid(double rmin, double rmax, int n) : r_min(rmin), r_max(rmax), num_points(n) {
  if (!(rmin > 0.0) || !(rmax > rmin) || !std::isfinite(rmax))
    throw std::invalid_argument("radial grid needs 0 < r_min < r_max");
  if (n < 100) throw std::invalid_argument("radial grid needs at least 100 points");
}

RadialGrid default_grid(const ModelParams& p, int l, int k_max) {
  if (l < 0 || k_max < 0) throw std::invalid_argument("l and k_max must be >= 0");
  const int n = 2 * k_max + l;
  const double e = energy_closed_form(n, p);
  const double big_omega = omega_of_energy(e, p);
  const double beta = std::sqrt(big_omega / p.hbar());
  // Outer root of hbar^2 l(l+N-2)/(2 r^2) + Omega^2 r^2 / 2 = E.
  const double centrifugal = p.hbar() * p.hbar() * l * (l + p.dim() - 2);
  const double disc = std::max(0.0, e * e - big_omega * big_omega * centrifugal);
  const double r_turn = std::sqrt((e + std::sqrt(disc)) / (big_omega * big_omega));
  return {1e-6, std::max(12.0 / beta, 3.0 * r_turn), 4000};
}

DiscretizedOperator discretize_radial(const ModelParams& p, int l, const RadialGrid& grid) {
  if (l < 0) throw std::invalid_argument("l must be >= 0");
  if (p.dim() == 1 && l > 1) throw std::invalid_argument("in one dimension l is a parity label (0 or 1)");
  const int dim = p.dim();
  const double h = grid.spacing();
  const double kin = p.hbar() * p.hbar() / (2.0 * h * h);
  const double cent = 0.5 * p.hbar() * p.hbar() * l * (l + dim - 2);
  const double w2 = p.omega() * p.omega();

  DiscretizedOperator op;
  op.l = l;
  op.spacing = h;
  op.first_node = l == 0 ? 0 : 1;
  const int last = grid.num_points - 2;  // node num_points-1 is the Dirichlet wall
  const auto count = static_cast<std::size_t>(last - op.first_node + 1);
  op.diag.reserve(count);
  op.mass.reserve(count);
  op.radii.reserve(count);
  op.offdiag.reserve(count - 1);
  for (int i = op.first_node; i <= last; ++i) {
    const double r = grid.node(i);
    const double w = weight(r, dim);
    const double w_out = weight(r + 0.5 * h, dim);
    const double v = cent / (r * r) + 0.5 * w2 * r * r;
    const double m = (1.0 + p.lambda() * r * r) * w;
    if (l == 0 && i == 0) {
      // Reflective half cell: no flux through r_min.
      op.diag.push_back(kin * w_out + 0.5 * v * w);
      op.mass.push_back(0.5 * m);
    } else {
      const double w_in = weight(r - 0.5 * h, dim);
      op.diag.push_back(kin * (w_in + w_out) + v * w);
      op.mass.push_back(m);
    }
    op.radii.push_back(r);
    if (i < last) op.offdiag.push_back(-kin * w_out);
  }
  return op;
}

Tridiagonal symmetric_reduction(const DiscretizedOperator& op) {
  Tridiagonal t;
  const std::size_t n = op.size();
  t.diag.resize(n);
  t.offdiag.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(op.mass[i] > 0.0)) throw std::domain_error("mass matrix entry is not positive");
    t.diag[i] = op.diag[i] / op.mass[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) t.offdiag[i] = op.offdiag[i] / std::sqrt(op.mass[i] * op.mass[i + 1]);
  return t;
}

std::size_t sturm_count(const Tridiagonal& t, double x) {
  const std::size_t n = t.diag.size();
  if (n == 0) return 0;
  double emax = 0.0;
  for (double e : t.offdiag) emax = std::max(emax, e * e);
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax);
  std::size_t count = 0;
  double q = t.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    q = t.diag[i] - x - t.offdiag[i - 1] * t.offdiag[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

double tridiagonal_eigenvalue(const Tridiagonal& t, std::size_t j) {
  const std::size_t n = t.diag.size();
  if (j >= n) throw std::out_of_range("eigenvalue index exceeds matrix size");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double rad = (i > 0 ? std::abs(t.offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.offdiag[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - rad);
    hi = std::max(hi, t.diag[i] + rad);
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
    if (sturm_count(t, mid) > j) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

std::vector<double> tridiagonal_eigenvector(const Tridiagonal& t, double eigenvalue) {
  const std::size_t n = t.diag.size();
  if (n == 0) return {};
  if (n == 1) return {1.0};
  // LU with partial pivoting of (T - sigma I), stored as in LAPACK dgttrf.
  std::vector<double> d(n), dl(n > 1 ? n - 1 : 0), du(t.offdiag), du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<std::size_t> piv(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = t.diag[i] - eigenvalue;
    scale = std::max(scale, std::abs(t.diag[i]));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) dl[i] = t.offdiag[i];
  const double tiny = kEps * std::max(scale, std::abs(eigenvalue)) + std::numeric_limits<double>::min();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      piv[i] = i;
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      piv[i] = i + 1;
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;

  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(i));
  for (int iter = 0; iter < 3; ++iter) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (piv[i] == i) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t ii = n - 2; ii-- > 0;) b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
    double norm = 0.0;
    for (double v : b) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : b) v /= norm;
  }
  return b;
}

std::vector<double> solve_generalized_eigen(const DiscretizedOperator& op, int count) {
  if (count < 0) throw std::invalid_argument("count must be >= 0");
  const std::size_t points = op.size() + 1 + static_cast<std::size_t>(op.first_node);
  if (static_cast<std::size_t>(count) > points / 4)
    throw std::invalid_argument("count exceeds num_points / 4");
  const Tridiagonal t = symmetric_reduction(op);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) values.push_back(tridiagonal_eigenvalue(t, static_cast<std::size_t>(j)));
  return values;
}

std::vector<Eigenpair> solve_generalized_eigenpairs(const DiscretizedOperator& op, int count,
                                                    const RadialGrid& grid) {
  const std::vector<double> values = solve_generalized_eigen(op, count);
  const Tridiagonal t = symmetric_reduction(op);
  const double tail_start = grid.r_min + 0.9 * (grid.r_max - grid.r_min);
  std::vector<Eigenpair> out;
  out.reserve(values.size());
  for (double value : values) {
    std::vector<double> y = tridiagonal_eigenvector(t, value);
    Eigenpair e{value, {}, 0, 0.0, false};
    e.vector.resize(y.size());
    double vmax = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      e.vector[i] = y[i] / std::sqrt(op.mass[i]);
      vmax = std::max(vmax, std::abs(e.vector[i]));
      if (op.radii[i] >= tail_start) e.tail_mass += y[i] * y[i];
    }
    // Fix the sign so that phi starts positive near the origin.
    const auto first = std::find_if(e.vector.begin(), e.vector.end(),
                                    [&](double v) { return std::abs(v) > 1e-8 * vmax; });
    if (first != e.vector.end() && *first < 0.0)
      for (double& v : e.vector) v = -v;
    int last_sign = 0;
    for (double v : e.vector) {
      if (std::abs(v) <= 1e-8 * vmax) continue;
      const int s = v > 0.0 ? 1 : -1;
      if (last_sign != 0 && s != last_sign) ++e.sign_changes;
      last_sign = s;
    }
    e.boundary_contaminated = e.tail_mass > 0.01;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<OracleLevel> oracle_levels(const ModelParams& p, int l, int k_max, const RadialGrid* grid) {
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  const RadialGrid coarse = grid ? *grid : default_grid(p, l, k_max);
  const RadialGrid fine = coarse.refined();
  const RadialGrid finest = fine.refined();
  const int count = k_max + 1;
  const auto e_coarse = solve_generalized_eigen(discretize_radial(p, l, coarse), count);
  const auto pairs_fine = solve_generalized_eigenpairs(discretize_radial(p, l, fine), count, fine);
  const auto e_finest = solve_generalized_eigen(discretize_radial(p, l, finest), count);
  std::vector<OracleLevel> levels;
  for (int k = 0; k < count; ++k) {
    OracleLevel lv;
    lv.k = k;
    lv.l = l;
    lv.coarse = e_coarse[k];
    lv.fine = pairs_fine[k].value;
    lv.finest = e_finest[k];
    lv.richardson = (4.0 * lv.fine - lv.coarse) / 3.0;
    const double d1 = lv.coarse - lv.fine;
    const double d2 = lv.fine - lv.finest;
    lv.order = (d2 != 0.0 && d1 / d2 > 0.0) ? std::log2(d1 / d2) : std::numeric_limits<double>::quiet_NaN();
    lv.boundary_contaminated = pairs_fine[k].boundary_contaminated;
    lv.sign_changes = pairs_fine[k].sign_changes;
    levels.push_back(lv);
  }
  return levels;
}

SpectrumTable oracle_report(const ModelParams& p, int l_max, int k_max, const RadialGrid* grid) {
  if (l_max < 0 || k_max < 0) throw std::invalid_argument("l_max and k_max must be >= 0");
  SpectrumTable table{p, Provenance::oracle, {}};
  const double threshold = continuum_threshold(p);
  for (int l = 0; l <= max_level_l(p.dim(), l_max); ++l) {
    for (const OracleLevel& lv : oracle_levels(p, l, k_max, grid)) {
      SpectrumRow row;
      row.n = 2 * lv.k + lv.l;
      row.energy = lv.richardson;
      row.degeneracy = degeneracy(row.n, p.dim());
      row.gap_to_threshold = threshold - row.energy;
      row.residual = implicit_residual(row.energy, row.n, p);
      OracleColumns oc;
      oc.k = lv.k;
      oc.l = lv.l;
      oc.closed_form = energy_closed_form(row.n, p);
      oc.rel_error = std::abs(row.energy - oc.closed_form) / std::abs(oc.closed_form);
      oc.convergence_order = lv.order;
      oc.boundary_contaminated = lv.boundary_contaminated;
      row.oracle = oc;
      table.rows.push_back(row);
    }
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const SpectrumRow& a, const SpectrumRow& b) {
    return a.n != b.n ? a.n < b.n : a.oracle->l < b.oracle->l;
  });
  return table;
}

double apply_angular_momentum_sq(const Function2D& f, const ModelParams& p, double x, double y) {
  static const double c = std::cos(kRotationStep);
  static const double s = std::sin(kRotationStep);
  const double plus = f(c * x - s * y, s * x + c * y);
  const double minus = f(c * x + s * y, -s * x + c * y);
  return -p.hbar() * p.hbar() * (plus - 2.0 * f(x, y) + minus) / (kRotationStep * kRotationStep);
}

double apply_hamiltonian_2d(const Function2D& f, const ModelParams& p, double x, double y, double h) {
  const double v = f(x, y);
  const double lap = (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * v) / (h * h);
  const double q2 = x * x + y * y;
  return (-p.hbar() * p.hbar() * lap + p.omega() * p.omega() * q2 * v) / (2.0 * (1.0 + p.lambda() * q2));
}

double commutator_residual(const Function2D& f, const ModelParams& p, const Grid2D& grid) {
  if (grid.points < 3 || !(grid.half_width > 0.0)) throw std::invalid_argument("invalid 2D grid");
  const double h = grid.spacing();
  const Function2D l2f = [&](double x, double y) { return apply_angular_momentum_sq(f, p, x, y); };
  const Function2D hf = [&](double x, double y) { return apply_hamiltonian_2d(f, p, x, y, h); };
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < grid.points; ++i) {
    const double x = -grid.half_width + i * h;
    for (int j = 0; j < grid.points; ++j) {
      const double y = -grid.half_width + j * h;
      const double c = apply_hamiltonian_2d(l2f, p, x, y, h) - apply_angular_momentum_sq(hf, p, x, y);
      const double v = f(x, y);
      num += c * c;
      den += v * v;
    }
  }
  if (!(den > 0.0)) throw std::domain_error("test function vanishes on the grid");
  return std::sqrt(num / den);
}

std::vector<Function2D> commutation_test_functions() {
  std::mt19937_64 gen(20240611ULL);
  const auto uniform = [&](double a, double b) {
    return a + (b - a) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  std::vector<Function2D> fs;
  for (int i = 0; i < 5; ++i) {
    const double a = uniform(-1.0, 1.0);
    const double b = uniform(-1.0, 1.0);
    const double c = uniform(-1.0, 1.0);
    const double x0 = uniform(-1.0, 1.0);
    const double y0 = uniform(-1.0, 1.0);
    const double s = uniform(0.6, 1.2);
    fs.emplace_back([=](double x, double y) {
      const double dx = x - x0;
      const double dy = y - y0;
      return (1.0 + a * x + b * y + c * x * y) * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
    });
  }
  return fs;
}

CommutationReport commutation_residual_2d(const ModelParams& p, const Grid2D& grid) {
  if (p.dim() != 2) throw std::invalid_argument("commutation_residual_2d requires N = 2");
  CommutationReport rep;
  rep.spacing = grid.spacing();
  for (const auto& f : commutation_test_functions()) {
    rep.per_function.push_back(commutator_residual(f, p, grid));
    rep.residual = std::max(rep.residual, rep.per_function.back());
  }
  return rep;
}

double hamiltonian_residual(const CartesianEigenfunction& psi, double half_width, int points, double h) {
  return residual_on_cube([&](std::span<const double> q) { return psi(q); }, psi.state().energy,
                          psi.params(), half_width, points, h);
}

double hamiltonian_residual(const RadialEigenfunction& psi, int m, double half_width, int points, double h) {
  return residual_on_cube([&](std::span<const double> q) { return hyperspherical_eigenfunction_value(psi, m, q); },
                          psi.energy(), psi.params(), half_width, points, h);
}

double factor_equation_residual(const CartesianEigenfunction& psi, std::size_t i, double half_width, int points,
                                double h) {
  const ModelParams& p = psi.params();
  const double e = psi.state().energy;
  const double mu = psi.state().factor_eigenvalue(i, p);
  const double w_eff2 = p.omega() * p.omega() - 2.0 * p.lambda() * e;
  const double dx = 2.0 * half_width / (points - 1);
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j < points; ++j) {
    const double x = -half_width + j * dx;
    const double v = psi.factor(i, x);
    double d2 = kD2[0] * v;
    for (int s = 1; s <= 4; ++s) d2 += kD2[s] * (psi.factor(i, x + s * h) + psi.factor(i, x - s * h));
    d2 /= h * h;
    const double lhs = -p.hbar() * p.hbar() * d2 + w_eff2 * x * x * v;
    num += (lhs - 2.0 * mu * v) * (lhs - 2.0 * mu * v);
    den += v * v;
  }
  return std::sqrt(num / den);
}

}  // namespace pdmosc::numverify
