#include "pdmosc/classical.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "pdmosc/spectrum.hpp"

namespace pdmosc {

namespace {

namespace odeint = boost::numeric::odeint;
using StateVector = std::vector<double>;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double angular_sum(const PhaseState& s, std::size_t first, std::size_t last) {
  // Sum over first <= i < j <= last (0-based, inclusive) of (q_i p_j - q_j p_i)^2.
  double acc = 0.0;
  for (std::size_t i = first; i <= last; ++i)
    for (std::size_t j = i + 1; j <= last; ++j) {
      const double lij = s.q[i] * s.p[j] - s.q[j] * s.p[i];
      acc += lij * lij;
    }
  return acc;
}

void check_shape(const PhaseState& s, const ModelParams& p) {
  if (s.q.size() != s.p.size() || static_cast<int>(s.q.size()) != p.dim())
    throw std::invalid_argument("phase state dimension does not match params");
}

StateVector pack(const PhaseState& s) {
  StateVector x(s.q);
  x.insert(x.end(), s.p.begin(), s.p.end());
  return x;
}

PhaseState unpack(const StateVector& x, double t) {
  const auto n = static_cast<std::ptrdiff_t>(x.size() / 2);
  return {StateVector(x.begin(), x.begin() + n), StateVector(x.begin() + n, x.end()), t};
}

void rhs(const StateVector& x, StateVector& dxdt, const ModelParams& p) {
  const std::size_t n = x.size() / 2;
  double q2 = 0.0;
  double p2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    q2 += x[i] * x[i];
    p2 += x[n + i] * x[n + i];
  }
  const double lam = p.lambda();
  const double w2 = p.omega() * p.omega();
  const double m = 1.0 + lam * q2;
  const double force = lam * (p2 + w2 * q2) / (m * m) - w2 / m;
  for (std::size_t i = 0; i < n; ++i) {
    dxdt[i] = x[n + i] / m;
    dxdt[n + i] = force * x[i];
  }
}

double phase_distance(const PhaseState& a, const PhaseState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.q.size(); ++i) {
    d += (a.q[i] - b.q[i]) * (a.q[i] - b.q[i]);
    d += (a.p[i] - b.p[i]) * (a.p[i] - b.p[i]);
  }
  return std::sqrt(d);
}

// Index of the sample interval [samples[i], samples[i+1]] containing t.
std::size_t locate(const Trajectory& traj, double t) {
  const auto& s = traj.samples;
  auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const PhaseState& st) { return v < st.t; });
  std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
  return std::min(i, s.size() - 2);
}

// Bisection for a sign change of g on [a, b].
template <class G>
double refine_root(G&& g, double a, double b) {
  double ga = g(a);
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) break;
    const double gm = g(mid);
    if ((gm < 0.0) == (ga < 0.0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

constexpr int kMaxClosureMultiple = 8;

}  // namespace

std::vector<double> ConservedSet::flatten() const {
  std::vector<double> v{energy};
  v.insert(v.end(), c_upper.begin(), c_upper.end());
  v.insert(v.end(), c_lower.begin(), c_lower.end());
  v.insert(v.end(), i_vals.begin(), i_vals.end());
  return v;
}

std::vector<std::string> ConservedSet::names(int dim) {
  std::vector<std::string> v{"H"};
  for (int m = 2; m <= dim; ++m) v.push_back("Cup_" + std::to_string(m));
  for (int m = 2; m <= dim; ++m) v.push_back("Clow_" + std::to_string(m));
  for (int i = 1; i <= dim; ++i) v.push_back("I_" + std::to_string(i));
  return v;
}

double hamiltonian(const PhaseState& s, const ModelParams& p) {
  check_shape(s, p);
  const double q2 = dot(s.q, s.q);
  return (dot(s.p, s.p) + p.omega() * p.omega() * q2) / (2.0 * (1.0 + p.lambda() * q2));
}

ConservedSet conserved_set(const PhaseState& s, const ModelParams& p) {
  ConservedSet c;
  c.energy = hamiltonian(s, p);
  const std::size_t n = s.q.size();
  for (std::size_t m = 2; m <= n; ++m) {
    c.c_upper.push_back(angular_sum(s, 0, m - 1));
    c.c_lower.push_back(angular_sum(s, n - m, n - 1));
  }
  const double coupling = 2.0 * p.lambda() * c.energy - p.omega() * p.omega();
  for (std::size_t i = 0; i < n; ++i) c.i_vals.push_back(s.p[i] * s.p[i] - coupling * s.q[i] * s.q[i]);
  return c;
}

double sum_rule_defect(const PhaseState& s, const ModelParams& p) {
  const ConservedSet c = conserved_set(s, p);
  double sum = 0.0;
  for (double v : c.i_vals) sum += v;
  return std::abs(2.0 * c.energy - sum);
}

PhaseState hamilton_rhs(const PhaseState& s, const ModelParams& p) {
  check_shape(s, p);
  StateVector dx(2 * s.q.size());
  rhs(pack(s), dx, p);
  return unpack(dx, s.t);
}

Trajectory integrate_orbit(const PhaseState& initial, const ModelParams& p, double t_end, double tol,
                           double sample_dt) {
  check_shape(initial, p);
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (!(t_end > initial.t)) throw std::invalid_argument("t_end must exceed the initial time");
  if (sample_dt == 0.0) sample_dt = 0.01 / std::max(p.omega(), 1e-6);
  if (!(sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be > 0");

  Trajectory traj{p, tol, {}, 0, 0.0};
  const auto system = [&p](const StateVector& x, StateVector& dxdt, double) { rhs(x, dxdt, p); };
  auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<StateVector>());

  const double t0 = initial.t;
  stepper.initialize(pack(initial), t0, std::min(1e-3 * sample_dt, t_end - t0));
  traj.samples.push_back(initial);
  std::size_t next = 1;
  StateVector x(2 * initial.q.size());
  const auto record_defect = [&](const PhaseState& s) {
    const double e = hamiltonian(s, p);
    traj.max_sum_rule_defect = std::max(traj.max_sum_rule_defect, sum_rule_defect(s, p) / std::max(1.0, std::abs(e)));
  };
  record_defect(initial);

  while (stepper.current_time() < t_end) {
    try {
      stepper.do_step(system);
    } catch (const odeint::step_adjustment_error& e) {
      throw StepSizeUnderflow(std::string("integrator cannot meet tolerance: ") + e.what());
    }
    ++traj.accepted_steps;
    const double now = stepper.current_time();
    record_defect(unpack(stepper.current_state(), now));
    for (;;) {
      const double ts = std::min(t0 + next * sample_dt, t_end);
      if (ts > now) break;
      stepper.calc_state(ts, x);
      traj.samples.push_back(unpack(x, ts));
      if (ts == t_end) break;
      ++next;
    }
    if (traj.samples.back().t == t_end) break;
    const double dt = stepper.current_time_step();
    if (!(dt > 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(now))))
      throw StepSizeUnderflow("step size underflow at t = " + std::to_string(now));
  }
  return traj;
}

PhaseState interpolate(const Trajectory& traj, double t) {
  const auto& s = traj.samples;
  if (s.size() < 2) throw std::invalid_argument("trajectory needs at least two samples");
  if (t < s.front().t || t > s.back().t) throw std::out_of_range("time outside trajectory");
  const std::size_t i = locate(traj, t);
  const PhaseState& a = s[i];
  const PhaseState& b = s[i + 1];
  const double h = b.t - a.t;
  const double u = (t - a.t) / h;
  const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
  const double h10 = u * (1.0 - u) * (1.0 - u);
  const double h01 = u * u * (3.0 - 2.0 * u);
  const double h11 = u * u * (u - 1.0);
  const PhaseState da = hamilton_rhs(a, traj.params);
  const PhaseState db = hamilton_rhs(b, traj.params);
  PhaseState out{a.q, a.p, t};
  for (std::size_t k = 0; k < a.q.size(); ++k) {
    out.q[k] = h00 * a.q[k] + h10 * h * da.q[k] + h01 * b.q[k] + h11 * h * db.q[k];
    out.p[k] = h00 * a.p[k] + h10 * h * da.p[k] + h01 * b.p[k] + h11 * h * db.p[k];
  }
  return out;
}

std::vector<double> radial_minima(const Trajectory& traj) {
  // d|q|^2/dt = 2 q.p / (1 + lambda q^2): minima where q.p crosses from - to +.
  std::vector<double> times;
  const auto& s = traj.samples;
  const auto radial = [&](double t) {
    const PhaseState st = interpolate(traj, t);
    return dot(st.q, st.p);
  };
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = dot(s[i].q, s[i].p);
    const double b = dot(s[i + 1].q, s[i + 1].p);
    if (a < 0.0 && b >= 0.0) times.push_back(refine_root(radial, s[i].t, s[i + 1].t));
  }
  return times;
}

std::optional<double> radial_period(const Trajectory& traj) {
  const auto mins = radial_minima(traj);
  if (mins.size() < 2) return std::nullopt;
  return (mins.back() - mins.front()) / static_cast<double>(mins.size() - 1);
}

ClosureResult closure_check(const Trajectory& traj, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  const auto& s = traj.samples;
  if (s.size() < 3) throw std::invalid_argument("trajectory too short");
  ClosureResult res;
  const PhaseState& x0 = s.front();
  const double t0 = x0.t;
  const double t_end = s.back().t;

  // Energies at or above the continuum threshold escape to infinity.
  if (hamiltonian(x0, traj.params) >= continuum_threshold(traj.params)) return res;

  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (const auto& st : s) {
    const double r = std::sqrt(dot(st.q, st.q));
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  res.mismatch = std::numeric_limits<double>::infinity();
  const bool circular = rmax - rmin <= 1e-6 * std::max(rmax, 1e-300);
  if (!circular) {
    res.radial_period = radial_period(traj);
    if (!res.radial_period) return res;
    for (int m = 1; m <= kMaxClosureMultiple; ++m) {
      const double t = t0 + m * *res.radial_period;
      if (t > t_end) break;
      const double d = phase_distance(interpolate(traj, t), x0);
      if (d < res.mismatch) res.mismatch = d;
      if (d < tol) {
        res.is_closed = true;
        res.period = m * *res.radial_period;
        res.multiple = m;
        res.mismatch = d;
        return res;
      }
    }
    return res;
  }

  // No radial oscillation: the first return is the first local minimum of the
  // distance to x0, i.e. a - to + crossing of (x(t) - x0) . dx/dt.
  const auto slope = [&](double t) {
    const PhaseState st = interpolate(traj, t);
    const PhaseState d = hamilton_rhs(st, traj.params);
    double acc = 0.0;
    for (std::size_t k = 0; k < st.q.size(); ++k)
      acc += (st.q[k] - x0.q[k]) * d.q[k] + (st.p[k] - x0.p[k]) * d.p[k];
    return acc;
  };
  double prev = slope(s[1].t);
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double next = slope(s[i + 1].t);
    if (prev < 0.0 && next >= 0.0) {
      const double t = refine_root(slope, s[i].t, s[i + 1].t);
      const double dist = phase_distance(interpolate(traj, t), x0);
      res.mismatch = std::min(res.mismatch, dist);
      if (dist < tol) {
        res.is_closed = true;
        res.period = t - t0;
        res.multiple = 0;
        res.mismatch = dist;
        return res;
      }
    }
    prev = next;
  }
  return res;
}

Trajectory integrate_radial_periods(const PhaseState& initial, const ModelParams& p, double periods, double tol) {
  if (!(periods > 0.0)) throw std::invalid_argument("periods must be > 0");
  if (hamiltonian(initial, p) >= continuum_threshold(p))
    throw std::domain_error("energy at or above the continuum threshold: orbit is unbounded");
  double probe = 4.0 * std::numbers::pi / std::max(p.omega(), 1e-6);
  for (int attempt = 0; attempt < 12; ++attempt, probe *= 2.0) {
    const Trajectory t = integrate_orbit(initial, p, initial.t + probe, tol);
    const auto mins = radial_minima(t);
    if (mins.size() >= 3) {
      const double tr = (mins.back() - mins.front()) / static_cast<double>(mins.size() - 1);
      return integrate_orbit(initial, p, initial.t + periods * tr, tol);
    }
  }
  throw std::runtime_error("no radial oscillation detected (circular or unbounded orbit)");
}

double DriftReport::max() const {
  double m = 0.0;
  for (double v : relative_drift) m = std::max(m, v);
  return m;
}

DriftReport conservation_drift(const Trajectory& traj) {
  const auto& s = traj.samples;
  if (s.empty()) throw std::invalid_argument("empty trajectory");
  const int dim = traj.params.dim();
  DriftReport rep;
  rep.names = ConservedSet::names(dim);
  const std::vector<double> ref = conserved_set(s.front(), traj.params).flatten();
  std::vector<double> worst(ref.size(), 0.0);
  double qmax = 0.0;
  double pmax = 0.0;
  for (const auto& st : s) {
    qmax = std::max(qmax, std::sqrt(dot(st.q, st.q)));
    pmax = std::max(pmax, std::sqrt(dot(st.p, st.p)));
    const std::vector<double> v = conserved_set(st, traj.params).flatten();
    for (std::size_t i = 0; i < v.size(); ++i) worst[i] = std::max(worst[i], std::abs(v[i] - ref[i]));
  }
  // Scales for values that start at (or near) zero.
  const double angular_scale = (qmax * pmax) * (qmax * pmax);
  const double energy_scale = pmax * pmax + traj.params.omega() * traj.params.omega() * qmax * qmax;
  const std::size_t n_angular = 2 * static_cast<std::size_t>(dim - 1);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const bool angular = i >= 1 && i <= n_angular;
    const double scale = angular ? angular_scale : energy_scale;
    const double denom = std::abs(ref[i]) > 1e-8 * scale ? std::abs(ref[i]) : scale;
    rep.relative_drift.push_back(denom > 0.0 ? worst[i] / denom : worst[i]);
  }
  return rep;
}

}  // namespace pdmosc
