#include "cli_app.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "pdmosc/classical.hpp"
#include "pdmosc/geometry.hpp"
#include "pdmosc/numverify.hpp"
#include "pdmosc/spectrum.hpp"
#include "pdmosc/table_io.hpp"
#include "pdmosc/verify.hpp"
#include "pdmosc/wavefun.hpp"

namespace pdmosc::cli {

namespace {

struct Output {
  std::string data;
  std::string summary;
  int code = 0;
};

const std::map<std::string, Command> kCommands{
    {"spectrum", Command::spectrum},
    {"oracle", Command::oracle},
    {"wavefunction", Command::wavefunction},
    {"classical", Command::classical},
    {"effective-potential", Command::effective_potential},
    {"geometry", Command::geometry},
    {"deform", Command::deform},
    {"verify-all", Command::verify_all},
};

const std::map<std::string, std::string> kDescriptions{
    {"spectrum", "closed-form energy levels with degeneracy and implicit-equation residual"},
    {"oracle", "finite-difference radial eigenvalues against the closed form"},
    {"wavefunction", "sample an eigenfunction in radial or Cartesian form"},
    {"classical", "integrate a classical orbit; report closure and invariant drift"},
    {"effective-potential", "radial effective potential and its minimum"},
    {"geometry", "conformal metric factor, scalar curvature and potential"},
    {"deform", "deformed spectrum of the harmonic base via the fixed-point solver"},
    {"verify-all", "run all acceptance checks (exit code 2 on failure)"},
};

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

ModelParams params_of(const RunConfig& c) { return ModelParams(c.lambda, c.omega, c.hbar, c.dim); }

std::string render(const RunConfig& c, const io::Table& t) {
  std::ostringstream os;
  if (c.format == Format::csv) {
    io::write_csv(os, t);
  } else {
    nlohmann::json j{{"config", to_json(c)}, {"columns", t.columns}, {"rows", io::to_json(t)}};
    os << j.dump(2) << '\n';
  }
  return os.str();
}

std::string render(const RunConfig& c, const SpectrumTable& t) {
  std::ostringstream os;
  if (c.format == Format::csv) {
    io::write_csv(os, t);
  } else {
    nlohmann::json j{{"config", to_json(c)}, {"columns", io::spectrum_columns(t)}, {"rows", io::to_json(t)}};
    os << j.dump(2) << '\n';
  }
  return os.str();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// n evenly spaced samples including both ends.
std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("--grid-points must be >= 2");
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = a + (b - a) * i / (n - 1);
  return xs;
}

Output do_spectrum(const RunConfig& c) {
  const ModelParams p = params_of(c);
  const SpectrumTable t = spectrum_table(c.n_max, p);
  Output o{render(c, t), {}};
  o.summary = "spectrum: " + std::to_string(t.rows.size()) + " levels, E_0 = " + num(t.rows.front().energy) +
              ", E_max = " + num(t.rows.back().energy) + ", threshold = " + num(continuum_threshold(p));
  return o;
}

Output do_oracle(const RunConfig& c) {
  const ModelParams p = params_of(c);
  const int l_max = c.l_max.value_or(2);
  const int k_max = c.k_max.value_or(2);
  numverify::RadialGrid grid = numverify::default_grid(p, l_max, k_max);
  if (c.r_max) grid.r_max = *c.r_max;
  if (c.grid_points) grid.num_points = *c.grid_points;
  grid = numverify::RadialGrid(grid.r_min, grid.r_max, grid.num_points);  // revalidate
  const SpectrumTable t = numverify::oracle_report(p, l_max, k_max, &grid);
  double worst = 0.0;
  for (const auto& r : t.rows) worst = std::max(worst, r.oracle->rel_error);
  Output o{render(c, t), {}};
  o.summary = "oracle: " + std::to_string(t.rows.size()) + " levels on " + std::to_string(grid.num_points) +
              " points, max rel_error = " + num(worst);
  return o;
}

Output do_wavefunction(const RunConfig& c) {
  const ModelParams p = params_of(c);
  const double lam = p.lambda();
  io::Table t;
  std::string what;
  if (!c.cartesian.empty()) {
    const CartesianEigenfunction f = make_cartesian(c.cartesian, p);
    const double half = c.r_max.value_or(8.0 / f.beta());
    for (int i = 1; i <= p.dim(); ++i) t.columns.push_back("q_" + std::to_string(i));
    t.columns.push_back("value");
    t.columns.push_back("weight");
    std::vector<double> q(p.dim(), 0.0);
    auto emit = [&] {
      double r2 = 0.0;
      for (double x : q) r2 += x * x;
      std::vector<double> row = q;
      row.push_back(f(q));
      row.push_back(1.0 + lam * r2);
      t.rows.push_back(std::move(row));
    };
    if (p.dim() == 2) {
      const auto xs = linspace(-half, half, c.grid_points.value_or(81));
      for (double x : xs)
        for (double y : xs) {
          q = {x, y};
          emit();
        }
    } else {
      // Along the first axis, other coordinates zero.
      for (double x : linspace(-half, half, c.grid_points.value_or(401))) {
        q[0] = x;
        emit();
      }
    }
    what = "cartesian, E = " + num(f.state().energy);
  } else {
    const RadialEigenfunction f = make_radial(c.k, c.l, p);
    const double r_max = c.r_max.value_or(8.0 / f.beta());
    t.columns = {"r", "value", "weight"};
    for (double r : linspace(0.0, r_max, c.grid_points.value_or(401)))
      t.rows.push_back({r, f(r), (1.0 + lam * r * r) * std::pow(r, p.dim() - 1)});
    what = "radial k=" + std::to_string(c.k) + " l=" + std::to_string(c.l) + ", E = " + num(f.energy());
  }
  Output o{render(c, t), {}};
  o.summary = "wavefunction " + what + ", " + std::to_string(t.rows.size()) + " samples";
  return o;
}

Output do_classical(const RunConfig& c) {
  const ModelParams p = params_of(c);
  PhaseState x0;
  x0.q = c.q;
  x0.p = c.p;
  if (x0.q.empty()) {
    x0.q.assign(p.dim(), 0.0);
    x0.q[0] = 1.0;
  }
  if (x0.p.empty()) {
    x0.p.assign(p.dim(), 0.0);
    x0.p[p.dim() > 1 ? 1 : 0] = p.dim() > 1 ? 1.0 : 0.5;
  }
  if (static_cast<int>(x0.q.size()) != p.dim() || static_cast<int>(x0.p.size()) != p.dim())
    throw std::invalid_argument("--q and --p need exactly dim components");
  if (c.periods && c.t_end) throw std::invalid_argument("--periods and --t-end are mutually exclusive");

  const Trajectory traj = c.periods ? integrate_radial_periods(x0, p, *c.periods, c.tol)
                                    : integrate_orbit(x0, p, c.t_end.value_or(20.0 * std::numbers::pi / p.omega()), c.tol);
  const DriftReport drift = conservation_drift(traj);
  const ClosureResult cl = closure_check(traj, 1e-6);
  Output o{render(c, io::trajectory_table(traj)), {}};
  o.summary = "classical: " + std::to_string(traj.samples.size()) + " samples, H = " + num(hamiltonian(x0, p)) +
              ", max drift = " + num(drift.max()) +
              (cl.is_closed ? ", closes after T = " + num(*cl.period) : ", no closure detected");
  return o;
}

Output do_effective_potential(const RunConfig& c) {
  const ModelParams p = params_of(c);
  const EffectivePotentialSpec spec(p, c.cn);
  const double r_max = c.r_max.value_or(20.0);
  const int n = c.grid_points.value_or(2001);
  io::Table t{{"r", "value"}, {}};
  std::size_t best = 0;
  const auto rs = linspace(0.0, r_max, n);
  for (std::size_t i = 1; i < rs.size(); ++i) {  // r = 0 is singular
    t.rows.push_back({rs[i], effective_potential(rs[i], spec)});
    if (t.rows.back()[1] < t.rows[best][1]) best = t.rows.size() - 1;
  }
  Output o{render(c, t), {}};
  o.summary = "effective-potential: sampled minimum at r = " + num(t.rows[best][0]) + ", U = " + num(t.rows[best][1]);
  if (p.omega() > 0.0 && c.cn > 0.0) {
    const EffectiveMinimum m = effective_minimum(spec);
    o.summary += " (exact r = " + num(m.r_min) + ", U = " + num(m.u_min) + ")";
  }
  return o;
}

Output do_geometry(const RunConfig& c) {
  const ModelParams p = params_of(c);
  io::Table t{{"r", "metric_factor", "scalar_curvature", "potential"}, {}};
  for (double r : linspace(0.0, c.r_max.value_or(20.0), c.grid_points.value_or(401)))
    t.rows.push_back({r, metric_factor(r, p), scalar_curvature(r, p), potential(r, p)});
  Output o{render(c, t), {}};
  o.summary = "geometry: " + std::to_string(t.rows.size()) + " samples, R(0) = " + num(scalar_curvature(0.0, p)) +
              ", potential limit = " + num(continuum_threshold(p));
  return o;
}

Output do_deform(const RunConfig& c) {
  const ModelParams p = params_of(c);
  const BaseSpectrum base = harmonic_base(p.dim(), p.hbar());
  io::Table t{{"n", "energy", "closed_form", "difference"}, {}};
  double worst = 0.0;
  for (int n = 0; n <= c.n_max; ++n) {
    const double e = solve_deformed_spectrum(base, n, p);
    const double ref = energy_closed_form(n, p);
    t.rows.push_back({static_cast<double>(n), e, ref, e - ref});
    worst = std::max(worst, std::abs(e - ref));
  }
  Output o{render(c, t), {}};
  o.summary = "deform: " + std::to_string(t.rows.size()) + " levels of the " + base.name +
              " base, max |E - closed form| = " + num(worst);
  return o;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

Output do_verify_all(const RunConfig& c) {
  verify::VerifyOptions opt;
  opt.oracle_lambdas = c.oracle_lambdas;
  const auto results = verify::run_all(opt);
  Output o;
  std::ostringstream os;
  int failed = 0;
  std::string lines;
  for (const auto& r : results) {
    failed += r.passed ? 0 : 1;
    lines += verify::summary_line(r) + '\n';
  }
  if (c.format == Format::csv) {
    os << "id,name,passed,measured,expected,tolerance,runtime_s,runtime_limit_s\n";
    for (const auto& r : results)
      os << r.id << ',' << csv_field(r.name) << ',' << (r.passed ? "true" : "false") << ','
         << io::format_number(r.measured) << ',' << io::format_number(r.expected) << ','
         << io::format_number(r.tolerance) << ',' << io::format_number(r.runtime_s) << ','
         << io::format_number(r.runtime_limit_s) << '\n';
  } else {
    nlohmann::json j{{"config", to_json(c)}, {"passed", failed == 0}, {"rows", verify::to_json(results)}};
    os << j.dump(2) << '\n';
  }
  o.data = os.str();
  o.summary = lines + "verify-all: " + std::to_string(results.size() - failed) + "/" +
              std::to_string(results.size()) + " criteria passed";
  o.code = verification_exit_code(results);
  return o;
}

void write_atomically(const std::string& path, const std::string& data) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << data;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("cannot write " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot write " + path);
  }
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* flag) {
  std::vector<T> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      if constexpr (std::is_same_v<T, int>) v.push_back(std::stoi(item, &used));
      else v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("bad value in ") + flag + ": '" + item + "'");
    }
  }
  if (v.empty()) throw std::invalid_argument(std::string(flag) + " is empty");
  return v;
}

}  // namespace

int verification_exit_code(const std::vector<verify::CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return 2;
  return 0;
}

std::string command_name(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name;
  return "?";
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", command_name(c.command)},
          {"params", {{"lambda", c.lambda}, {"omega", c.omega}, {"hbar", c.hbar}, {"dim", c.dim}}},
          {"n_max", c.n_max},
          {"l", c.l},
          {"k", c.k},
          {"l_max", opt_json(c.l_max)},
          {"k_max", opt_json(c.k_max)},
          {"cn", c.cn},
          {"grid_points", opt_json(c.grid_points)},
          {"r_max", opt_json(c.r_max)},
          {"tol", c.tol},
          {"cartesian", c.cartesian},
          {"q", c.q},
          {"p", c.p},
          {"t_end", opt_json(c.t_end)},
          {"periods", opt_json(c.periods)},
          {"lambdas", c.oracle_lambdas},
          {"out", c.out},
          {"format", c.format == Format::csv ? "csv" : "json"}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string cartesian, q, p, lambdas, format = "csv";
  std::optional<int> l_opt, k_opt;

  CLI::App app{"Deformed position-dependent-mass oscillator: spectra, eigenfunctions, orbits"};
  app.name("pdmosc");
  app.require_subcommand(1, 1);

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, cmd] : kCommands) {
    CLI::App* s = app.add_subcommand(name, kDescriptions.at(name));
    s->add_option("--lambda", c.lambda, "deformation parameter (>= 0)")->capture_default_str();
    s->add_option("--omega", c.omega, "frequency")->capture_default_str();
    s->add_option("--hbar", c.hbar, "Planck constant")->capture_default_str();
    s->add_option("--dim", c.dim, "dimension N")->capture_default_str();
    s->add_option("--out", c.out, "output file (default: stdout)");
    s->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    subs[name] = s;
  }
  for (const char* name : {"spectrum", "deform"})
    subs[name]->add_option("--n-max", c.n_max, "highest level")->capture_default_str();

  subs["oracle"]->add_option("--l", l_opt, "largest angular number (default 2)");
  subs["oracle"]->add_option("--k", k_opt, "largest radial number (default 2)");
  subs["wavefunction"]->add_option("--l", c.l, "angular number")->capture_default_str();
  subs["wavefunction"]->add_option("--k", c.k, "radial number")->capture_default_str();
  subs["wavefunction"]->add_option("--cartesian", cartesian, "comma-separated n_1,...,n_N (Cartesian form)");
  for (const char* name : {"oracle", "wavefunction", "effective-potential", "geometry"}) {
    subs[name]->add_option("--grid-points", c.grid_points, "number of sample or grid points");
    subs[name]->add_option("--r-max", c.r_max, "outer radius");
  }
  subs["effective-potential"]->add_option("--cn", c.cn, "centrifugal constant c_N")->capture_default_str();
  subs["classical"]->add_option("--q", q, "initial position, comma separated");
  subs["classical"]->add_option("--p", p, "initial momentum, comma separated");
  subs["classical"]->add_option("--tol", c.tol, "integrator tolerance")->capture_default_str();
  subs["classical"]->add_option("--t-end", c.t_end, "integration time");
  subs["classical"]->add_option("--periods", c.periods, "integrate this many radial periods");
  subs["verify-all"]->add_option("--lambdas", lambdas, "comma-separated lambda grid for the oracle check");

  std::vector<std::string> argv_store{"pdmosc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& [name, s] : subs)
      if (s->parsed()) c.command = kCommands.at(name);
    c.format = format == "json" ? Format::json : Format::csv;
    if (l_opt) c.l_max = l_opt;
    if (k_opt) c.k_max = k_opt;
    if (!cartesian.empty()) c.cartesian = parse_list<int>(cartesian, "--cartesian");
    if (!q.empty()) c.q = parse_list<double>(q, "--q");
    if (!p.empty()) c.p = parse_list<double>(p, "--p");
    if (!lambdas.empty()) c.oracle_lambdas = parse_list<double>(lambdas, "--lambdas");
    (void)params_of(c);  // reject invalid parameters before doing any work

    Output o;
    switch (c.command) {
      case Command::spectrum: o = do_spectrum(c); break;
      case Command::oracle: o = do_oracle(c); break;
      case Command::wavefunction: o = do_wavefunction(c); break;
      case Command::classical: o = do_classical(c); break;
      case Command::effective_potential: o = do_effective_potential(c); break;
      case Command::geometry: o = do_geometry(c); break;
      case Command::deform: o = do_deform(c); break;
      case Command::verify_all: o = do_verify_all(c); break;
    }
    if (c.out.empty()) {
      out << o.data;
      err << o.summary << '\n';
    } else {
      write_atomically(c.out, o.data);
      out << o.summary << " -> " << c.out << '\n';
    }
    return o.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pdmosc::cli
