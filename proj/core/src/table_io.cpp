#include "pdmosc/table_io.hpp"

#include <cmath>
#include <cstdio>

namespace pdmosc::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json to_json(const ModelParams& p) {
  return {{"lambda", p.lambda()}, {"omega", p.omega()}, {"hbar", p.hbar()}, {"dim", p.dim()}};
}

std::vector<std::string> spectrum_columns(const SpectrumTable& t) {
  std::vector<std::string> cols{"n", "energy", "degeneracy", "gap_to_threshold", "residual"};
  if (t.provenance == Provenance::oracle)
    cols.insert(cols.end(), {"k", "l", "closed_form", "rel_error", "convergence_order", "boundary_contaminated"});
  return cols;
}

void write_csv(std::ostream& os, const SpectrumTable& t) {
  const auto cols = spectrum_columns(t);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : t.rows) {
    os << r.n << ',' << format_number(r.energy) << ',' << r.degeneracy << ',' << format_number(r.gap_to_threshold)
       << ',' << format_number(r.residual);
    if (t.provenance == Provenance::oracle) {
      const OracleColumns oc = r.oracle.value_or(OracleColumns{});
      os << ',' << oc.k << ',' << oc.l << ',' << format_number(oc.closed_form) << ',' << format_number(oc.rel_error)
         << ',' << format_number(oc.convergence_order) << ',' << (oc.boundary_contaminated ? 1 : 0);
    }
    os << '\n';
  }
}

nlohmann::json to_json(const SpectrumTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json o{{"n", r.n},
                     {"energy", json_number(r.energy)},
                     {"degeneracy", r.degeneracy},
                     {"gap_to_threshold", json_number(r.gap_to_threshold)},
                     {"residual", json_number(r.residual)}};
    if (t.provenance == Provenance::oracle && r.oracle) {
      o["k"] = r.oracle->k;
      o["l"] = r.oracle->l;
      o["closed_form"] = json_number(r.oracle->closed_form);
      o["rel_error"] = json_number(r.oracle->rel_error);
      o["convergence_order"] = json_number(r.oracle->convergence_order);
      o["boundary_contaminated"] = r.oracle->boundary_contaminated;
    }
    rows.push_back(std::move(o));
  }
  return rows;
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

nlohmann::json to_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) o[t.columns[i]] = json_number(row[i]);
    rows.push_back(std::move(o));
  }
  return rows;
}

Table trajectory_table(const Trajectory& traj) {
  const int dim = traj.params.dim();
  Table t;
  t.columns.push_back("t");
  for (int i = 1; i <= dim; ++i) t.columns.push_back("q_" + std::to_string(i));
  for (int i = 1; i <= dim; ++i) t.columns.push_back("p_" + std::to_string(i));
  t.columns.push_back("H");
  for (const auto& name : ConservedSet::names(dim)) t.columns.push_back("drift_" + name);
  if (traj.samples.empty()) return t;
  const std::vector<double> ref = conserved_set(traj.samples.front(), traj.params).flatten();
  for (const auto& s : traj.samples) {
    std::vector<double> row{s.t};
    row.insert(row.end(), s.q.begin(), s.q.end());
    row.insert(row.end(), s.p.begin(), s.p.end());
    const std::vector<double> v = conserved_set(s, traj.params).flatten();
    row.push_back(v.front());
    for (std::size_t i = 0; i < v.size(); ++i) row.push_back(v[i] - ref[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace pdmosc::io
