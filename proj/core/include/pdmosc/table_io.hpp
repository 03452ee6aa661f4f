#pragma once

// CSV and JSON serialization of spectra, curves and trajectories.
// Numbers are written with 17 significant digits so they round-trip exactly.

#include <nlohmann/json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "pdmosc/classical.hpp"
#include "pdmosc/params.hpp"
#include "pdmosc/spectrum.hpp"

namespace pdmosc::io {

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
[[nodiscard]] std::string format_number(double v);

/// Finite values as numbers, non-finite values as null.
[[nodiscard]] nlohmann::json json_number(double v);

[[nodiscard]] nlohmann::json to_json(const ModelParams& p);

/// Header: n,energy,degeneracy,gap_to_threshold,residual
/// plus k,l,closed_form,rel_error,convergence_order,boundary_contaminated for oracle tables.
[[nodiscard]] std::vector<std::string> spectrum_columns(const SpectrumTable& t);
void write_csv(std::ostream& os, const SpectrumTable& t);
/// Array of row objects keyed by spectrum_columns.
[[nodiscard]] nlohmann::json to_json(const SpectrumTable& t);

/// Generic numeric table.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
void write_csv(std::ostream& os, const Table& t);
[[nodiscard]] nlohmann::json to_json(const Table& t);

/// t, q_1..q_N, p_1..p_N, H, then drift_<name> = Q(t) - Q(0) per invariant.
[[nodiscard]] Table trajectory_table(const Trajectory& traj);

}  // namespace pdmosc::io
