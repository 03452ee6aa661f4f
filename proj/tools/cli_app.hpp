#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdmosc/verify.hpp"

namespace pdmosc::cli {

enum class Command { spectrum, oracle, wavefunction, classical, effective_potential, geometry, deform, verify_all };
enum class Format { csv, json };

struct RunConfig {
  Command command = Command::spectrum;
  double lambda = 0.02;
  double omega = 1.0;
  double hbar = 1.0;
  int dim = 3;

  int n_max = 10;
  int l = 0;
  int k = 0;
  std::optional<int> l_max;           // oracle; defaults to 2
  std::optional<int> k_max;           // oracle; defaults to 2
  double cn = 100.0;
  std::optional<int> grid_points;
  std::optional<double> r_max;
  double tol = 1e-10;
  std::vector<int> cartesian;         // wavefunction: quantum numbers per axis
  std::vector<double> q;              // classical initial point
  std::vector<double> p;
  std::optional<double> t_end;
  std::optional<double> periods;
  std::vector<double> oracle_lambdas{0.0, 0.02, 0.1};

  std::string out;                    // empty: write to stdout
  Format format = Format::csv;
};

[[nodiscard]] std::string command_name(Command c);
[[nodiscard]] nlohmann::json to_json(const RunConfig& c);

/// 0 when every criterion passed, 2 otherwise.
[[nodiscard]] int verification_exit_code(const std::vector<verify::CriterionResult>& results);

/// Runs one command. `args` excludes the program name. Returns 0 on success,
/// 1 on a parse or domain error, 2 when verify-all reports a failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdmosc::cli
