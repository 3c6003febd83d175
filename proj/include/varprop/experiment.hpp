#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "varprop/analytic_params.hpp"
#include "varprop/circuit.hpp"
#include "varprop/variational.hpp"

namespace varprop {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field(std::move(field)) {}
  std::string field;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(std::string method, const std::string& message)
      : std::runtime_error("method '" + method + "': " + message),
        method(std::move(method)) {}
  std::string method;
};

struct ModelSpec {
  std::string family;  // two_level | qim | xxz_nn | xxz_nnn
  int n_qubits = 1;
  std::map<std::string, double> couplings;
};

struct MethodSpec {
  std::string label;    // column label, e.g. "var_l1_BABA"
  std::string kind;     // exact | ts1 | ts2 | ruth4 | ts7 | var_l1 | var_l2 | var_cubic | var_krylov
  std::string pattern;  // ansatz override; empty = config default
  int krylov_dim = 0;   // var_krylov only
};

struct TimeSpec {
  bool is_grid = false;
  // grid form
  double start = 0.0, stop = 0.0;
  int points = 0;
  // stroboscopic form
  double t_total = 0.0, tau = 0.0;
};

struct ExperimentConfig {
  ModelSpec model;
  std::string ansatz_pattern;
  std::vector<MethodSpec> methods;
  TimeSpec time;
  std::string observable;  // frobenius | strob_frobenius | magnetization | params
  std::string output;
  double rtol = 1e-9;
  double atol = 1e-12;
};

/// Parses and validates a JSON experiment description. Unknown keys are
/// rejected; errors carry the offending field path.
ExperimentConfig parse_config(const std::string& json_text);

ExperimentConfig load_config_file(const std::string& path);

struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

HamiltonianSplit build_model(const ModelSpec& spec);

/// Runs every method of the config against the shared model. Deterministic:
/// identical configs produce identical tables.
ResultTable run_experiment(const ExperimentConfig& config);

/// 17-significant-digit decimal form used in all CSV output.
std::string format_g17(double value);

void write_csv(const ResultTable& table, std::ostream& out);
void write_csv_file(const ResultTable& table, const std::string& path);

/// Closed-form cubic parameter values for the config's ansatz pattern,
/// expanded to the pattern's free slots (palindromic values repeated).
RealVector cubic_free_values(const HamiltonianSplit& split,
                             const std::string& pattern, double t);

/// Per-slot (linear, cubic) coefficients behind cubic_free_values; two-block
/// patterns only.
CubicParams cubic_coefficients(const HamiltonianSplit& split,
                               const std::string& pattern);

/// Builds the gate program for an Ising config: integrates (or evaluates) the
/// first method at time.tau and lowers the frozen ansatz.
GateProgram emit_circuit(const ExperimentConfig& config);

}  // namespace varprop
