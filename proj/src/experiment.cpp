#include "varprop/experiment.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "varprop/reference_propagators.hpp"

namespace varprop {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
  if (!obj.is_object())
    throw ConfigError(path.empty() ? "<root>" : path, "must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
}

double require_number(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(path + "." + key, "missing");
  if (!obj[key].is_number()) throw ConfigError(path + "." + key, "must be a number");
  return obj[key].get<double>();
}

int require_int(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(path + "." + key, "missing");
  if (!obj[key].is_number_integer()) throw ConfigError(path + "." + key, "must be an integer");
  return obj[key].get<int>();
}

const std::set<std::string> kMethodKinds = {"exact",  "ts1",    "ts2",
                                            "ruth4",  "ts7",    "var_l1",
                                            "var_l2", "var_cubic", "var_krylov"};

MethodSpec parse_method(const std::string& text, std::size_t index) {
  const std::string path = "methods[" + std::to_string(index) + "]";
  MethodSpec spec;
  spec.label = text;
  for (auto& ch : spec.label)
    if (ch == ':') ch = '_';

  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(':', pos);
    parts.push_back(text.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  spec.kind = parts[0];
  if (!kMethodKinds.count(spec.kind))
    throw ConfigError(path, "unknown method '" + spec.kind + "'");

  std::size_t arg = 1;
  if (spec.kind == "var_krylov") {
    if (parts.size() < 2)
      throw ConfigError(path, "var_krylov needs a basis size, e.g. var_krylov:3");
    try {
      spec.krylov_dim = std::stoi(parts[1]);
    } catch (...) {
      throw ConfigError(path, "var_krylov basis size must be an integer");
    }
    if (spec.krylov_dim < 1) throw ConfigError(path, "var_krylov basis size must be >= 1");
    arg = 2;
  }
  if (arg < parts.size()) {
    spec.pattern = parts[arg];
    ++arg;
    if (spec.kind.rfind("var", 0) != 0)
      throw ConfigError(path, "only var_* methods take an ansatz pattern suffix");
  }
  if (arg < parts.size()) throw ConfigError(path, "too many ':' suffixes");
  return spec;
}

void validate_pattern(const std::string& pattern, int block_count,
                      const std::string& path) {
  if (pattern.empty()) throw ConfigError(path, "empty pattern");
  for (char ch : pattern)
    if (ch < 'A' || ch >= char('A' + block_count))
      throw ConfigError(path, std::string("pattern letter '") + ch +
                                  "' is not a block of this model");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  reject_unknown_keys(root, "",
                      {"model", "ansatz", "methods", "time", "observable",
                       "output", "tolerances"});

  ExperimentConfig config;

  if (!root.contains("model")) throw ConfigError("model", "missing");
  const json& model = root["model"];
  reject_unknown_keys(model, "model", {"family", "N", "couplings"});
  if (!model.contains("family") || !model["family"].is_string())
    throw ConfigError("model.family", "missing or not a string");
  config.model.family = model["family"].get<std::string>();

  static const std::map<std::string, std::vector<std::string>> kFamilies = {
      {"two_level", {"h_x", "h_z"}},
      {"qim", {"J", "h_x", "h_z"}},
      {"xxz_nn", {"J1", "delta1"}},
      {"xxz_nnn", {"J1", "J2", "delta1", "delta2"}}};
  const auto fam = kFamilies.find(config.model.family);
  if (fam == kFamilies.end())
    throw ConfigError("model.family", "unknown model '" + config.model.family + "'");

  if (config.model.family == "two_level") {
    config.model.n_qubits = model.contains("N") ? require_int(model, "model", "N") : 1;
    if (config.model.n_qubits != 1) throw ConfigError("model.N", "two_level has N = 1");
  } else {
    config.model.n_qubits = require_int(model, "model", "N");
    const int min_n = config.model.family == "qim" ? 2 : 3;
    if (config.model.n_qubits < min_n || config.model.n_qubits > kMaxQubits)
      throw ConfigError("model.N", "must be in [" + std::to_string(min_n) + ", " +
                                       std::to_string(kMaxQubits) + "]");
  }

  if (!model.contains("couplings")) throw ConfigError("model.couplings", "missing");
  const json& couplings = model["couplings"];
  reject_unknown_keys(couplings, "model.couplings",
                      {fam->second.begin(), fam->second.end()});
  for (const auto& key : fam->second)
    config.model.couplings[key] = require_number(couplings, "model.couplings", key);

  const int block_count = config.model.family == "xxz_nnn" ? 3 : 2;

  if (!root.contains("ansatz")) throw ConfigError("ansatz", "missing");
  reject_unknown_keys(root["ansatz"], "ansatz", {"pattern"});
  if (!root["ansatz"].contains("pattern") || !root["ansatz"]["pattern"].is_string())
    throw ConfigError("ansatz.pattern", "missing or not a string");
  config.ansatz_pattern = root["ansatz"]["pattern"].get<std::string>();
  validate_pattern(config.ansatz_pattern, block_count, "ansatz.pattern");

  if (!root.contains("methods") || !root["methods"].is_array() || root["methods"].empty())
    throw ConfigError("methods", "must be a nonempty array of method names");
  for (std::size_t i = 0; i < root["methods"].size(); ++i) {
    if (!root["methods"][i].is_string())
      throw ConfigError("methods[" + std::to_string(i) + "]", "must be a string");
    MethodSpec spec = parse_method(root["methods"][i].get<std::string>(), i);
    if (!spec.pattern.empty())
      validate_pattern(spec.pattern, block_count, "methods[" + std::to_string(i) + "]");
    if (spec.kind == "ts7" && block_count != 3)
      throw ConfigError("methods[" + std::to_string(i) + "]",
                        "ts7 needs a three-block model");
    if ((spec.kind == "ts1" || spec.kind == "ts2" || spec.kind == "ruth4") &&
        block_count != 2)
      throw ConfigError("methods[" + std::to_string(i) + "]",
                        spec.kind + " needs a two-block model");
    config.methods.push_back(std::move(spec));
  }

  if (!root.contains("time")) throw ConfigError("time", "missing");
  const json& time = root["time"];
  const bool grid_form = time.contains("start") || time.contains("stop") || time.contains("points");
  const bool strob_form = time.contains("t_total") || time.contains("tau");
  if (grid_form && strob_form)
    throw ConfigError("time", "use either {start, stop, points} or {t_total, tau}");
  if (grid_form) {
    reject_unknown_keys(time, "time", {"start", "stop", "points"});
    config.time.is_grid = true;
    config.time.start = require_number(time, "time", "start");
    config.time.stop = require_number(time, "time", "stop");
    config.time.points = require_int(time, "time", "points");
    if (config.time.start < 0) throw ConfigError("time.start", "must be >= 0");
    if (config.time.stop <= config.time.start)
      throw ConfigError("time.stop", "must exceed time.start");
    if (config.time.points < 2) throw ConfigError("time.points", "must be >= 2");
  } else if (strob_form) {
    reject_unknown_keys(time, "time", {"t_total", "tau"});
    config.time.is_grid = false;
    config.time.t_total = require_number(time, "time", "t_total");
    config.time.tau = require_number(time, "time", "tau");
    if (config.time.tau <= 0) throw ConfigError("time.tau", "must be > 0");
    if (config.time.t_total < config.time.tau)
      throw ConfigError("time.t_total", "must cover at least one step");
  } else {
    throw ConfigError("time", "missing {start, stop, points} or {t_total, tau}");
  }

  if (!root.contains("observable") || !root["observable"].is_string())
    throw ConfigError("observable", "missing or not a string");
  config.observable = root["observable"].get<std::string>();
  static const std::set<std::string> kObservables = {"frobenius", "strob_frobenius",
                                                     "magnetization", "params"};
  if (!kObservables.count(config.observable))
    throw ConfigError("observable", "unknown observable '" + config.observable + "'");
  const bool needs_grid = config.observable == "frobenius" || config.observable == "params";
  if (needs_grid != config.time.is_grid)
    throw ConfigError("time", needs_grid
                                  ? "observable '" + config.observable + "' needs a time grid"
                                  : "observable '" + config.observable +
                                        "' needs {t_total, tau}");
  if (config.observable != "frobenius")
    for (std::size_t i = 0; i < config.methods.size(); ++i)
      if (config.methods[i].kind == "exact")
        throw ConfigError("methods[" + std::to_string(i) + "]",
                          "the exact reference is built into observable '" +
                              config.observable + "'");
  if (config.observable == "params")
    for (std::size_t i = 0; i < config.methods.size(); ++i)
      if (config.methods[i].kind.rfind("var", 0) != 0)
        throw ConfigError("methods[" + std::to_string(i) + "]",
                          "observable 'params' only makes sense for var_* methods");

  if (root.contains("output")) {
    if (!root["output"].is_string()) throw ConfigError("output", "must be a string");
    config.output = root["output"].get<std::string>();
  }
  if (root.contains("tolerances")) {
    reject_unknown_keys(root["tolerances"], "tolerances", {"rtol", "atol"});
    if (root["tolerances"].contains("rtol"))
      config.rtol = require_number(root["tolerances"], "tolerances", "rtol");
    if (root["tolerances"].contains("atol"))
      config.atol = require_number(root["tolerances"], "tolerances", "atol");
    if (config.rtol <= 0 || config.atol <= 0)
      throw ConfigError("tolerances", "must be positive");
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

HamiltonianSplit build_model(const ModelSpec& spec) {
  const auto& c = spec.couplings;
  if (spec.family == "two_level")
    return build_two_level(c.at("h_x"), c.at("h_z"));
  if (spec.family == "qim")
    return build_qim(c.at("J"), c.at("h_x"), c.at("h_z"), spec.n_qubits);
  if (spec.family == "xxz_nn")
    return build_xxz_nn(c.at("J1"), c.at("delta1"), spec.n_qubits);
  if (spec.family == "xxz_nnn")
    return build_xxz_nnn(c.at("J1"), c.at("J2"), c.at("delta1"), c.at("delta2"),
                         spec.n_qubits);
  throw ConfigError("model.family", "unknown model '" + spec.family + "'");
}

namespace {

TraceRecord swapped_two_block(TraceRecord r) {
  std::swap(r.a2, r.b2);
  return r;
}

TraceRecord dense_two_block(const Matrix& a, const Matrix& b) {
  TraceRecord r;
  r.a2 = (a * a).trace().real();
  r.b2 = (b * b).trace().real();
  r.ab = (a * b).trace().real();
  r.a2b2 = (a * a * b * b).trace().real();
  r.abab = (a * b * a * b).trace().real();
  return r;
}

/// Two-block trace record with "A" = the block the pattern opens with.
TraceRecord pattern_traces(const HamiltonianSplit& split, const std::string& pattern) {
  const auto& c = split.couplings;
  const bool first_is_a = pattern[0] == 'A';
  if (c.count("J") && c.count("h_x") && c.count("h_z")) {
    // trace table labels the coupling block "A"; the split calls it "B"
    TraceRecord r = ising_closed_traces(c.at("J"), c.at("h_x"), c.at("h_z"),
                                        split.n_qubits);
    return first_is_a ? swapped_two_block(r) : r;
  }
  if (c.count("J1") && c.count("delta1") && !c.count("J2")) {
    TraceRecord r = xxz_nn_closed_traces(c.at("J1"), c.at("delta1"), split.n_qubits);
    return first_is_a ? r : swapped_two_block(r);
  }
  // no closed form for this model: fall back to dense traces
  const Matrix& a = split.block(std::string(1, pattern[0])).op->matrix();
  const Matrix& b = split.block(pattern[0] == 'A' ? "B" : "A").op->matrix();
  return dense_two_block(a, b);
}

bool is_palindrome(const std::string& s) {
  for (std::size_t i = 0; i < s.size() / 2; ++i)
    if (s[i] != s[s.size() - 1 - i]) return false;
  return true;
}

}  // namespace

CubicParams cubic_coefficients(const HamiltonianSplit& split, const std::string& pattern) {
  if (pattern.size() == 2 && pattern[0] != pattern[1])
    return cubic_2exp(pattern_traces(split, pattern), ActionKind::FirstOrder);
  if (pattern.size() == 3 && is_palindrome(pattern) && pattern[0] != pattern[1])
    return cubic_3exp(pattern_traces(split, pattern));
  throw std::invalid_argument(
      "cubic parameters cover two-factor and palindromic three-factor patterns; got '" +
      pattern + "'");
}

RealVector cubic_free_values(const HamiltonianSplit& split, const std::string& pattern,
                             double t) {
  if (pattern == "ABCBA" && split.blocks.size() == 3) {
    const auto& c = split.couplings;
    const TraceRecord three = xxz_nnn_closed_traces(
        c.at("J1"), c.at("J2"), c.at("delta1"), c.at("delta2"), split.n_qubits);
    const auto p = three_block_two_step_params(grouped_outer_traces(three),
                                               inner_stage_traces(three), t);
    RealVector v(5);
    v << p[0], p[3], p[4], p[5], p[2];
    return v;
  }
  const CubicParams params = cubic_coefficients(split, pattern);
  RealVector v(Eigen::Index(pattern.size()));
  if (pattern.size() == 2) {
    v << params.slots[0].at(t), params.slots[1].at(t);
  } else {
    const double outer = params.slots[0].at(t);
    v << outer, params.slots[1].at(t), outer;
  }
  return v;
}

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_csv(const ResultTable& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_g17(row[i]);
    out << "\n";
  }
}

void write_csv_file(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(table, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

namespace {

struct MethodRunner {
  const ExperimentConfig& config;
  const HamiltonianSplit& split;
  const Generator& h;

  ProductAnsatz make_ansatz(const MethodSpec& method) const {
    const std::string& pattern =
        method.pattern.empty() ? config.ansatz_pattern : method.pattern;
    return ProductAnsatz::from_pattern(split, pattern);
  }

  IntegrateOptions integrate_options() const {
    IntegrateOptions opts;
    opts.rtol = config.rtol;
    opts.atol = config.atol;
    return opts;
  }

  TraceScope scope_for(const MethodSpec& method) const {
    if (method.kind != "var_krylov") return TraceScope::full();
    if (method.krylov_dim > h.dim())
      throw SolverError(method.label, "Krylov size exceeds the Hilbert dimension");
    return krylov_basis(h, all_up_state(split.n_qubits), method.krylov_dim);
  }

  ParameterTrajectory integrate(const MethodSpec& method, const ProductAnsatz& ansatz,
                                double t_end, std::span<const double> grid) const {
    try {
      if (method.kind == "var_l2")
        return integrate_l2(ansatz, h, t_end, grid, integrate_options());
      return integrate_l1(ansatz, h, t_end, grid, integrate_options(), scope_for(method));
    } catch (const ConfigError&) {
      throw;
    } catch (const SolverError&) {
      throw;
    } catch (const std::exception& e) {
      throw SolverError(method.label, e.what());
    }
  }

  /// Fixed-step unitary at time tau for stroboscopic observables.
  Matrix step_unitary(const MethodSpec& method, double tau) const {
    if (method.kind == "exact") return exact_propagator(h, tau);
    if (method.kind == "ts1") return ts1(split, tau);
    if (method.kind == "ts2") return ts2(split, tau);
    if (method.kind == "ruth4") return ruth4(split, tau);
    if (method.kind == "ts7") return ts7_abc(split, tau);
    const ProductAnsatz ansatz = make_ansatz(method);
    if (method.kind == "var_cubic") {
      const std::string& pattern =
          method.pattern.empty() ? config.ansatz_pattern : method.pattern;
      return ansatz.unitary(cubic_free_values(split, pattern, tau));
    }
    const std::array<double, 1> grid = {tau};
    const auto traj = integrate(method, ansatz, tau, grid);
    return ansatz.unitary(traj.back());
  }

  /// Frobenius error columns on the shared grid.
  std::vector<double> error_curve(const MethodSpec& method,
                                  const std::vector<double>& grid) const {
    std::vector<double> out;
    out.reserve(grid.size());
    auto exact_at = [&](double t) { return exact_propagator(h, t); };
    if (method.kind == "var_l1" || method.kind == "var_l2" ||
        method.kind == "var_krylov") {
      const ProductAnsatz ansatz = make_ansatz(method);
      const auto traj = integrate(method, ansatz, grid.back(), grid);
      for (std::size_t i = 0; i < grid.size(); ++i)
        out.push_back(frobenius_error(exact_at(grid[i]), ansatz.unitary(traj.values[i])));
      return out;
    }
    for (double t : grid) {
      Matrix u;
      if (method.kind == "exact") u = exact_at(t);
      else if (method.kind == "ts1") u = ts1(split, t);
      else if (method.kind == "ts2") u = ts2(split, t);
      else if (method.kind == "ruth4") u = ruth4(split, t);
      else if (method.kind == "ts7") u = ts7_abc(split, t);
      else if (method.kind == "var_cubic") {
        const std::string& pattern =
            method.pattern.empty() ? config.ansatz_pattern : method.pattern;
        u = make_ansatz(method).unitary(cubic_free_values(split, pattern, t));
      } else {
        throw SolverError(method.label, "unsupported method for this observable");
      }
      out.push_back(frobenius_error(exact_at(t), u));
    }
    return out;
  }
};

std::vector<double> grid_times(const TimeSpec& time) {
  std::vector<double> grid(std::size_t(time.points));
  for (int i = 0; i < time.points; ++i)
    grid[std::size_t(i)] =
        time.start + (time.stop - time.start) * double(i) / double(time.points - 1);
  return grid;
}

ResultTable run_frobenius(const MethodRunner& runner) {
  const auto grid = grid_times(runner.config.time);
  ResultTable table;
  table.header = {"t"};
  std::vector<std::vector<double>> columns;
  for (const auto& method : runner.config.methods) {
    table.header.push_back(method.label);
    columns.push_back(runner.error_curve(method, grid));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row = {grid[i]};
    for (const auto& col : columns) row.push_back(col[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_strob_frobenius(const MethodRunner& runner) {
  const auto& time = runner.config.time;
  const long n_steps = long(std::floor(time.t_total / time.tau));
  ResultTable table;
  table.header = {"t"};

  std::vector<Matrix> steps, products;
  for (const auto& method : runner.config.methods) {
    table.header.push_back(method.label);
    steps.push_back(runner.step_unitary(method, time.tau));
    products.push_back(Matrix::Identity(runner.h.dim(), runner.h.dim()));
  }
  for (long n = 1; n <= n_steps; ++n) {
    const Matrix exact = exact_propagator(runner.h, double(n) * time.tau);
    std::vector<double> row = {double(n) * time.tau};
    for (std::size_t m = 0; m < steps.size(); ++m) {
      products[m] = products[m] * steps[m];
      if (n % 50 == 0) products[m] = polar_unitary(products[m]);
      row.push_back(frobenius_error(exact, products[m]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_magnetization(const MethodRunner& runner) {
  const auto& time = runner.config.time;
  const int n_steps = int(std::floor(time.t_total / time.tau));
  const int n_qubits = runner.split.n_qubits;
  const Vector psi0 = all_up_state(n_qubits);

  const Matrix exact_step = exact_propagator(runner.h, time.tau);
  const auto m_exact = magnetization_trajectory(psi0, exact_step, n_steps, n_qubits);

  ResultTable table;
  table.header = {"t", "m_exact"};
  std::vector<std::vector<double>> columns;
  for (const auto& method : runner.config.methods) {
    table.header.push_back("m_" + method.label);
    table.header.push_back("relerr_" + method.label);
    columns.push_back(magnetization_trajectory(
        psi0, runner.step_unitary(method, time.tau), n_steps, n_qubits));
  }
  for (int n = 0; n <= n_steps; ++n) {
    std::vector<double> row = {double(n) * time.tau, m_exact[std::size_t(n)]};
    for (const auto& col : columns) {
      row.push_back(col[std::size_t(n)]);
      row.push_back(std::abs((m_exact[std::size_t(n)] - col[std::size_t(n)]) /
                             m_exact[std::size_t(n)]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_params(const MethodRunner& runner) {
  const auto grid = grid_times(runner.config.time);
  ResultTable table;
  table.header = {"t"};

  struct Column {
    std::vector<RealVector> values;
    std::vector<double> residuals;
    bool has_residual = false;
  };
  std::vector<Column> columns;
  for (const auto& method : runner.config.methods) {
    Column col;
    const std::string& pattern =
        method.pattern.empty() ? runner.config.ansatz_pattern : method.pattern;
    if (method.kind == "var_cubic") {
      for (double t : grid)
        col.values.push_back(cubic_free_values(runner.split, pattern, t));
    } else {
      const ProductAnsatz ansatz = runner.make_ansatz(method);
      auto traj = runner.integrate(method, ansatz, grid.back(), grid);
      col.values = std::move(traj.values);
      col.residuals = std::move(traj.residuals);
      col.has_residual = true;
    }
    for (Eigen::Index j = 0; j < col.values.front().size(); ++j)
      table.header.push_back(method.label + "_c" + std::to_string(j));
    if (col.has_residual) table.header.push_back(method.label + "_residual");
    columns.push_back(std::move(col));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row = {grid[i]};
    for (const auto& col : columns) {
      for (Eigen::Index j = 0; j < col.values[i].size(); ++j)
        row.push_back(col.values[i](j));
      if (col.has_residual) row.push_back(col.residuals[i]);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& config) {
  const HamiltonianSplit split = build_model(config.model);
  const MethodRunner runner{config, split, *split.hamiltonian};
  if (config.observable == "frobenius") return run_frobenius(runner);
  if (config.observable == "strob_frobenius") return run_strob_frobenius(runner);
  if (config.observable == "magnetization") return run_magnetization(runner);
  if (config.observable == "params") return run_params(runner);
  throw ConfigError("observable", "unknown observable '" + config.observable + "'");
}

GateProgram emit_circuit(const ExperimentConfig& config) {
  if (config.model.family != "qim")
    throw ConfigError("model.family", "emit-circuit supports the qim model");
  if (config.time.is_grid)
    throw ConfigError("time", "emit-circuit needs {t_total, tau} to freeze c(tau)");
  const HamiltonianSplit split = build_model(config.model);
  const MethodRunner runner{config, split, *split.hamiltonian};
  const MethodSpec& method = config.methods.front();
  if (method.kind.rfind("var", 0) != 0)
    throw ConfigError("methods[0]", "emit-circuit needs a var_* parameter source");

  const std::string& pattern =
      method.pattern.empty() ? config.ansatz_pattern : method.pattern;
  const ProductAnsatz ansatz = ProductAnsatz::from_pattern(split, pattern);
  RealVector c;
  if (method.kind == "var_cubic") {
    c = cubic_free_values(split, pattern, config.time.tau);
  } else {
    const std::array<double, 1> grid = {config.time.tau};
    c = runner.integrate(method, ansatz, config.time.tau, grid).back();
  }
  return emit_qim_ansatz(ansatz, c);
}

}  // namespace varprop
