#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "varprop/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

int run_command(const std::string& config_path, const std::string& output_override,
                bool verbose) {
  const auto config = varprop::load_config_file(config_path);
  const auto table = varprop::run_experiment(config);
  std::string out_path = !output_override.empty() ? output_override
                         : !config.output.empty() ? config.output
                                                  : "out.csv";
  varprop::write_csv_file(table, out_path);
  if (verbose)
    std::cerr << "wrote " << table.rows.size() << " rows x " << table.header.size()
              << " columns to " << out_path << "\n";
  return 0;
}

int emit_circuit_command(const std::string& config_path,
                         const std::string& output_override) {
  const auto config = varprop::load_config_file(config_path);
  const auto program = varprop::emit_circuit(config);
  const std::string text = varprop::export_text(program);
  if (output_override.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output_override, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + output_override + "'");
    out << text;
  }
  return 0;
}

int params_command(const std::string& config_path, const std::string& output_override,
                   bool approx) {
  auto config = varprop::load_config_file(config_path);
  if (approx) {
    const auto split = varprop::build_model(config.model);
    if (config.ansatz_pattern.size() <= 3) {
      const auto coeffs = varprop::cubic_coefficients(split, config.ansatz_pattern);
      std::cerr << "cubic coefficients for pattern " << config.ansatz_pattern << ":\n";
      for (std::size_t j = 0; j < coeffs.slots.size(); ++j)
        std::cerr << "  slot " << j << ": linear " << varprop::format_g17(coeffs.slots[j].linear)
                  << "  cubic " << varprop::format_g17(coeffs.slots[j].cubic) << "\n";
    }
    config.observable = "params";
    config.methods = {varprop::MethodSpec{"var_cubic", "var_cubic", "", 0}};
  }
  const auto table = varprop::run_experiment(config);
  std::string out_path = !output_override.empty() ? output_override
                         : !config.output.empty() ? config.output
                                                  : "params.csv";
  varprop::write_csv_file(table, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational product formula experiments"};
  app.require_subcommand(1);

  std::string config_path, output_path;
  bool verbose = false;

  auto* run = app.add_subcommand("run", "run an experiment config, emit CSV");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("-o,--output", output_path, "output CSV path");
  run->add_flag("-v,--verbose", verbose, "progress to stderr");

  auto* emit = app.add_subcommand("emit-circuit", "lower a frozen ansatz to gates");
  emit->add_option("config", config_path, "JSON experiment config")->required();
  emit->add_option("-o,--output", output_path, "output text path (default stdout)");

  auto* params = app.add_subcommand("params", "emit parameter trajectories as CSV");
  params->add_option("config", config_path, "JSON experiment config")->required();
  params->add_option("-o,--output", output_path, "output CSV path");
  bool approx = false;
  params->add_flag("--approx", approx, "use the closed-form cubic parameters");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, output_path, verbose);
    if (emit->parsed()) return emit_circuit_command(config_path, output_path);
    if (params->parsed()) return params_command(config_path, output_path, approx);
  } catch (const varprop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const varprop::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
