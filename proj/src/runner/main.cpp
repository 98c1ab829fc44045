#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "galpha/errors.hpp"
#include "galpha/runner/config.hpp"
#include "galpha/runner/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

int cmd_run(const std::string& config_path) {
  auto cfg = galpha::runner::load_config(config_path);
  auto out = galpha::runner::run_simulation(cfg);
  if (!out.completed) {
    std::cerr << "run aborted at t = " << out.final_state.t << ": " << out.abort_reason << "\n";
    return kRuntimeError;
  }
  std::cout << "completed: " << out.accepted << " accepted / " << out.rejected
            << " rejected steps, csv: " << cfg.csv << "\n";
  return kOk;
}

int cmd_converge(const std::string& config_path, const std::vector<double>& dts,
                 std::string out_path) {
  auto cfg = galpha::runner::load_config(config_path);
  if (out_path.empty()) out_path = cfg.csv + ".convergence.csv";
  auto rows = galpha::runner::convergence_study(cfg, dts, out_path);
  std::cout << "dt,error_u,error_v,order_u,order_v,failed\n";
  for (const auto& r : rows)
    std::cout << r.dt << ',' << r.error_u << ',' << r.error_v << ',' << r.order_u << ','
              << r.order_v << ',' << (r.failed ? 1 : 0) << '\n';
  for (const auto& r : rows)
    if (r.failed) return kRuntimeError;
  return kOk;
}

int cmd_spectra(const std::string& family, double rho_b, double theta_max, int samples,
                const std::string& out_path) {
  auto sweep = galpha::runner::write_spectra(family, rho_b, theta_max, samples, out_path);
  std::cout << "omega_s = " << sweep.omega_s << ", omega_b = " << sweep.omega_b
            << ", csv: " << out_path << "\n";
  return kOk;
}

int cmd_validate(const std::string& config_path) {
  auto cfg = galpha::runner::load_config(config_path);
  std::cout << galpha::runner::validate_config(cfg);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit predictor/multicorrector generalized-alpha elastodynamics"};
  app.require_subcommand(1);
  int seed = 0;
  app.add_option("--seed", seed, "reserved; no stochastic components");

  std::string run_cfg;
  auto* run = app.add_subcommand("run", "run a full simulation");
  run->add_option("config", run_cfg, "config file")->required();

  std::string conv_cfg, conv_out;
  std::vector<double> dts;
  auto* conv = app.add_subcommand("converge", "fixed-step convergence study");
  conv->add_option("config", conv_cfg, "config file")->required();
  conv->add_option("--dts", dts, "comma-separated dt list")->required()->delimiter(',');
  conv->add_option("--out", conv_out, "output CSV path");

  std::string family = "n1", spec_out = "spectra.csv";
  double rho_b = 1.0, theta_max = 5.0;
  int samples = 2000;
  auto* spec = app.add_subcommand("spectra", "spectral-radius sweep CSV");
  spec->add_option("--rho-b", rho_b, "bifurcation spectral radius")->required();
  spec->add_option("--family", family, "n1 | n2")->required();
  spec->add_option("--theta-max", theta_max, "sweep upper bound in Theta")->required();
  spec->add_option("--samples", samples, "grid samples");
  spec->add_option("--out", spec_out, "output CSV path");

  std::string val_cfg;
  auto* val = app.add_subcommand("validate", "dry-run configuration checks");
  val->add_option("config", val_cfg, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(run_cfg);
    if (conv->parsed()) return cmd_converge(conv_cfg, dts, conv_out);
    if (spec->parsed()) return cmd_spectra(family, rho_b, theta_max, samples, spec_out);
    if (val->parsed()) return cmd_validate(val_cfg);
  } catch (const galpha::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const galpha::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const galpha::ParameterizationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kConfigError;
}
