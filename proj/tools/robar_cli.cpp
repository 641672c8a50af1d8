// robar command line front end: fit | spectrum | missing-sim | code | entropy.
// Every run with identical flags, seed, and input produces byte-identical
// output; all numbers are serialized round-trip exact.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robar/coding.hpp"
#include "robar/errors.hpp"
#include "robar/io.hpp"
#include "robar/regression.hpp"
#include "robar/signal.hpp"
#include "robar/spectral.hpp"

namespace {

using robar::Error;
using robar::ErrorCode;
using robar::format_double;

struct RobustFlags {
  std::string rho = "auto";
  double epsilon = 1e-12;
  double gnc_step = 0.25;
  double tol = 1e-8;
  int max_iter = 100;
  std::string weight_mode = "paper";
};

void add_robust_flags(CLI::App* cmd, RobustFlags& flags) {
  cmd->add_option("--rho", flags.rho,
                  "robustness scale: 'auto' ((2*MAD)^2 of the OLS residual) or a positive number")
      ->capture_default_str();
  cmd->add_option("--epsilon", flags.epsilon, "IRLS weight regularizer")->capture_default_str();
  cmd->add_option("--gnc-step", flags.gnc_step, "per-iteration increase of the weight exponent")
      ->capture_default_str();
  cmd->add_option("--tol", flags.tol, "relative coefficient-change stopping tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", flags.max_iter, "iteration cap")->capture_default_str();
  cmd->add_option("--weight-mode", flags.weight_mode, "IRLS weight family")
      ->check(CLI::IsMember({"paper", "mm"}))
      ->capture_default_str();
}

robar::RobustConfig to_robust_config(const RobustFlags& flags) {
  robar::RobustConfig config;
  if (flags.rho != "auto") {
    char* end = nullptr;
    const double value = std::strtod(flags.rho.c_str(), &end);
    if (flags.rho.empty() || end != flags.rho.c_str() + flags.rho.size())
      throw Error(ErrorCode::parse_error, "--rho expects 'auto' or a number, got " + flags.rho);
    config.rho = value;
  }
  config.epsilon = flags.epsilon;
  config.gnc_step = flags.gnc_step;
  config.tol = flags.tol;
  config.max_iter = flags.max_iter;
  config.weight_mode =
      flags.weight_mode == "mm" ? robar::WeightMode::mm : robar::WeightMode::paper;
  return config;
}

robar::Method parse_method(const std::string& name) {
  if (name == "ols") return robar::Method::ols;
  if (name == "yule-walker") return robar::Method::yule_walker;
  if (name == "l1") return robar::Method::l1;
  if (name == "robust") return robar::Method::robust;
  throw Error(ErrorCode::parse_error, "unknown method: " + name);
}

void require_format(const std::string& format, const std::string& subcommand,
                    bool csv_supported) {
  if (format != "json" && format != "csv")
    throw Error(ErrorCode::parse_error, "unknown format: " + format);
  if (format == "csv" && !csv_supported)
    throw Error(ErrorCode::unsupported_format, subcommand + " emits JSON only");
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string json_array(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out + "]";
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Whole report is assembled before anything is written, so error paths
// never leave partial output behind.
void emit(const std::string& output_path, const std::string& content) {
  if (output_path.empty())
    std::cout << content;
  else
    robar::write_text_file(output_path, content);
}

robar::ARModel fit_series(const robar::TimeSeries& series, int order, robar::Method method,
                          const robar::RobustConfig& robust) {
  if (method == robar::Method::yule_walker) return robar::yule_walker_fit(series, order);
  const robar::DesignSystem system = robar::build_design(series, order);
  switch (method) {
    case robar::Method::ols:
      return robar::ols_fit(system);
    case robar::Method::l1:
      return robar::l1_fit(system, robust);
    default:
      return robar::robust_fit(system, robust);
  }
}

int run_fit(const std::string& input, const std::string& output, const std::string& format,
            int order, const std::string& method_name, const RobustFlags& robust_flags) {
  require_format(format, "fit", false);
  const robar::Method method = parse_method(method_name);
  const robar::TimeSeries series = robar::read_series(input, robar::detect_format(input));
  const robar::ARModel model = fit_series(series, order, method, to_robust_config(robust_flags));

  std::string out;
  out += "{\n";
  out += "  \"method\": " + json_string(robar::method_name(model.method)) + ",\n";
  out += "  \"order\": " + std::to_string(model.order) + ",\n";
  out += "  \"coefficients\": " + json_array(to_std(model.coeffs)) + ",\n";
  out += "  \"residual_variance\": " + format_double(model.residual_variance) + ",\n";
  out += "  \"iterations\": " + std::to_string(model.iterations) + ",\n";
  out += "  \"converged\": " + std::string(model.converged ? "true" : "false");
  if (model.method == robar::Method::robust)
    out += ",\n  \"rho\": " + format_double(model.rho);
  out += "\n}\n";
  emit(output, out);
  return 0;
}

int run_spectrum(const std::string& input, const std::string& output, const std::string& format,
                 int order, const std::string& method_name, int grid_points,
                 const RobustFlags& robust_flags) {
  require_format(format, "spectrum", true);
  if (grid_points < 2)
    throw robar::Error(robar::ErrorCode::out_of_range, "need at least two grid points");
  const robar::Method method = parse_method(method_name);
  const robar::TimeSeries series = robar::read_series(input, robar::detect_format(input));
  const robar::ARModel model = fit_series(series, order, method, to_robust_config(robust_flags));
  const robar::SpectrumGrid grid = robar::ar_spectrum(model, grid_points);

  std::string out;
  if (format == "csv") {
    out += "frequency,power\n";
    for (std::size_t i = 0; i < grid.frequencies.size(); ++i)
      out += format_double(grid.frequencies[i]) + "," + format_double(grid.power[i]) + "\n";
  } else {
    out += "{\n";
    out += "  \"method\": " + json_string(robar::method_name(model.method)) + ",\n";
    out += "  \"order\": " + std::to_string(model.order) + ",\n";
    out += "  \"grid_points\": " + std::to_string(grid_points) + ",\n";
    out += "  \"frequencies\": " + json_array(grid.frequencies) + ",\n";
    out += "  \"power\": " + json_array(grid.power) + "\n";
    out += "}\n";
  }
  emit(output, out);
  return 0;
}

int run_missing_sim(const std::string& output, const std::string& format,
                    robar::Table1Config config, int jobs) {
  require_format(format, "missing-sim", true);
  const robar::Table1Result result = robar::run_table1(config, jobs);

  std::string out;
  if (format == "csv") {
    out += "method";
    for (double snr : result.snr_list_db) out += "," + format_double(snr);
    out += "\nyule_walker";
    for (double v : result.yule_walker_mean) out += "," + format_double(v);
    out += "\nrobust";
    for (double v : result.robust_mean) out += "," + format_double(v);
    out += "\n";
  } else {
    out += "{\n";
    out += "  \"snr_db\": " + json_array(result.snr_list_db) + ",\n";
    out += "  \"trials\": " + std::to_string(config.trials) + ",\n";
    out += "  \"n\": " + std::to_string(config.n) + ",\n";
    out += "  \"missing_fraction\": " + format_double(config.missing_fraction) + ",\n";
    out += "  \"order\": " + std::to_string(config.order) + ",\n";
    out += "  \"grid_points\": " + std::to_string(config.grid_points) + ",\n";
    out += "  \"seed\": " + std::to_string(config.seed) + ",\n";
    out += "  \"db_correlation\": " + std::string(config.db_correlation ? "true" : "false") +
           ",\n";
    out += "  \"yule_walker\": " + json_array(result.yule_walker_mean) + ",\n";
    out += "  \"robust\": " + json_array(result.robust_mean) + "\n";
    out += "}\n";
  }
  emit(output, out);
  return 0;
}

int run_code(const std::string& input, const std::string& output, const std::string& format,
             robar::PipelineConfig config, const std::string& method_name,
             const std::vector<double>& k_values, std::size_t synth_n, std::uint64_t seed,
             int jobs) {
  require_format(format, "code", true);
  config.method = parse_method(method_name);
  if (config.method == robar::Method::yule_walker)
    throw Error(ErrorCode::parse_error, "code supports methods ols, robust, l1");

  robar::TimeSeries series;
  std::string source;
  if (input.empty()) {
    series = robar::gen_speechlike(synth_n, seed);
    source = "synthetic";
  } else {
    series = robar::read_series(input, robar::detect_format(input));
    source = input;
  }
  const std::vector<robar::CodingReport> reports =
      robar::sweep_k(series, config, k_values, jobs);

  std::string out;
  if (format == "csv") {
    out += "1/k,snr_db,entropy_bits,clipped_percent,zero_level_percent\n";
    for (const auto& report : reports) {
      out += format_double(1.0 / report.k) + "," + format_double(report.snr_db) + "," +
             format_double(report.entropy_bits) + "," + format_double(report.clipped_percent) +
             "," + format_double(report.zero_level_percent) + "\n";
    }
  } else {
    out += "{\n";
    out += "  \"method\": " + json_string(robar::method_name(config.method)) + ",\n";
    out += "  \"source\": " + json_string(source) + ",\n";
    out += "  \"frame_length\": " + std::to_string(config.frame_length) + ",\n";
    out += "  \"order\": " + std::to_string(config.order) + ",\n";
    out += "  \"levels\": " + std::to_string(config.quant.levels) + ",\n";
    out += "  \"reports\": [\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& report = reports[i];
      out += "    {\"k\": " + format_double(report.k) +
             ", \"inv_k\": " + format_double(1.0 / report.k) +
             ", \"snr_db\": " + format_double(report.snr_db) +
             ", \"entropy_bits\": " + format_double(report.entropy_bits) +
             ", \"clipped_percent\": " + format_double(report.clipped_percent) +
             ", \"zero_level_percent\": " + format_double(report.zero_level_percent) + "}";
      out += (i + 1 < reports.size()) ? ",\n" : "\n";
    }
    out += "  ]\n";
    out += "}\n";
  }
  emit(output, out);
  return 0;
}

int run_entropy(const std::string& output, const std::string& format, double sigma_g,
                double sigma_l) {
  require_format(format, "entropy", false);
  const double gaussian_nats = robar::analytic_entropy_gaussian(sigma_g);
  const double laplace_nats = robar::analytic_entropy_laplace(sigma_l);
  const double delta_nats = robar::delta_entropy(sigma_g, sigma_l);

  std::string out;
  out += "{\n";
  out += "  \"sigma_g\": " + format_double(sigma_g) + ",\n";
  out += "  \"sigma_l\": " + format_double(sigma_l) + ",\n";
  out += "  \"gaussian_nats\": " + format_double(gaussian_nats) + ",\n";
  out += "  \"laplace_nats\": " + format_double(laplace_nats) + ",\n";
  out += "  \"delta_nats\": " + format_double(delta_nats) + ",\n";
  out += "  \"gaussian_bits\": " + format_double(robar::nats_to_bits(gaussian_nats)) + ",\n";
  out += "  \"laplace_bits\": " + format_double(robar::nats_to_bits(laplace_nats)) + ",\n";
  out += "  \"delta_bits\": " + format_double(robar::nats_to_bits(delta_nats)) + "\n";
  out += "}\n";
  emit(output, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust autoregressive estimation and residual coding toolkit"};
  app.require_subcommand(1);

  std::string input, output;
  std::string format = "json";
  std::uint64_t seed = 42;
  int jobs = 1;
  RobustFlags robust_flags;

  // fit
  auto* fit = app.add_subcommand("fit", "fit one AR model to a series and report it as JSON");
  std::string fit_method = "robust";
  int fit_order = 2;
  fit->add_option("--input", input, "CSV or WAV series")->required();
  fit->add_option("--order", fit_order, "AR order")->capture_default_str();
  fit->add_option("--method", fit_method, "estimator")
      ->check(CLI::IsMember({"ols", "yule-walker", "l1", "robust"}))
      ->capture_default_str();
  fit->add_option("--format", format, "output format")->capture_default_str();
  fit->add_option("--output", output, "write here instead of stdout");
  add_robust_flags(fit, robust_flags);

  // spectrum
  auto* spectrum =
      app.add_subcommand("spectrum", "AR power spectral density of a series (CSV or JSON)");
  std::string spectrum_method = "robust";
  std::string spectrum_format = "csv";
  int spectrum_order = 8;
  int grid_points = 512;
  spectrum->add_option("--input", input, "CSV or WAV series")->required();
  spectrum->add_option("--order", spectrum_order, "AR order")->capture_default_str();
  spectrum->add_option("--method", spectrum_method, "estimator")
      ->check(CLI::IsMember({"ols", "yule-walker", "l1", "robust"}))
      ->capture_default_str();
  spectrum->add_option("--grid-points", grid_points, "frequency samples over [0, 0.5]")
      ->capture_default_str();
  spectrum->add_option("--format", spectrum_format, "output format")->capture_default_str();
  spectrum->add_option("--output", output, "write here instead of stdout");
  add_robust_flags(spectrum, robust_flags);

  // missing-sim
  auto* sim = app.add_subcommand(
      "missing-sim", "missing-data spectral benchmark: correlation vs SNR for two estimators");
  robar::Table1Config table;
  sim->add_option("--snr-list", table.snr_list_db, "SNR points in dB")
      ->delimiter(',')
      ->capture_default_str();
  sim->add_option("--trials", table.trials, "Monte Carlo trials per SNR")->capture_default_str();
  sim->add_option("--n", table.n, "series length")->capture_default_str();
  sim->add_option("--missing-fraction", table.missing_fraction, "fraction of samples zeroed")
      ->capture_default_str();
  sim->add_option("--order", table.order, "AR order")->capture_default_str();
  sim->add_option("--grid-points", table.grid_points, "frequency samples over [0, 0.5]")
      ->capture_default_str();
  sim->add_option("--seed", seed, "master seed")->capture_default_str();
  sim->add_flag("--db-correlation", table.db_correlation,
                "correlate spectra on a dB scale instead of linear power");
  sim->add_option("--jobs", jobs, "worker threads (results identical for any value)")
      ->capture_default_str();
  sim->add_option("--format", format, "output format")->capture_default_str();
  sim->add_option("--output", output, "write here instead of stdout");
  add_robust_flags(sim, robust_flags);

  // code
  auto* code = app.add_subcommand(
      "code", "frame-based residual clip + quantize sweep over clipping fractions");
  robar::PipelineConfig pipeline;
  std::string code_method = "robust";
  std::vector<double> k_values{1.0, 0.5, 0.25, 0.2};
  std::size_t synth_n = 3200;
  code->add_option("--input", input, "CSV or WAV series; omitted = seeded synthetic signal");
  code->add_option("--n", synth_n, "synthetic signal length when --input is omitted")
      ->capture_default_str();
  code->add_option("--frame-length", pipeline.frame_length, "samples per frame")
      ->capture_default_str();
  code->add_option("--order", pipeline.order, "AR order")->capture_default_str();
  code->add_option("--method", code_method, "estimator")
      ->check(CLI::IsMember({"ols", "l1", "robust"}))
      ->capture_default_str();
  code->add_option("--levels", pipeline.quant.levels, "quantizer levels")->capture_default_str();
  code->add_option("--k", k_values, "clipping fractions in (0, 1]")
      ->delimiter(',')
      ->capture_default_str();
  code->add_option("--seed", seed, "seed for the synthetic signal")->capture_default_str();
  code->add_option("--jobs", jobs, "worker threads (results identical for any value)")
      ->capture_default_str();
  code->add_option("--format", format, "output format")->capture_default_str();
  code->add_option("--output", output, "write here instead of stdout");
  add_robust_flags(code, robust_flags);

  // entropy
  auto* entropy = app.add_subcommand(
      "entropy", "closed-form Gaussian and Laplace differential entropies and their gap");
  double sigma_g = 1.0, sigma_l = 1.0;
  entropy->add_option("--sigma-g", sigma_g, "Gaussian standard deviation")
      ->capture_default_str();
  entropy->add_option("--sigma-l", sigma_l, "Laplace standard deviation")
      ->capture_default_str();
  entropy->add_option("--format", format, "output format")->capture_default_str();
  entropy->add_option("--output", output, "write here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed())
      return run_fit(input, output, format, fit_order, fit_method, robust_flags);
    if (spectrum->parsed())
      return run_spectrum(input, output, spectrum_format, spectrum_order, spectrum_method,
                          grid_points, robust_flags);
    if (sim->parsed()) {
      table.seed = seed;
      table.robust = to_robust_config(robust_flags);
      return run_missing_sim(output, format, table, jobs);
    }
    if (code->parsed()) {
      pipeline.robust = to_robust_config(robust_flags);
      return run_code(input, output, format, pipeline, code_method, k_values, synth_n, seed,
                      jobs);
    }
    if (entropy->parsed()) return run_entropy(output, format, sigma_g, sigma_l);
    throw Error(ErrorCode::other, "no subcommand given");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
