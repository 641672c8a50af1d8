#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "robar/regression.hpp"
#include "robar/signal.hpp"

namespace robar {

struct ClipSpec {
  double k = 1.0;  // in (0, 1]
};

struct QuantizerSpec {
  int levels = 256;
  double lo = 0.0;
  double hi = 0.0;
};

struct CodingReport {
  double snr_db = 0.0;
  double entropy_bits = 0.0;
  double clipped_percent = 0.0;
  double zero_level_percent = 0.0;
  double k = 1.0;
};

struct PipelineConfig {
  std::size_t frame_length = 160;
  int order = 10;
  Method method = Method::robust;  // ols, robust, or l1
  ClipSpec clip;
  QuantizerSpec quant;             // levels used; lo/hi derived from the data
  RobustConfig robust;
};

// Projects samples outside [k*min(r), k*max(r)] onto those bounds. The
// bounds come from the whole vector passed in, so clipping a pooled
// residual stream uses signal-global extremes.
std::pair<std::vector<double>, std::size_t> clip_residual(const std::vector<double>& r,
                                                          const ClipSpec& spec);

struct QuantizeResult {
  std::vector<int> indices;
  std::vector<double> reconstructed;
  double step = 0.0;
};

// Midtread uniform quantizer over [lo, hi]; reconstruction at bin centers,
// per-sample error at most step/2.
QuantizeResult uniform_quantize(const std::vector<double>& r, const QuantizerSpec& spec);

// Plug-in entropy of the observed symbol frequencies, bits per sample.
double empirical_entropy(const std::vector<int>& indices);

// 10*log10(signal power / error power); +infinity on exact equality.
double snr_db(const std::vector<double>& original, const std::vector<double>& reconstructed);

// Differential entropies in nats for a given standard deviation.
double analytic_entropy_gaussian(double sigma);
double analytic_entropy_laplace(double sigma);

// ln(sqrt(pi/e) * sigma_g / sigma_l); equals the Gaussian minus Laplace
// entropy at those deviations.
double delta_entropy(double sigma_g, double sigma_l);

double nats_to_bits(double nats);

// Frame-wise AR fit by config.method, residuals pooled over the signal,
// clipped by K against the pooled extremes, and quantized by one fixed
// quantizer spanning the unclipped pooled range. SNR compares the
// reconstruction against the original (unclipped) residual.
CodingReport code_frames(const TimeSeries& series, const PipelineConfig& config, int jobs = 1);

// code_frames for each k, fitting the AR models only once.
std::vector<CodingReport> sweep_k(const TimeSeries& series, const PipelineConfig& config,
                                  const std::vector<double>& k_values, int jobs = 1);

}  // namespace robar
