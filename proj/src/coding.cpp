#include "robar/coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "robar/errors.hpp"
#include "robar/parallel.hpp"

namespace robar {

namespace {

// pooled per-frame residuals, order-deterministic for any job count
std::vector<double> frame_residuals(const TimeSeries& series, const PipelineConfig& config,
                                    int jobs) {
  bool all_zero = true;
  for (double v : series.samples)
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero)
    throw Error(ErrorCode::degenerate_signal, "cannot code an all-zero signal");
  if (config.frame_length <= 2 * static_cast<std::size_t>(config.order))
    throw Error(ErrorCode::order_too_large, "frame_length must exceed twice the order");

  const std::vector<TimeSeries> frames = frame_split(series, config.frame_length);
  if (frames.empty())
    throw Error(ErrorCode::other, "series shorter than one frame");

  std::vector<Eigen::VectorXd> residuals(frames.size());
  parallel_for(jobs, frames.size(), [&](std::size_t i) {
    const DesignSystem system = build_design(frames[i], config.order);
    switch (config.method) {
      case Method::ols:
        residuals[i] = ols_fit(system).residual;
        break;
      case Method::l1:
        residuals[i] = l1_fit(system, config.robust).residual;
        break;
      default:
        residuals[i] = robust_fit(system, config.robust).residual;
        break;
    }
  });

  std::vector<double> pooled;
  pooled.reserve(frames.size() * (config.frame_length - static_cast<std::size_t>(config.order)));
  for (const auto& r : residuals)
    pooled.insert(pooled.end(), r.data(), r.data() + r.size());
  return pooled;
}

CodingReport report_for_k(const std::vector<double>& residual, double k, int levels) {
  QuantizerSpec quant;
  quant.levels = levels;
  quant.lo = *std::min_element(residual.begin(), residual.end());
  quant.hi = *std::max_element(residual.begin(), residual.end());
  if (quant.lo == quant.hi) {
    // constant residual: widen so the step stays positive; everything lands
    // in one bin and reconstructs within step/2
    quant.lo -= 0.5;
    quant.hi += 0.5;
  }

  ClipSpec clip{k};
  auto [clipped, clipped_count] = clip_residual(residual, clip);
  const QuantizeResult quantized = uniform_quantize(clipped, quant);

  CodingReport report;
  report.k = k;
  report.snr_db = snr_db(residual, quantized.reconstructed);
  report.entropy_bits = empirical_entropy(quantized.indices);
  const auto n = static_cast<double>(residual.size());
  report.clipped_percent = 100.0 * static_cast<double>(clipped_count) / n;

  if (quant.lo <= 0.0 && 0.0 <= quant.hi) {
    const int zero_bin = std::clamp(
        static_cast<int>(std::floor((0.0 - quant.lo) / quantized.step)), 0, quant.levels - 1);
    std::size_t at_zero = 0;
    for (int idx : quantized.indices)
      if (idx == zero_bin) ++at_zero;
    report.zero_level_percent = 100.0 * static_cast<double>(at_zero) / n;
  }
  return report;
}

}  // namespace

std::pair<std::vector<double>, std::size_t> clip_residual(const std::vector<double>& r,
                                                          const ClipSpec& spec) {
  if (r.empty())
    throw Error(ErrorCode::degenerate_signal, "cannot clip an empty residual");
  if (!(spec.k > 0.0 && spec.k <= 1.0))
    throw Error(ErrorCode::out_of_range, "clip fraction k must lie in (0, 1]");
  if (spec.k == 1.0)
    return {r, 0};

  const double max_r = *std::max_element(r.begin(), r.end());
  const double min_r = *std::min_element(r.begin(), r.end());
  if (max_r == 0.0 && min_r == 0.0)
    throw Error(ErrorCode::degenerate_signal, "clip bounds collapse on an all-zero residual");
  const double hi = spec.k * max_r;
  const double lo = spec.k * min_r;

  std::vector<double> out(r.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] > hi) {
      out[i] = hi;
      ++count;
    } else if (r[i] < lo) {
      out[i] = lo;
      ++count;
    } else {
      out[i] = r[i];
    }
  }
  return {std::move(out), count};
}

QuantizeResult uniform_quantize(const std::vector<double>& r, const QuantizerSpec& spec) {
  if (spec.levels < 2)
    throw Error(ErrorCode::out_of_range, "quantizer needs at least 2 levels");
  if (!(spec.lo < spec.hi))
    throw Error(ErrorCode::out_of_range, "quantizer range is empty");
  QuantizeResult result;
  result.step = (spec.hi - spec.lo) / static_cast<double>(spec.levels);
  result.indices.resize(r.size());
  result.reconstructed.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= spec.lo && r[i] <= spec.hi))
      throw Error(ErrorCode::out_of_range, "sample outside the quantizer range");
    const int idx = std::clamp(static_cast<int>(std::floor((r[i] - spec.lo) / result.step)), 0,
                               spec.levels - 1);
    result.indices[i] = idx;
    result.reconstructed[i] = spec.lo + (idx + 0.5) * result.step;
  }
  return result;
}

double empirical_entropy(const std::vector<int>& indices) {
  if (indices.empty())
    throw Error(ErrorCode::degenerate_signal, "entropy of an empty symbol stream");
  std::map<int, std::size_t> histogram;
  for (int s : indices) ++histogram[s];
  const auto n = static_cast<double>(indices.size());
  double entropy = 0.0;
  for (const auto& [symbol, count] : histogram) {
    (void)symbol;
    const double p = static_cast<double>(count) / n;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

double snr_db(const std::vector<double>& original, const std::vector<double>& reconstructed) {
  if (original.size() != reconstructed.size())
    throw Error(ErrorCode::other, "snr_db requires equal-length vectors");
  double signal = 0.0, error = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    signal += original[i] * original[i];
    const double d = original[i] - reconstructed[i];
    error += d * d;
  }
  if (signal == 0.0)
    throw Error(ErrorCode::degenerate_signal, "snr_db of an all-zero signal");
  if (error == 0.0)
    return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / error);
}

double analytic_entropy_gaussian(double sigma) {
  if (!(sigma > 0.0))
    throw Error(ErrorCode::invalid_sigma, "sigma must be positive");
  return 0.5 * std::log(2.0 * 3.14159265358979323846 * 2.718281828459045235360287471352) +
         std::log(sigma);
}

double analytic_entropy_laplace(double sigma) {
  if (!(sigma > 0.0))
    throw Error(ErrorCode::invalid_sigma, "sigma must be positive");
  return 0.5 * std::log(2.0) + 1.0 + std::log(sigma);
}

double delta_entropy(double sigma_g, double sigma_l) {
  if (!(sigma_g > 0.0) || !(sigma_l > 0.0))
    throw Error(ErrorCode::invalid_sigma, "sigma must be positive");
  return 0.5 * (std::log(3.14159265358979323846) - 1.0) + std::log(sigma_g / sigma_l);
}

double nats_to_bits(double nats) { return nats / std::log(2.0); }

CodingReport code_frames(const TimeSeries& series, const PipelineConfig& config, int jobs) {
  const std::vector<double> residual = frame_residuals(series, config, jobs);
  return report_for_k(residual, config.clip.k, config.quant.levels);
}

std::vector<CodingReport> sweep_k(const TimeSeries& series, const PipelineConfig& config,
                                  const std::vector<double>& k_values, int jobs) {
  if (k_values.empty())
    throw Error(ErrorCode::out_of_range, "need at least one clip fraction");
  for (double k : k_values)
    if (!(k > 0.0 && k <= 1.0))
      throw Error(ErrorCode::out_of_range, "clip fraction k must lie in (0, 1]");
  const std::vector<double> residual = frame_residuals(series, config, jobs);
  std::vector<CodingReport> reports;
  reports.reserve(k_values.size());
  for (double k : k_values)
    reports.push_back(report_for_k(residual, k, config.quant.levels));
  return reports;
}

}  // namespace robar
