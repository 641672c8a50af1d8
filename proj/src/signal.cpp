#include "robar/signal.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <utility>

#include "robar/errors.hpp"
#include "robar/rng.hpp"

namespace robar {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Largest root magnitude of z^p - a_1 z^{p-1} - ... - a_p, via the
// companion matrix. The AR model is stable iff this is < 1.
double max_char_root(const std::vector<double>& coeffs) {
  const std::size_t p = coeffs.size();
  if (p == 0) return 0.0;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t j = 0; j < p; ++j) companion(0, j) = coeffs[j];
  for (std::size_t i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  double max_mag = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    max_mag = std::max(max_mag, std::abs(solver.eigenvalues()[i]));
  return max_mag;
}

}  // namespace

void validate(const TimeSeries& series) {
  for (double v : series.samples)
    if (!std::isfinite(v))
      throw Error(ErrorCode::degenerate_signal, "time series contains a non-finite sample");
  if (series.mask && series.mask->size() != series.samples.size())
    throw Error(ErrorCode::other, "mask length does not match sample count");
}

std::vector<TimeSeries> frame_split(const TimeSeries& series, std::size_t frame_length) {
  if (frame_length < 1)
    throw Error(ErrorCode::out_of_range, "frame_length must be at least 1");
  const std::size_t count = series.samples.size() / frame_length;
  std::vector<TimeSeries> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    TimeSeries frame;
    frame.sample_rate = series.sample_rate;
    frame.samples.assign(series.samples.begin() + static_cast<long>(i * frame_length),
                         series.samples.begin() + static_cast<long>((i + 1) * frame_length));
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::pair<TimeSeries, MissingMask> apply_missing(const TimeSeries& series, double fraction,
                                                 std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 0.9))
    throw Error(ErrorCode::invalid_fraction, "missing fraction must lie in [0, 0.9]");
  const std::size_t n = series.samples.size();
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));

  // partial Fisher-Yates: the first `count` entries are a uniform subset
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < count && n > 0; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (n - i));
    std::swap(indices[i], indices[j]);
  }

  TimeSeries out = series;
  MissingMask mask;
  mask.present.assign(n, true);
  mask.missing_count = count;
  for (std::size_t i = 0; i < count; ++i) {
    out.samples[indices[i]] = 0.0;
    mask.present[indices[i]] = false;
  }
  out.mask = mask.present;
  return {std::move(out), std::move(mask)};
}

TimeSeries gen_ar_process(const std::vector<double>& coeffs, double noise_std, std::size_t n,
                          std::uint64_t seed,
                          const std::optional<std::vector<double>>& initial_state) {
  const std::size_t p = coeffs.size();
  if (max_char_root(coeffs) >= 1.0)
    throw Error(ErrorCode::unstable_model, "AR characteristic root on or outside the unit circle");
  if (initial_state && initial_state->size() != p)
    throw Error(ErrorCode::other, "initial state length must equal the AR order");

  Rng rng(seed);
  TimeSeries out;
  if (initial_state) {
    out.samples.assign(initial_state->begin(), initial_state->end());
    out.samples.resize(std::max(n, p));
    for (std::size_t t = p; t < n; ++t) {
      double acc = noise_std > 0.0 ? rng.gaussian(noise_std) : 0.0;
      for (std::size_t k = 1; k <= p; ++k) acc += coeffs[k - 1] * out.samples[t - k];
      out.samples[t] = acc;
    }
    out.samples.resize(n);
    return out;
  }

  const std::size_t burn = 10 * p;
  std::vector<double> buf(burn + n, 0.0);
  for (std::size_t t = 0; t < buf.size(); ++t) {
    double acc = noise_std > 0.0 ? rng.gaussian(noise_std) : 0.0;
    for (std::size_t k = 1; k <= p && k <= t; ++k) acc += coeffs[k - 1] * buf[t - k];
    buf[t] = acc;
  }
  out.samples.assign(buf.begin() + static_cast<long>(burn), buf.end());
  return out;
}

TimeSeries gen_two_sinusoids(double f1, double f2, double snr_db, std::size_t n,
                             std::uint64_t seed) {
  if (f1 == f2)
    throw Error(ErrorCode::degenerate_signal, "sinusoid frequencies must differ");
  Rng rng(seed);
  const double phase1 = rng.uniform(0.0, kTwoPi);
  const double phase2 = rng.uniform(0.0, kTwoPi);

  TimeSeries out;
  out.samples.resize(n);
  double signal_power = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double v = std::sin(kTwoPi * f1 * static_cast<double>(t) + phase1) +
               std::sin(kTwoPi * f2 * static_cast<double>(t) + phase2);
    out.samples[t] = v;
    signal_power += v * v;
  }
  if (n > 0) signal_power /= static_cast<double>(n);

  const double noise_power = signal_power / std::pow(10.0, snr_db / 10.0);
  const double noise_std = std::sqrt(noise_power);
  for (std::size_t t = 0; t < n; ++t) out.samples[t] += rng.gaussian(noise_std);
  return out;
}

std::vector<double> filter_ar(const std::vector<double>& coeffs,
                              const std::vector<double>& innovation) {
  const std::size_t p = coeffs.size();
  std::vector<double> out(innovation.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    double acc = innovation[t];
    for (std::size_t k = 1; k <= p && k <= t; ++k) acc += coeffs[k - 1] * out[t - k];
    out[t] = acc;
  }
  return out;
}

std::vector<double> speechlike_coeffs() {
  using complexd = std::complex<double>;
  std::vector<complexd> poles;
  for (auto [radius, freq] : {std::pair{0.97, 0.06}, {0.95, 0.13}, {0.92, 0.23}}) {
    const complexd pole = std::polar(radius, kTwoPi * freq);
    poles.push_back(pole);
    poles.push_back(std::conj(pole));
  }
  poles.emplace_back(0.7, 0.0);
  poles.emplace_back(-0.5, 0.0);
  poles.push_back(std::polar(0.6, kTwoPi * 0.35));
  poles.push_back(std::conj(poles.back()));

  // expand prod (z - pole) into 1 + c_1 z^-1 + ...; coeffs a_k = -c_k
  std::vector<complexd> poly{1.0};
  for (const complexd& pole : poles) {
    poly.emplace_back(0.0);
    for (std::size_t i = poly.size() - 1; i >= 1; --i) poly[i] -= pole * poly[i - 1];
  }
  std::vector<double> coeffs(poly.size() - 1);
  for (std::size_t k = 1; k < poly.size(); ++k) coeffs[k - 1] = -poly[k].real();
  return coeffs;
}

TimeSeries gen_speechlike(std::size_t n, std::uint64_t seed) {
  const std::vector<double> coeffs = speechlike_coeffs();
  const std::size_t p = coeffs.size();
  const std::size_t burn = 10 * p;
  const std::size_t total = n + burn;

  Rng rng(seed);
  std::vector<double> innovation(total);
  for (double& v : innovation) v = rng.laplace(1.0);

  const auto pulses = static_cast<std::size_t>(std::llround(0.02 * static_cast<double>(total)));
  std::vector<std::size_t> indices(total);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  for (std::size_t i = 0; i < pulses && total > 0; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (total - i));
    std::swap(indices[i], indices[j]);
  }
  for (std::size_t i = 0; i < pulses; ++i) {
    const double sign = (rng.next_u64() & 1) ? 1.0 : -1.0;
    innovation[indices[i]] += sign * rng.uniform(0.1, 1.0) * 800.0;
  }

  std::vector<double> filtered = filter_ar(coeffs, innovation);
  TimeSeries out;
  out.samples.assign(filtered.begin() + static_cast<long>(burn), filtered.end());
  return out;
}

std::vector<double> sample_gaussian(double sigma, std::size_t n, std::uint64_t seed) {
  if (sigma < 0.0) throw Error(ErrorCode::invalid_sigma, "sigma must be non-negative");
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = rng.gaussian(sigma);
  return out;
}

std::vector<double> sample_laplace(double sigma, std::size_t n, std::uint64_t seed) {
  if (sigma < 0.0) throw Error(ErrorCode::invalid_sigma, "sigma must be non-negative");
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = sigma > 0.0 ? rng.laplace(sigma) : 0.0;
  return out;
}

}  // namespace robar
