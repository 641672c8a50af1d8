#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace robar {

struct TimeSeries {
  std::vector<double> samples;
  std::optional<double> sample_rate;          // Hz
  std::optional<std::vector<bool>> mask;      // true = sample present

  std::size_t size() const { return samples.size(); }
};

// Throws if samples are non-finite or the mask length disagrees.
void validate(const TimeSeries& series);

struct MissingMask {
  std::vector<bool> present;
  std::size_t missing_count = 0;
};

// Contiguous non-overlapping frames; the trailing remainder is discarded.
std::vector<TimeSeries> frame_split(const TimeSeries& series, std::size_t frame_length);

// Marks exactly round(fraction * N) uniformly chosen samples missing and
// zero-fills them. The equations built from the series keep their rows; a
// missing sample shows up as a gross residual error downstream.
std::pair<TimeSeries, MissingMask> apply_missing(const TimeSeries& series, double fraction,
                                                 std::uint64_t seed);

// x_t = sum_k coeffs[k-1] * x_{t-k} + w_t, w_t ~ N(0, noise_std^2).
// Without an initial state a burn-in of 10 * order samples is discarded.
// With one, the first `order` output samples are the given state verbatim
// and the recursion (with noise) continues from there.
TimeSeries gen_ar_process(const std::vector<double>& coeffs, double noise_std, std::size_t n,
                          std::uint64_t seed,
                          const std::optional<std::vector<double>>& initial_state = std::nullopt);

// Two unit-amplitude sinusoids with seeded random phases plus white Gaussian
// noise scaled to the requested SNR against the actual sinusoid power.
TimeSeries gen_two_sinusoids(double f1, double f2, double snr_db, std::size_t n,
                             std::uint64_t seed);

// AR recursion over a caller-supplied innovation, zero initial state:
// out[t] = innovation[t] + sum_k coeffs[k-1] * out[t-k].
std::vector<double> filter_ar(const std::vector<double>& coeffs,
                              const std::vector<double>& innovation);

// Coefficients of an order-10 resonant filter: three narrow conjugate pole
// pairs plus four damped poles, all inside the unit circle.
std::vector<double> speechlike_coeffs();

// Speech-like test signal: the order-10 filter above driven by unit-variance
// Laplace innovation in which 2% of samples carry a heavy pulse of random
// sign and magnitude uniform in [80, 800]. The pulses model impulsive
// excitation; each one surfaces as a single gross residual downstream.
TimeSeries gen_speechlike(std::size_t n, std::uint64_t seed);

std::vector<double> sample_gaussian(double sigma, std::size_t n, std::uint64_t seed);

// sigma is the standard deviation (Laplace scale b = sigma / sqrt(2)).
std::vector<double> sample_laplace(double sigma, std::size_t n, std::uint64_t seed);

}  // namespace robar
