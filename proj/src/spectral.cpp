#include "robar/spectral.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "robar/errors.hpp"
#include "robar/parallel.hpp"
#include "robar/rng.hpp"
#include "robar/signal.hpp"

namespace robar {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// sinusoid frequency band and minimum separation for the missing-data
// simulation; the two tones are drawn uniformly per trial
constexpr double kFreqLo = 0.05;
constexpr double kFreqHi = 0.45;
constexpr double kMinSep = 0.05;

std::vector<double> to_db(const std::vector<double>& power) {
  std::vector<double> out(power.size());
  for (std::size_t i = 0; i < power.size(); ++i)
    out[i] = 10.0 * std::log10(std::max(power[i], 1e-300));
  return out;
}

double pearson(const std::vector<double>& u, const std::vector<double>& v) {
  const auto n = static_cast<double>(u.size());
  double mean_u = 0.0, mean_v = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mean_u += u[i];
    mean_v += v[i];
  }
  mean_u /= n;
  mean_v /= n;
  double cov = 0.0, var_u = 0.0, var_v = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double du = u[i] - mean_u;
    const double dv = v[i] - mean_v;
    cov += du * dv;
    var_u += du * du;
    var_v += dv * dv;
  }
  if (!(var_u > 0.0) || !(var_v > 0.0))
    throw Error(ErrorCode::degenerate_signal, "spectrum correlation of a constant vector");
  return cov / std::sqrt(var_u * var_v);
}

}  // namespace

SpectrumGrid ar_spectrum(const ARModel& model, int grid_points) {
  if (grid_points < 1)
    throw Error(ErrorCode::out_of_range, "grid_points must be positive");
  SpectrumGrid grid;
  grid.frequencies.resize(static_cast<std::size_t>(grid_points));
  grid.power.resize(static_cast<std::size_t>(grid_points));
  const double step = grid_points > 1 ? 0.5 / static_cast<double>(grid_points - 1) : 0.0;
  for (int j = 0; j < grid_points; ++j) {
    const double f = step * j;
    grid.frequencies[static_cast<std::size_t>(j)] = f;
    std::complex<double> denom(1.0, 0.0);
    for (int k = 1; k <= model.order; ++k)
      denom -= model.coeffs(k - 1) * std::exp(std::complex<double>(0.0, -kTwoPi * f * k));
    const double mag2 = std::norm(denom);
    double value = model.residual_variance / mag2;
    if (!std::isfinite(value)) value = std::numeric_limits<double>::max();
    grid.power[static_cast<std::size_t>(j)] = value;
  }
  return grid;
}

double spectrum_correlation(const SpectrumGrid& s1, const SpectrumGrid& s2) {
  if (s1.power.size() != s2.power.size())
    throw Error(ErrorCode::other, "spectrum grids have different sizes");
  return pearson(s1.power, s2.power);
}

std::pair<double, double> missing_data_trial(const Table1Config& config, double snr_db,
                                             std::uint64_t trial_seed) {
  Rng rng(trial_seed);
  double f1 = 0.0, f2 = 0.0;
  do {
    f1 = rng.uniform(kFreqLo, kFreqHi);
    f2 = rng.uniform(kFreqLo, kFreqHi);
  } while (std::fabs(f1 - f2) < kMinSep);

  const TimeSeries full = gen_two_sinusoids(f1, f2, snr_db, static_cast<std::size_t>(config.n),
                                            derive_seed(trial_seed, 1));
  const SpectrumGrid reference =
      ar_spectrum(yule_walker_fit(full, config.order), config.grid_points);

  auto [corrupted, mask] =
      apply_missing(full, config.missing_fraction, derive_seed(trial_seed, 2));
  (void)mask;

  const SpectrumGrid yw =
      ar_spectrum(yule_walker_fit(corrupted, config.order), config.grid_points);
  const SpectrumGrid robust = ar_spectrum(
      robust_fit(build_design(corrupted, config.order), config.robust), config.grid_points);

  if (config.db_correlation) {
    const std::vector<double> ref_db = to_db(reference.power);
    return {pearson(ref_db, to_db(yw.power)), pearson(ref_db, to_db(robust.power))};
  }
  return {spectrum_correlation(reference, yw), spectrum_correlation(reference, robust)};
}

Table1Result run_table1(const Table1Config& config, int jobs) {
  if (config.trials < 1)
    throw Error(ErrorCode::out_of_range, "trials must be at least 1");
  if (!(config.missing_fraction >= 0.0 && config.missing_fraction <= 0.9))
    throw Error(ErrorCode::invalid_fraction, "missing_fraction must lie in [0, 0.9]");
  const std::size_t snr_count = config.snr_list_db.size();
  const auto trials = static_cast<std::size_t>(config.trials);

  std::vector<std::pair<double, double>> outcomes(snr_count * trials);
  parallel_for(jobs, outcomes.size(), [&](std::size_t i) {
    const std::size_t snr_index = i / trials;
    outcomes[i] = missing_data_trial(config, config.snr_list_db[snr_index],
                                     derive_seed(config.seed, i));
  });

  Table1Result result;
  result.snr_list_db = config.snr_list_db;
  result.yule_walker_mean.assign(snr_count, 0.0);
  result.robust_mean.assign(snr_count, 0.0);
  // fixed-order reduction keeps sums identical across job counts
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const std::size_t snr_index = i / trials;
    result.yule_walker_mean[snr_index] += outcomes[i].first;
    result.robust_mean[snr_index] += outcomes[i].second;
  }
  for (std::size_t s = 0; s < snr_count; ++s) {
    result.yule_walker_mean[s] /= static_cast<double>(trials);
    result.robust_mean[s] /= static_cast<double>(trials);
  }
  return result;
}

}  // namespace robar
