#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "expect_error.hpp"
#include "robar/rng.hpp"
#include "robar/signal.hpp"

using robar::ErrorCode;
using robar::Rng;
using robar::TimeSeries;

namespace {

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size());
}

double excess_kurtosis(const std::vector<double>& v) {
  const double m = mean_of(v);
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(v.size());
  m4 /= static_cast<double>(v.size());
  return m4 / (m2 * m2) - 3.0;
}

}  // namespace

TEST_CASE("validate rejects non-finite samples and inconsistent masks") {
  TimeSeries series;
  series.samples = {1.0, 2.0, 3.0};
  CHECK_NOTHROW(robar::validate(series));

  series.samples[1] = std::nan("");
  CHECK_ERROR_CODE(robar::validate(series), ErrorCode::degenerate_signal);

  series.samples[1] = 2.0;
  series.mask = std::vector<bool>{true, false};
  CHECK_ERROR_CODE(robar::validate(series), ErrorCode::other);
}

TEST_CASE("frame_split cuts contiguous frames and drops the remainder") {
  TimeSeries series;
  series.samples = {0, 1, 2, 3, 4, 5, 6};
  series.sample_rate = 8000.0;

  const auto frames = robar::frame_split(series, 3);
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].samples == std::vector<double>{0, 1, 2});
  CHECK(frames[1].samples == std::vector<double>{3, 4, 5});
  CHECK(frames[0].sample_rate == 8000.0);

  CHECK(robar::frame_split(series, 8).empty());
  CHECK_ERROR_CODE(robar::frame_split(series, 0), ErrorCode::out_of_range);
}

TEST_CASE("apply_missing zeroes the rounded count of uniformly chosen samples") {
  TimeSeries series;
  series.samples.assign(64, 1.0);

  auto [corrupted, mask] = robar::apply_missing(series, 0.25, 7);
  CHECK(mask.missing_count == 16);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < corrupted.samples.size(); ++i) {
    if (corrupted.samples[i] == 0.0) {
      ++zeros;
      CHECK_FALSE(mask.present[i]);
    } else {
      CHECK(corrupted.samples[i] == 1.0);
      CHECK(mask.present[i]);
    }
  }
  CHECK(zeros == 16);
  REQUIRE(corrupted.mask.has_value());
  CHECK(*corrupted.mask == mask.present);
}

TEST_CASE("apply_missing rounds the count and accepts the edges") {
  TimeSeries series;
  series.samples.assign(6, 1.0);
  CHECK(robar::apply_missing(series, 0.25, 1).second.missing_count == 2);  // round(1.5)

  auto [unchanged, none] = robar::apply_missing(series, 0.0, 1);
  CHECK(none.missing_count == 0);
  CHECK(unchanged.samples == series.samples);

  CHECK(robar::apply_missing(series, 0.9, 1).second.missing_count == 5);
  CHECK_ERROR_CODE(robar::apply_missing(series, -0.1, 1), ErrorCode::invalid_fraction);
  CHECK_ERROR_CODE(robar::apply_missing(series, 0.95, 1), ErrorCode::invalid_fraction);
}

TEST_CASE("apply_missing is seed-deterministic") {
  TimeSeries series;
  for (int i = 0; i < 50; ++i) series.samples.push_back(i + 1.0);
  auto a = robar::apply_missing(series, 0.3, 11);
  auto b = robar::apply_missing(series, 0.3, 11);
  auto c = robar::apply_missing(series, 0.3, 12);
  CHECK(a.first.samples == b.first.samples);
  CHECK(a.first.samples != c.first.samples);
}

TEST_CASE("gen_ar_process rejects characteristic roots on or outside the unit circle") {
  CHECK_ERROR_CODE(robar::gen_ar_process({1.1}, 1.0, 10, 1), ErrorCode::unstable_model);
  CHECK_ERROR_CODE(robar::gen_ar_process({1.0}, 1.0, 10, 1), ErrorCode::unstable_model);
  CHECK_ERROR_CODE(robar::gen_ar_process({1.3, -0.2}, 1.0, 10, 1), ErrorCode::unstable_model);
  CHECK_NOTHROW(robar::gen_ar_process({0.99}, 1.0, 10, 1));
}

TEST_CASE("gen_ar_process runs the exact recursion from a given initial state") {
  const auto series =
      robar::gen_ar_process({0.9}, 0.0, 8, 123, std::vector<double>{2.0});
  REQUIRE(series.size() == 8);
  for (std::size_t t = 0; t < 8; ++t)
    CHECK(series.samples[t] == doctest::Approx(2.0 * std::pow(0.9, t)).epsilon(1e-12));

  CHECK_ERROR_CODE(robar::gen_ar_process({0.9}, 0.0, 8, 1, std::vector<double>{1.0, 2.0}),
                   ErrorCode::other);
}

TEST_CASE("gen_ar_process reaches the stationary AR(1) variance") {
  const auto series = robar::gen_ar_process({0.6}, 1.0, 200000, 42);
  const double expected = 1.0 / (1.0 - 0.36);
  CHECK(var_of(series.samples) == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("filter_ar runs the recursion from zero state") {
  std::vector<double> impulse(6, 0.0);
  impulse[0] = 1.0;
  const auto h = robar::filter_ar({0.5}, impulse);
  for (std::size_t t = 0; t < h.size(); ++t)
    CHECK(h[t] == doctest::Approx(std::pow(0.5, t)).epsilon(1e-12));

  CHECK(robar::filter_ar({0.5}, std::vector<double>(4, 0.0)) == std::vector<double>(4, 0.0));
}

TEST_CASE("gen_two_sinusoids scales noise to the requested SNR") {
  const auto loud = robar::gen_two_sinusoids(0.11, 0.31, 30.0, 8192, 5);
  const auto even = robar::gen_two_sinusoids(0.11, 0.31, 0.0, 8192, 5);
  // two unit sinusoids have power close to 1; at 0 dB the noise doubles it
  CHECK(var_of(loud.samples) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(var_of(even.samples) == doctest::Approx(2.0).epsilon(0.1));

  CHECK_ERROR_CODE(robar::gen_two_sinusoids(0.2, 0.2, 10.0, 64, 1),
                   ErrorCode::degenerate_signal);
}

TEST_CASE("gen_two_sinusoids is seed-deterministic") {
  const auto a = robar::gen_two_sinusoids(0.1, 0.3, 20.0, 64, 9);
  const auto b = robar::gen_two_sinusoids(0.1, 0.3, 20.0, 64, 9);
  const auto c = robar::gen_two_sinusoids(0.1, 0.3, 20.0, 64, 10);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c.samples);
}

TEST_CASE("gen_speechlike is deterministic and carries heavy pulses") {
  const auto a = robar::gen_speechlike(1600, 3);
  const auto b = robar::gen_speechlike(1600, 3);
  const auto c = robar::gen_speechlike(1600, 4);
  REQUIRE(a.size() == 1600);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c.samples);

  // pulse-free counterpart from the same Laplace stream: the same seed first
  // draws the full innovation, so the filtered signals differ only by pulses
  robar::Rng rng(3);
  std::vector<double> innovation(1600 + 100);  // burn-in of 10 * order
  for (double& w : innovation) w = rng.laplace(1.0);
  const auto base = robar::filter_ar(robar::speechlike_coeffs(), innovation);
  double base_max = 0.0;
  for (std::size_t t = 100; t < base.size(); ++t)
    base_max = std::max(base_max, std::fabs(base[t]));
  double pulsed_max = 0.0;
  for (double v : a.samples) pulsed_max = std::max(pulsed_max, std::fabs(v));
  CHECK(pulsed_max > 3.0 * base_max);
}

TEST_CASE("speechlike_coeffs defines a stable order-10 filter") {
  const auto coeffs = robar::speechlike_coeffs();
  REQUIRE(coeffs.size() == 10);
  // stability shows up as a decaying impulse response
  std::vector<double> impulse(4000, 0.0);
  impulse[0] = 1.0;
  const auto h = robar::filter_ar(coeffs, impulse);
  double tail = 0.0;
  for (std::size_t t = 3000; t < h.size(); ++t) tail = std::max(tail, std::fabs(h[t]));
  CHECK(tail < 1e-6);
  CHECK(std::fabs(h[1]) > 1.0);  // resonant, not trivial
}

TEST_CASE("sample moments discriminate Gaussian from Laplace draws") {
  const auto g = robar::sample_gaussian(2.0, 400000, 21);
  const auto l = robar::sample_laplace(2.0, 400000, 22);
  CHECK(std::fabs(mean_of(g)) < 0.02);
  CHECK(std::fabs(mean_of(l)) < 0.02);
  CHECK(std::sqrt(var_of(g)) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(std::sqrt(var_of(l)) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(std::fabs(excess_kurtosis(g)) < 0.2);
  CHECK(excess_kurtosis(l) == doctest::Approx(3.0).epsilon(0.15));

  CHECK_ERROR_CODE(robar::sample_gaussian(-1.0, 10, 1), ErrorCode::invalid_sigma);
  CHECK_ERROR_CODE(robar::sample_laplace(-1.0, 10, 1), ErrorCode::invalid_sigma);
}

TEST_CASE("rng streams are reproducible and derive_seed decorrelates them") {
  Rng a(77), b(77), c(78);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
  }

  std::set<std::uint64_t> derived;
  for (std::uint64_t i = 0; i < 1000; ++i) derived.insert(robar::derive_seed(42, i));
  CHECK(derived.size() == 1000);

  Rng d0(robar::derive_seed(42, 0)), d1(robar::derive_seed(42, 1));
  bool all_equal = true;
  for (int i = 0; i < 16; ++i)
    if (d0.next_u64() != d1.next_u64()) all_equal = false;
  CHECK_FALSE(all_equal);
}

TEST_CASE("rng uniform and open-interval draws stay in range") {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double o = rng.next_open();
    CHECK(o > 0.0);
    CHECK(o < 1.0);
    const double v = rng.uniform(-3.0, 2.0);
    CHECK(v >= -3.0);
    CHECK(v < 2.0);
  }
}
