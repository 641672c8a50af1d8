#pragma once

#include <cmath>
#include <cstdint>

namespace robar {

// splitmix64: tiny, well-mixed, and identical on every platform. The std
// distributions are implementation-defined, which would break bit-for-bit
// reproducibility between standard libraries, so sampling is hand-rolled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53 usable bits
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1); rejects the exact zero draw so logs stay finite
  double next_open() {
    double u;
    do {
      u = next_double();
    } while (u <= 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Box-Muller; the second deviate of each pair is cached
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_open();
    double u2 = next_double();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  double gaussian(double sigma) { return sigma * gaussian(); }

  // Laplace with standard deviation sigma (scale b = sigma / sqrt(2))
  double laplace(double sigma) {
    double b = sigma / std::sqrt(2.0);
    double u = next_open() - 0.5;  // (-0.5, 0.5)
    double mag = -b * std::log(1.0 - 2.0 * std::fabs(u));
    return u < 0.0 ? -mag : mag;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Independent stream per (master seed, index); used so that Monte-Carlo
// trials and generator sub-streams stay identical under any parallelism.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  Rng mixer(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  return mixer.next_u64();
}

}  // namespace robar
