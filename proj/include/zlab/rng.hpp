#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace zlab {

// Seeded generator with explicit output mappings. std::mt19937_64 is fully
// specified by the standard and the mappings below avoid the
// implementation-defined std::*_distribution, so identical seeds give
// identical streams on every toolchain.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // uniform over {lo, ..., hi} via rejection-free modulo (bias < 2^-50 for
    // the small ranges used here)
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(eng_() % span);
    }

    // log-uniform over [a, b], a, b > 0
    double log_uniform(double a, double b) {
        return a * std::exp(uniform() * std::log(b / a));
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace zlab
