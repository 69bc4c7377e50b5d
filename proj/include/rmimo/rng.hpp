// Seeded RNG with hierarchical sub-stream derivation for reproducible
// Monte Carlo runs. Every trial derives its own generator from
// (master_seed, stream ids...), so results are independent of worker
// count and trial scheduling.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace rmimo {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for sub-stream (id0, id1, ...) of `master`. Each id is folded in
// through a bijective mix, so distinct id tuples of equal length map to
// distinct seeds.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> ids) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t id : ids) h = splitmix64(h ^ splitmix64(id));
    return h;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    Rng(std::uint64_t master, std::initializer_list<std::uint64_t> ids)
        : engine_(derive_seed(master, ids)) {}

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Circular complex Gaussian CN(0, 1): real and imaginary parts each
    // N(0, 1/2). Box-Muller; consumes exactly two engine draws.
    std::complex<double> complex_gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double mag = std::sqrt(-std::log(u1));
        const double ph = 2.0 * std::numbers::pi * u2;
        return {mag * std::cos(ph), mag * std::sin(ph)};
    }

    // Real N(0, 1). Two draws, same budget discipline as complex_gaussian.
    double gaussian() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace rmimo
