#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace tlma {

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Folds one tuple element into a derivation key. The chain
//   key' = mix64(key ^ (GOLDEN + value + (key << 6) + (key >> 2)))
// is the stable, documented mapping behind every random stream in this
// project; changing it invalidates recorded seeds.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t value) noexcept {
    return mix64(key ^ (0x9E3779B97F4A7C15ull + value + (key << 6) + (key >> 2)));
}

// Stream value for the full derivation tuple: master seed, trial index,
// scheme id (0 = scenario sampling), PSO call index within the scheme,
// PSO iteration (0 = initialization), particle index.
constexpr std::uint64_t seed_derivation(std::uint64_t master_seed, std::uint64_t trial,
                                        std::uint64_t scheme_id, std::uint64_t pso_call,
                                        std::uint64_t iteration, std::uint64_t particle) noexcept {
    std::uint64_t key = derive_key(master_seed, trial);
    key = derive_key(key, scheme_id);
    key = derive_key(key, pso_call);
    key = derive_key(key, iteration);
    return derive_key(key, particle);
}

// Deterministic random stream. The generator itself (mt19937_64) is fully
// specified by the standard and the variate transforms below avoid the
// implementation-defined std::*_distribution classes, so identical seeds
// give identical draws on every platform.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (cosine branch).
    double normal();

    // CN(0, variance): circularly symmetric complex Gaussian.
    std::complex<double> complex_normal(double variance);

  private:
    std::mt19937_64 gen_;
};

}  // namespace tlma
