#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace edcasim {

// Deterministic random source. Wraps std::mt19937_64 (whose output sequence
// is fixed by the standard) and performs bounded draws with masked rejection
// sampling, so identical seeds yield identical draw sequences on every
// platform. std::uniform_int_distribution is avoided on purpose: its
// algorithm is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent stream for one station within one run: the run seed is
    // expanded with splitmix64 at the stream's index.
    static Rng for_stream(std::uint64_t run_seed, std::uint64_t stream) {
        std::uint64_t state = run_seed + (stream + 1) * 0x9e3779b97f4a7c15ULL;
        return Rng(splitmix64(state));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform draw from [0, n). Exact, not modulo-biased.
    std::uint32_t uniform_below(std::uint32_t n) {
        if (n <= 1) return 0;
        const std::uint32_t mask = (n & (n - 1)) == 0
                                       ? n - 1
                                       : (std::uint32_t{1} << std::bit_width(n - 1)) - 1;
        for (;;) {
            const auto v = static_cast<std::uint32_t>(gen_()) & mask;
            if (v < n) return v;
        }
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t state) {
        std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 gen_;
};

}  // namespace edcasim
