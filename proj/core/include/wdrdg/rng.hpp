#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace wdrdg {

/// Derives an independent stream seed from a root seed, a stream label and an
/// index. Stable across platforms and runs; every source of randomness in the
/// library draws its seed through this function so that one root seed pins the
/// whole pipeline.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index = 0);

/// Convenience overload for nested substreams (trial, target, domain, ...).
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t a,
                          std::uint64_t b, std::uint64_t c = 0, std::uint64_t d = 0);

/// Deterministic random generator with bit-stable output across platforms.
/// std::mt19937_64 is fully specified by the standard; the distributions here
/// are hand-rolled because the standard library's are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53 bits of precision.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double gaussian();

    /// Uniform integer in [0, n), n >= 1. Rejection-sampled, no modulo bias.
    std::size_t uniform_below(std::size_t n);

    /// k distinct indices drawn from [0, n), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[uniform_below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wdrdg
