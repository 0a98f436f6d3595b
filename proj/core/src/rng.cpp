#include "wdrdg/rng.hpp"

#include <cmath>
#include <numbers>

#include "wdrdg/errors.hpp"

namespace wdrdg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index) {
    std::uint64_t h = splitmix64(root ^ fnv1a(stream));
    return splitmix64(h ^ index);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t a,
                          std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    std::uint64_t h = splitmix64(root ^ fnv1a(stream));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return splitmix64(h ^ d);
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

std::size_t Rng::uniform_below(std::size_t n) {
    if (n == 0) throw InvalidArgument("uniform_below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw InvalidArgument("sample_without_replacement: k exceeds n");
    // Partial Fisher-Yates over an index vector.
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_below(n - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(k);
    return indices;
}

}  // namespace wdrdg
