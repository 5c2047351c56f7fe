#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace jellynet {

/// Identifier written into serialized topologies so readers know which
/// generator produced the blueprint.
inline constexpr std::string_view kRngId = "mt19937_64";

/// SplitMix64 finalizer. Used to derive independent per-trial seeds from a
/// user-visible seed and a counter.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for stream `stream` of trial `counter` derived from `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t counter = 0) {
    return mix64(mix64(seed ^ mix64(stream)) + counter);
}

/// Seedable generator. The standard distributions are implementation
/// defined, so bounded integers and reals are drawn by hand to keep the
/// output a function of the engine alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    template <typename Int>
    Int index(Int n) {
        return static_cast<Int>(below(static_cast<std::uint64_t>(n)));
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename It>
    void shuffle(It first, It last) {
        const auto n = last - first;
        for (auto i = n - 1; i > 0; --i) {
            const auto j = static_cast<decltype(i)>(below(static_cast<std::uint64_t>(i) + 1));
            using std::swap;
            swap(first[i], first[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace jellynet
