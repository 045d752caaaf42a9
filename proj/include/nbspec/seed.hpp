#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace nbspec {

// SplitMix64 finalizer. Stable across platforms and compilers.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t stable_hash(std::uint64_t master, std::uint64_t index) {
    return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// A master seed plus the rule for deriving per-trial seeds from it.
struct Seed {
    std::uint64_t master = 0;

    Seed derive(std::uint64_t trial) const { return Seed{stable_hash(master, trial)}; }
    friend bool operator==(const Seed&, const Seed&) = default;
};

// Random source with portable bounded draws. The standard distributions are
// implementation-defined, so they would break byte-identical outputs across
// standard libraries; mt19937_64 itself is fully specified.
class Rng {
    __extension__ using u128 = unsigned __int128;

public:
    explicit Rng(Seed seed) : engine_(mix64(seed.master)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound). Lemire's nearly-divisionless method.
    std::uint64_t below(std::uint64_t bound) {
        u128 m = static_cast<u128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                m = static_cast<u128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace nbspec
