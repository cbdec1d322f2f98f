#pragma once

// Deterministic, platform-independent random numbers.
//
// The generator is xoshiro256** (Blackman & Vigna). A generator is always
// derived from a 64-bit seed plus a stream path (a short list of 64-bit
// indices, e.g. {round_index} or {participant, round}):
//
//   h = splitmix64(seed)
//   for each index i in the path:  h = splitmix64(h ^ splitmix64(i + 0x9E3779B97F4A7C15))
//   state[0..3] = four successive outputs of a splitmix64 sequence started at h
//
// Bounded integers use rejection sampling on the full 64-bit output, and
// unit doubles take the top 53 bits. None of this depends on the standard
// library's distribution implementations, so draws are identical everywhere.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>

namespace dalab {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : Rng(seed, {}) {}
    Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);
    Rng(std::uint64_t seed, std::span<const std::uint64_t> stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() { return next(); }
    std::uint64_t next();

    /// Uniform on [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n);
    /// Uniform on [lo, hi].
    int uniform_int(int lo, int hi);
    /// Uniform on [0, 1).
    double unit();
    bool bernoulli(double p) { return unit() < p; }
    /// Index drawn with probability proportional to weights[i] (all >= 0, sum > 0).
    std::size_t weighted(std::span<const double> weights);

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace dalab
