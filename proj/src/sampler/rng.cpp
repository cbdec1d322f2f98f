#include "dalab/rng.hpp"

#include <stdexcept>

namespace dalab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream)
    : Rng(seed, std::span<const std::uint64_t>(stream.begin(), stream.size())) {}

Rng::Rng(std::uint64_t seed, std::span<const std::uint64_t> stream) {
    std::uint64_t h = splitmix64(seed);
    for (auto i : stream) h = splitmix64(h ^ splitmix64(i + 0x9E3779B97F4A7C15ull));
    for (auto& word : s_) {
        h += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = h;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        word = z ^ (z >> 31);
    }
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t r = next();
        if (r >= threshold) return r % n;
    }
}

int Rng::uniform_int(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("Rng::uniform_int with hi < lo");
    auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
    return static_cast<int>(lo + static_cast<std::int64_t>(below(span)));
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t Rng::weighted(std::span<const double> weights) {
    double total = 0;
    for (double w : weights) {
        if (!(w >= 0)) throw std::invalid_argument("negative or NaN weight");
        total += w;
    }
    if (!(total > 0)) throw std::invalid_argument("weights sum to zero");
    double u = unit() * total;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0) continue;
        last = i;
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    return last;  // rounding left u marginally above the final weight
}

}  // namespace dalab
