// Counter-based pseudo random numbers (SplitMix64 output function applied to
// a keyed counter). Every consumer derives its own named stream from the one
// experiment seed, so dataset generation, splitting, weight init and batch
// shuffling stay independently reproducible.
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace vhcm {

class Rng {
  public:
    explicit Rng(std::uint64_t key) : key_(key) {}

    // Stream derivation: hash the label into the key. Deriving with the same
    // (seed, label) pair always yields the same stream.
    static Rng derive(std::uint64_t seed, std::string_view label) {
        std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
        for (unsigned char c : label) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return Rng(mix(seed ^ mix(h)));
    }

    Rng derive(std::uint64_t index) const { return Rng(mix(key_ ^ mix(index + 0x9e3779b97f4a7c15ull))); }

    std::uint64_t next_u64() { return mix(key_ + ++counter_ * 0x9e3779b97f4a7c15ull); }

    // Uniform in [0, 1) with 53 significant bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // Rejection-free modulo is acceptable here: n is tiny vs 2^64.
        return next_u64() % n;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace vhcm
