#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace lyaplab {

// Counter-based splittable generator (SplitMix64 finalizer over a keyed
// counter).  Output is a pure function of (key, counter), so independent
// streams are derived by key splitting and results do not depend on which
// thread consumes which stream.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    // Stream `stream_id` of a run seeded with `seed`.  Two mixing rounds keep
    // nearby (seed, stream) pairs decorrelated.
    static CounterRng stream(std::uint64_t seed, std::uint64_t stream_id) {
        return CounterRng(mix(mix(seed + kGolden) ^ mix(stream_id * kGolden + 0x5bf0363546290f4bull)));
    }

    // Derive a child seed for a named sub-task of a run. Stable across versions.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
        return mix(mix(seed ^ 0x8824aa65c7e8fb01ull) + tag * kGolden);
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (-1, 1).
    double next_signed_unit() { return 2.0 * next_unit() - 1.0; }

    // Standard normal via Box-Muller; second value cached.
    double next_normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = next_unit();
        while (u1 <= 0.0) u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    // Index draw against a cumulative weight table (last entry ~ 1).
    std::size_t next_weighted(std::span<const double> cumulative) {
        const double u = next_unit();
        std::size_t lo = 0, hi = cumulative.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cumulative[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

  private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace lyaplab
