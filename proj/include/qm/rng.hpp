#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace qm {

// All randomness flows through Rng, which wraps std::mt19937_64 (whose
// output stream is pinned by the standard) and implements its own
// uniform/normal transforms. std::uniform_real_distribution and
// std::normal_distribution are deliberately avoided: their algorithms are
// implementation-defined, so seeded streams would differ across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller. Variates come in pairs; the second
    /// one is cached so consecutive calls consume the engine predictably.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    std::vector<double> normals(std::size_t count, double scale = 1.0) {
        std::vector<double> out(count);
        for (auto& v : out) v = scale * normal();
        return out;
    }

    /// Uniform integer in [0, n). Modulo reduction; the bias is < 2^-50 for
    /// every n used here.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Derives an independent sub-seed from a base seed and a purpose tag
/// (SplitMix64 finalizer). Used to give each consumer of randomness inside
/// a run its own stream, so adding or dropping one consumer does not shift
/// the others.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed ^ (tag * 0x9E3779B97F4A7C15ULL);
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace qm
