#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace reident {

/// Seeded generator with hand-rolled draw helpers. std::mt19937_64 output is
/// pinned by the standard, and avoiding the distribution classes (whose
/// algorithms are implementation-defined) keeps generated corpora
/// byte-identical across compilers.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform over [0, n); n must be positive. Draws until the value falls
    /// below the largest multiple of n, so there is no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    /// Uniform over the inclusive range [lo, hi].
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// True with probability numer/denom.
    bool chance(std::uint64_t numer, std::uint64_t denom) { return below(denom) < numer; }

    template <class T>
    const T& pick(const std::vector<T>& pool) {
        return pool[below(pool.size())];
    }

    /// Fisher-Yates shuffle, stable across platforms for the same seed.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace reident
