#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace agentclass {

// Mixes a user seed with a purpose tag so two components handed the same seed
// draw from unrelated streams. Without this, e.g. scenario generation and the
// train/test split would run the same shuffle over the same index range and
// the "random" test set would be exactly the generated class-1 rows.
inline std::uint64_t seed_stream(std::uint64_t seed, std::string_view purpose) {
    std::uint64_t h = 14695981039346656037ull;  // FNV-1a over the tag
    for (unsigned char c : purpose) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ull + h;  // splitmix64 finalizer
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic random source. mt19937_64 output is pinned by the standard, and
// all value mappings are hand-rolled here: std::shuffle and the std distributions
// are implementation-defined, which would break cross-platform reproducibility.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Unbiased integer in [0, n) via rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // Uniform in [0, 1) with 53 significant bits.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Inclusive integer range.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace agentclass
