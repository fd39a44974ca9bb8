#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pmaplab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t label_hash(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Seeded generator with labeled child streams. Sampling avoids std
// distributions so results do not depend on the standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), eng_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    Rng stream(std::string_view label) const {
        return Rng(splitmix64(seed_ ^ splitmix64(label_hash(label))));
    }
    Rng stream(std::string_view label, std::uint64_t k) const {
        return stream(label).stream_index(k);
    }
    Rng stream_index(std::uint64_t k) const {
        return Rng(splitmix64(seed_ + 0x632be59bd9b4e019ULL * (k + 1)));
    }

    std::uint64_t next() { return eng_(); }

    // uniform in [0, bound)
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return next();
        std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    // uniform in [lo, hi]
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(below(span));
    }

    bool coin() { return next() & 1; }

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

} // namespace pmaplab
