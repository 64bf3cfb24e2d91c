#pragma once

#include <cstdint>
#include <random>

namespace hypervec {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Independent stream seed from a base seed plus up to three salts
// (purpose tag, epoch, worker id).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(base ^ splitmix64(a));
    s = splitmix64(s ^ splitmix64(b));
    return splitmix64(s ^ splitmix64(c));
}

// mt19937_64 with hand-rolled output mappings. The engine's sequence is
// pinned by the standard; std::uniform_*_distribution is not, so bit
// reproducibility requires doing the mapping ourselves.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Modulo bias is negligible for n << 2^64.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::mt19937_64 engine_;
};

}  // namespace hypervec
