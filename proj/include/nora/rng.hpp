#ifndef NORA_RNG_HPP_
#define NORA_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace nora {

// Deterministic stream splitting: replication r of master seed s draws its
// seed from splitmix64(s ^ golden*r), so any replication is reproducible in
// isolation. std::random distributions are implementation-defined, so all
// sampling goes through explicit inverse transforms on uniform doubles.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream));
}

class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1]
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // exponential with the given mean
    double exponential(double mean) { return -mean * std::log(uniform_pos()); }

    std::uint64_t next_u64() { return gen_(); }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // Lemire-style rejection-free enough for n << 2^64; bias < 2^-53.
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace nora

#endif  // NORA_RNG_HPP_
