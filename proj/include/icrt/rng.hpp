#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace icrt {

// SplitMix64 step (Steele/Lea/Flood; Vigna's fixed-increment variant).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based splittable stream: replica i of master seed s draws from a
// state derived by hashing (s, i), so replicas are order-independent and a
// stream can be re-opened anywhere. All sampling is hand-rolled on top of
// the 64-bit output; nothing here depends on libstdc++ distribution
// internals, which keeps reports byte-identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds
        (void)splitmix64(state_);
    }

    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t s = master_seed;
        std::uint64_t a = splitmix64(s);
        std::uint64_t t = stream_id + 0x632BE59BD9B4E019ULL;
        std::uint64_t b = splitmix64(t);
        return Rng(a ^ (b + 0x9E3779B97F4A7C15ULL * (stream_id + 1)));
    }

    std::uint64_t u64() { return splitmix64(state_); }

    // uniform on [0,1) with 53 random bits
    double uniform01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // uniform on (0,1], safe as a log argument
    double uniform01_open() { return 1.0 - uniform01(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // rejection to kill modulo bias
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = u64();
            if (r >= threshold) return r % n;
        }
    }

    double exponential(double rate) { return -std::log(uniform01_open()) / rate; }

    // k distinct values from {0,...,n-1}, in sampling order
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        std::vector<int> out;
        out.reserve(k);
        for (int i = 0; i < k; ++i) {
            std::uint64_t j = i + below(static_cast<std::uint64_t>(n - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    std::uint64_t state_;
};

} // namespace icrt
