#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>

namespace isotm {

// Reproducible sample generator. The raw stream is std::mt19937_64 (a fully
// specified generator), and doubles are produced by the explicit mapping
// (x >> 11) * 2^-53 rather than uniform_real_distribution, whose output is
// implementation-defined. Identical seeds therefore give identical samples
// on any platform or standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent substream for a named check: seed is combined with a
    // FNV-1a hash of the name.
    Rng(std::uint64_t seed, const std::string& stream) : gen_(seed ^ fnv1a(stream)) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    Eigen::VectorXd uniform_vec(int n, double lo, double hi) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    static std::uint64_t fnv1a(const std::string& s) {
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace isotm
