#ifndef HOMEFIT_RNG_HPP
#define HOMEFIT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace homefit {

// Deterministic random source. std::mt19937_64 has a standard-specified
// output sequence, and all derivations below are written out explicitly, so
// the same seed yields the same stream on every platform. The distribution
// adaptors from <random> are implementation-defined and deliberately unused.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform on [0, 1): top 53 bits scaled by 2^-53
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform on [lo, hi)
    double next_in(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // uniform integer in [0, n); modulo reduction (bias < 2^-40 for n < 2^24)
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::next_below: n must be positive");
        return engine_() % n;
    }

    // standard normal via Box-Muller (one value per pair of uniforms)
    double next_normal() {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        double u2 = next_double();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // in-place Fisher-Yates, descending, j = next_below(i + 1)
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace homefit

#endif
