#ifndef OSCRED_RNG_HPP
#define OSCRED_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace oscred {

// splitmix64 + Box-Muller; self-contained so streams are identical across
// standard libraries for a given seed.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform on [0, 1)
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    long long uniform_int(long long lo, long long hi) {  // inclusive bounds
        return lo + (long long)(next_u64() % (std::uint64_t)(hi - lo + 1));
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        do {
            u = next_double();
        } while (u <= 0.0);
        const double v = next_double();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

    std::complex<double> complex_normal() { return {normal(), normal()}; }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace oscred

#endif
