#pragma once

#include <cmath>
#include <cstdint>

namespace qmi {

// Counter-based generator (SplitMix64 finalizer over a keyed counter).
// split() derives statistically independent child streams from the parent
// key alone, so trajectory ensembles can be partitioned across workers
// without any shared state.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(stream + 0xbf58476d1ce4e5b9ull)),
          counter_(0) {}

    std::uint64_t next_u64() {
        return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_);
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal; Box-Muller, one value per call so the draw count
    // stays predictable
    double gaussian() {
        double u1;
        do { u1 = uniform(); } while (u1 == 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.28318530717958647692 * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

    Rng split(std::uint64_t child) const {
        Rng r(0);
        r.key_ = mix(key_ ^ mix(child + 0x94d049bb133111ebull));
        r.counter_ = 0;
        return r;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace qmi
