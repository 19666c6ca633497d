#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace mdiqd {

// Deterministic random stream, threaded explicitly through every sampling
// operation. There is no global generator anywhere in the library: one Rng
// per logical actor (session, worker, public coin) keeps runs reproducible
// regardless of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0,1) built from the top 53 bits, so results do not depend
    // on standard-library distribution internals.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    int bit() { return static_cast<int>(engine_() >> 63); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Derives an independent child stream. Used for the public coins both
    // parties agree on (estimation-round selection), so the choice is part
    // of the transcript and reproducible.
    Rng fork(std::uint64_t tag) {
        return Rng(engine_() ^ (0x9E3779B97F4A7C15ULL * (tag + 1)));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace mdiqd
