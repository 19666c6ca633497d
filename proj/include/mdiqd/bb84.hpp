#pragma once

#include <cstddef>
#include <cstdint>

#include "mdiqd/finite_key.hpp"
#include "mdiqd/qubit.hpp"
#include "mdiqd/rng.hpp"

namespace mdiqd {

enum class EveStrategy : std::uint8_t { None, InterceptResend };

struct Bb84Config {
    std::size_t n_signals = 0;
    EveStrategy eve = EveStrategy::None;
    double p_flip = 0.0;           // channel flip probability per qubit
    double sample_fraction = 0.5;  // share of sifted bits revealed for estimation
    double tolerable_qber = 0.11;  // abort threshold Q, also enters the bound
    double source_quality = 1.0;   // q in the finite-key bound
    double eps_qkd = 1e-10;        // total budget; eps_cor = eps_bar = eps_qkd/2
    double eps_q = 1e-10;          // failure probability for mu
    double f_ec = 1.1;             // leak_ec = f_ec * n * h(Q)

    void validate() const;  // throws std::invalid_argument
};

struct Bb84Outcome {
    Bits sifted_alice;
    Bits sifted_bob;
    // Eve's measured bit per sifted position; empty when no eavesdropper.
    Bits eve_sifted_guesses;
    // Estimation flag per sifted position (public sample).
    std::vector<std::uint8_t> sampled;

    double observed_qber = 0.0;
    std::size_t secure_length = 0;  // l from the finite-key bound; 0 on abort
    bool aborted = false;
    double mu = 0.0;
    std::size_t raw_bits = 0;     // n = sifted - sample
    std::size_t sample_bits = 0;  // k

    // First secure_length unsampled sifted bits, as seen by each party.
    Bits key_alice;
    Bits key_bob;
    Bits eve_key_guesses;  // Eve's guesses at the key positions
};

// One BB84 session: Alice sends n_signals random bit/basis qubits through the
// (optional eavesdropper and) flip channel, Bob measures in random bases,
// matched-basis rounds are sifted, a public sample estimates the QBER, and
// the finite-key bound fixes the extractable key length. Aborts when the
// observed QBER exceeds tolerable_qber.
Bb84Outcome run_bb84(const Bb84Config& cfg, Rng& rng);

}  // namespace mdiqd
