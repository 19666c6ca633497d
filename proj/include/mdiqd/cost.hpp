#pragma once

#include <cstddef>
#include <cstdint>

#include "mdiqd/qubit.hpp"

namespace mdiqd {

// Cost question: run the dialogue T times with M-bit security against a
// quantum adversary, either generating the whole basis stream b over the
// quantum channel or distributing a short seed and expanding it with a
// stream cipher.
struct CostQuery {
    std::size_t security_bits = 128;  // M
    std::size_t dialogue_uses = 512;  // T, must be >= 1
    double rate = 0.117;              // finite-key generation rate r, (0,1]
    double qber = 0.01;               // reported alongside, not used in arithmetic

    void validate() const;  // throws std::invalid_argument
};

// Qubit and key-bit budgets for both paths. "naive" counts assume every raw
// bit survives (4 qubits per key bit: basis sifting and estimation each cost
// half); "finite" counts divide by the finite-key rate first.
struct CostReport {
    std::size_t direct_key_bits = 0;        // 4T: stream long enough that T rounds survive
    std::size_t direct_naive_qubits = 0;    // 4 x key bits
    std::size_t direct_finite_raw_bits = 0; // key bits / r
    std::size_t direct_finite_qubits = 0;   // 4 x raw bits
    std::size_t seed_bits = 0;              // 2M
    std::size_t seed_naive_qubits = 0;
    std::size_t seed_finite_raw_bits = 0;
    std::size_t seed_finite_qubits = 0;
};

CostReport cost_compare(const CostQuery& q);

// Deterministic expansion of a short shared seed into a long bitstream.
// Same seed gives the same stream; this stands in for the stream cipher in
// the cost model and makes no cryptographic claims.
Bits expand_keystream(const Bits& seed, std::size_t length);

}  // namespace mdiqd
