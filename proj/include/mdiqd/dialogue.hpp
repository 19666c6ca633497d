#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mdiqd/qubit.hpp"
#include "mdiqd/rng.hpp"
#include "mdiqd/utp.hpp"

namespace mdiqd {

struct SecurityParams {
    std::size_t m = 0;          // dialogue rounds
    double gamma = 0.1;         // fraction of kept rounds revealed for estimation
    double q_threshold = 0.11;  // abort when the observed QBER exceeds this
    double eps_qsdc = 1e-10;    // total security parameter

    // Split equally between correctness and secrecy.
    double eps_cor() const { return eps_qsdc / 2.0; }
    double eps_sec() const { return eps_qsdc / 2.0; }

    void validate() const;  // throws std::invalid_argument
};

struct RoundRecord {
    std::uint32_t index = 0;
    std::uint8_t a_bit = 0;        // Alice's message bit
    std::uint8_t a_prime_bit = 0;  // Bob's message bit
    std::uint8_t b_bit = 0;        // shared basis bit
    BellOutcome announcement = BellOutcome::Inconclusive;
    bool kept = false;
    std::uint8_t g_a = 0;  // Alice's guess of C_B; meaningful iff kept
    std::uint8_t g_b = 0;  // Bob's guess of C_A; meaningful iff kept
    bool revealed = false; // publicly compared during error estimation
};

struct SessionTranscript {
    std::vector<RoundRecord> rounds;
    SecurityParams params;
    bool restricted_analyzer = false;

    std::size_t kept_count = 0;
    std::size_t revealed_count = 0;
    double observed_qber = 0.0;
    double nu = 0.0;            // Serfling deviation at eps_qsdc
    bool nu_degenerate = false; // nu > 1: m too small for the bound to say anything
    bool aborted = false;

    // Message bits on kept, unrevealed rounds, as decoded by the receiver.
    Bits delivered_alice_to_bob;  // Bob's guesses of Alice's bits
    Bits delivered_bob_to_alice;  // Alice's guesses of Bob's bits
};

// Decoding map for the announcement, given a party's own prepared bit:
//   Z basis: Phi+- => counterpart sent the same bit, Psi+- => the flipped bit
//   X basis: Phi+/Psi+ => same bit, Phi-/Psi- => flipped bit
// Throws std::invalid_argument on an inconclusive announcement.
int decode(int prepared_bit, PrepBasis basis, BellOutcome announcement);

// nu = sqrt( (gamma*m + 2) / (gamma^2 (1-gamma) m^2) * ln(1/eps) ).
double serfling_deviation_nu(std::size_t m, double gamma, double eps);

// Runs the dialogue phase for m rounds: both parties encode (a_j, b_j) and
// (a'_j, b_j) per the shared key b, the qubits traverse the flip channel,
// the node announces, conclusive kept-set rounds are sifted
// ({Phi-, Psi+}, or {Psi+} with the restricted analyzer), floor(gamma*kept)
// rounds are publicly revealed to estimate the QBER, and the session aborts
// when the estimate exceeds q_threshold.
//
// b must come from a prior key-establishment phase (or be injected); all
// three bitstrings must have length m.
SessionTranscript run_dialogue(const Bits& b, const Bits& a, const Bits& a_prime,
                               const SecurityParams& params,
                               const UtpStrategy& utp, double p_flip, Rng& rng,
                               std::vector<UtpSideRecord>* side_records = nullptr);

struct CorrectnessReport {
    double empirical_error = 0.0;  // guess-error rate on kept, unrevealed rounds
    double bound = 0.0;            // observed_qber + nu
    bool satisfied = false;
};

// Checks the correctness guarantee Pr(G != C) <= Q' + nu against the ground
// truth held in the transcript. Throws std::invalid_argument on an aborted
// transcript.
CorrectnessReport correctness_bound_check(const SessionTranscript& t);

}  // namespace mdiqd
