#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "mdiqd/qubit.hpp"
#include "mdiqd/rng.hpp"

namespace mdiqd {

// Posterior over the four (C_A, C_B) bit pairs, indexed 2*c_a + c_b. Weights
// are exact integer counts from enumerating preparations against the Bell
// probabilities (all of which are 0 or 1/2), so entropies of the uniform
// supports come out exact in double precision.
struct BitPairPosterior {
    std::array<unsigned, 4> weight{};
    unsigned total = 0;

    double probability(std::size_t pair) const;
    double entropy_bits() const;
    std::uint8_t support_mask() const;
};

// Exact leakage of the dialogue announcements, under uniform message bits
// and a matched basis (which the protocol guarantees). Indexing follows the
// (Phi+, Phi-, Psi+, Psi-) order.
struct LeakageReport {
    std::array<BitPairPosterior, 4> posterior;
    std::array<double, 4> announcement_probability{};
    std::array<double, 4> entropy_bits{};
    std::array<double, 4> leak_bits{};  // 2 - entropy
    bool kept_only = false;
    double expected_leak_bits = 0.0;
};

// Brute-force enumeration of all (basis, C_A, C_B) preparations against the
// Bell projection probabilities. kept_only restricts the average to the
// {Phi-, Psi+} rounds the protocol actually uses (the per-announcement
// entries are unconditional either way).
LeakageReport mdiqd_announcement_entropy(bool kept_only);

// Posterior carried by the restricted analyzer's inconclusive announcement
// (the merged Phi+/Phi- event). Not uniform: its leak is 1 - h(1/4) bits.
BitPairPosterior restricted_inconclusive_posterior();

// ---------------------------------------------------------------------------
// Baseline two-way protocol (entangled-pair ping-pong with Pauli encoding),
// used to quantify the leakage the dialogue scheme removes.

// Encoding: I -> 00, sigma_x -> 01, i sigma_y -> 10, sigma_z -> 11.
enum class PauliOp : std::uint8_t { I, SigmaX, ISigmaY, SigmaZ };

inline constexpr std::array<PauliOp, 4> kPauliOps = {
    PauliOp::I, PauliOp::SigmaX, PauliOp::ISigmaY, PauliOp::SigmaZ};

std::uint8_t pauli_bits(PauliOp op);

// Announced Bell outcome after Alice then Bob apply their operators to the
// traveling half of a |psi+> pair. Deterministic: the composite operator is
// again a Pauli, which maps |psi+> to a definite Bell state (global phase
// does not matter).
BellOutcome nguyen_announcement(PauliOp alice_op, PauliOp bob_op);

struct NguyenReport {
    // Candidate (bob_bits, alice_bits) pairs per conclusive announcement;
    // exactly four each, partitioning the 16 operator pairs.
    std::array<std::vector<std::pair<std::uint8_t, std::uint8_t>>, 4> candidates;
    std::array<double, 4> announcement_frequency{};  // from the simulated rounds
    std::size_t rounds = 0;
    double posterior_entropy_bits = 0.0;  // entropy over the candidate set
    double leak_bits = 0.0;               // 4 - posterior entropy
};

// Simulates `rounds` message-mode rounds with uniform operator choices and
// reports the exact per-announcement posterior (2 bits of the 4 communicated
// leak on every round).
NguyenReport nguyen_simulate_and_leak(std::size_t rounds, Rng& rng);

// ---------------------------------------------------------------------------
// Eavesdropper bounds and empirical estimates.

struct EveBoundReport {
    double mutual_information_bound = 0.0;  // 2 h(q' + nu)
    double eve_uncertainty = 0.0;           // max(1 - 2 h(q'), 0)
    bool uncertainty_clamped = false;       // the raw expression went negative
};

// Maximum information an adversary can have gained given an error rate q'
// and statistical slack nu. Throws when q' + nu leaves [0,1].
EveBoundReport eve_information_bound(double q_prime, double nu);

// Plug-in mutual information (bits) between two equal-length bit strings.
// Empty input gives 0.
double empirical_mutual_information(const Bits& x, const Bits& y);

}  // namespace mdiqd
