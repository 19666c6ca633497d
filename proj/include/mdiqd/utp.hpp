#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mdiqd/qubit.hpp"
#include "mdiqd/rng.hpp"

namespace mdiqd {

// Behavior of the untrusted measurement node. Honest variants announce the
// true Bell-measurement outcome; the others model an adversarial node.
struct UtpStrategy {
    enum class Kind : std::uint8_t {
        Honest,            // full Bell analyzer, truthful announcements
        HonestRestricted,  // linear-optics analyzer: Psi+- resolved, Phi+- inconclusive
        RandomAnnounce,    // ignores the states, announces uniformly at random
        BiasedLie,         // with probability p_lie announces lie_target
        MeasureAndRecord   // truthful, but keeps per-round side records
    };

    Kind kind = Kind::Honest;
    BellOutcome lie_target = BellOutcome::PhiPlus;
    double p_lie = 0.0;

    static UtpStrategy honest() { return {}; }
    static UtpStrategy honest_restricted() { return {Kind::HonestRestricted, {}, 0.0}; }
    static UtpStrategy random_announce() { return {Kind::RandomAnnounce, {}, 0.0}; }
    static UtpStrategy biased_lie(BellOutcome target, double p_lie);
    static UtpStrategy measure_and_record() { return {Kind::MeasureAndRecord, {}, 0.0}; }

    bool restricted_analyzer() const { return kind == Kind::HonestRestricted; }
    void validate() const;  // throws std::invalid_argument
};

const char* to_string(UtpStrategy::Kind k);
std::optional<UtpStrategy::Kind> utp_kind_from_string(std::string_view s);

// What a truthful-but-curious node can write down for one round: the
// announcement plus the set of (C_A, C_B) pairs consistent with it. The mask
// indexes {00, 01, 10, 11} by bit (1 << (2*c_a + c_b)).
struct UtpSideRecord {
    std::size_t round = 0;
    BellOutcome announced = BellOutcome::Inconclusive;
    std::uint8_t candidate_mask = 0;
};

// Candidate (C_A, C_B) pairs an observer learns from a bare announcement,
// with no basis knowledge: Phi+ -> {00,11}, Psi- -> {01,10}, Phi-/Psi+ ->
// all four, Inconclusive -> all four.
std::uint8_t announcement_candidate_mask(BellOutcome o);

// Produces the round's public announcement for the given strategy.
// side_records, when non-null, collects MeasureAndRecord output.
BellOutcome utp_announce(const UtpStrategy& strategy, const QubitState& alice,
                         const QubitState& bob, Rng& rng,
                         std::vector<UtpSideRecord>* side_records = nullptr,
                         std::size_t round = 0);

}  // namespace mdiqd
