#include "mdiqd/utp.hpp"

#include <stdexcept>

namespace mdiqd {

UtpStrategy UtpStrategy::biased_lie(BellOutcome target, double p_lie) {
    UtpStrategy s{Kind::BiasedLie, target, p_lie};
    s.validate();
    return s;
}

void UtpStrategy::validate() const {
    if (!(p_lie >= 0.0 && p_lie <= 1.0)) {
        throw std::invalid_argument("UtpStrategy: p_lie outside [0,1]");
    }
    if (kind == Kind::BiasedLie && lie_target == BellOutcome::Inconclusive) {
        throw std::invalid_argument("UtpStrategy: lie target must be a conclusive outcome");
    }
}

const char* to_string(UtpStrategy::Kind k) {
    switch (k) {
        case UtpStrategy::Kind::Honest: return "honest";
        case UtpStrategy::Kind::HonestRestricted: return "honest-restricted";
        case UtpStrategy::Kind::RandomAnnounce: return "random";
        case UtpStrategy::Kind::BiasedLie: return "biased-lie";
        case UtpStrategy::Kind::MeasureAndRecord: return "measure-record";
    }
    return "?";
}

std::optional<UtpStrategy::Kind> utp_kind_from_string(std::string_view s) {
    if (s == "honest") return UtpStrategy::Kind::Honest;
    if (s == "honest-restricted") return UtpStrategy::Kind::HonestRestricted;
    if (s == "random") return UtpStrategy::Kind::RandomAnnounce;
    if (s == "biased-lie") return UtpStrategy::Kind::BiasedLie;
    if (s == "measure-record") return UtpStrategy::Kind::MeasureAndRecord;
    return std::nullopt;
}

std::uint8_t announcement_candidate_mask(BellOutcome o) {
    switch (o) {
        case BellOutcome::PhiPlus: return 0b1001;   // {00, 11}
        case BellOutcome::PsiMinus: return 0b0110;  // {01, 10}
        default: return 0b1111;
    }
}

BellOutcome utp_announce(const UtpStrategy& strategy, const QubitState& alice,
                         const QubitState& bob, Rng& rng,
                         std::vector<UtpSideRecord>* side_records,
                         std::size_t round) {
    strategy.validate();
    BellOutcome announced;
    switch (strategy.kind) {
        case UtpStrategy::Kind::RandomAnnounce:
            announced = kConclusiveOutcomes[rng.below(4)];
            break;
        case UtpStrategy::Kind::BiasedLie: {
            const BellOutcome truth = sample_bell(bell_probabilities(alice, bob), rng);
            announced = rng.bernoulli(strategy.p_lie) ? strategy.lie_target : truth;
            break;
        }
        case UtpStrategy::Kind::HonestRestricted: {
            const BellOutcome truth = sample_bell(bell_probabilities(alice, bob), rng);
            // The linear-optics analyzer signals Psi+ and Psi- through
            // distinct detector coincidences; both Phi outcomes give the
            // same (no-coincidence) pattern.
            announced = (truth == BellOutcome::PsiPlus || truth == BellOutcome::PsiMinus)
                            ? truth
                            : BellOutcome::Inconclusive;
            break;
        }
        case UtpStrategy::Kind::Honest:
        case UtpStrategy::Kind::MeasureAndRecord:
            announced = sample_bell(bell_probabilities(alice, bob), rng);
            break;
        default:
            throw std::logic_error("utp_announce: unknown strategy");
    }

    if (strategy.kind == UtpStrategy::Kind::MeasureAndRecord && side_records) {
        side_records->push_back(
            {round, announced, announcement_candidate_mask(announced)});
    }
    return announced;
}

}  // namespace mdiqd
