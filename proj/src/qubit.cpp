#include "mdiqd/qubit.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiqd {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

const char* to_string(BellOutcome o) {
    switch (o) {
        case BellOutcome::PhiPlus: return "phi+";
        case BellOutcome::PhiMinus: return "phi-";
        case BellOutcome::PsiPlus: return "psi+";
        case BellOutcome::PsiMinus: return "psi-";
        case BellOutcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::optional<BellOutcome> bell_outcome_from_string(std::string_view s) {
    if (s == "phi+") return BellOutcome::PhiPlus;
    if (s == "phi-") return BellOutcome::PhiMinus;
    if (s == "psi+") return BellOutcome::PsiPlus;
    if (s == "psi-") return BellOutcome::PsiMinus;
    if (s == "inconclusive") return BellOutcome::Inconclusive;
    return std::nullopt;
}

bool BellDistribution::is_valid(double tol) const {
    for (double v : p) {
        if (!(v >= -tol && v <= 1.0 + tol)) return false;
    }
    return std::abs(sum() - 1.0) <= tol;
}

QubitState prepare(int bit, PrepBasis basis) {
    if (basis == PrepBasis::Z) {
        return bit == 0 ? QubitState{1.0, 0.0} : QubitState{0.0, 1.0};
    }
    return bit == 0 ? QubitState{kInvSqrt2, kInvSqrt2}
                    : QubitState{kInvSqrt2, -kInvSqrt2};
}

BellDistribution bell_probabilities(const QubitState& a, const QubitState& b) {
    if (!a.is_normalized() || !b.is_normalized()) {
        throw std::invalid_argument("bell_probabilities: input not normalized");
    }
    // Product amplitudes c_xy = a_x * b_y. The Bell projections reduce to
    //   |<Phi+->|ab>|^2 = |c00 +- c11|^2 / 2
    //   |<Psi+->|ab>|^2 = |c01 +- c10|^2 / 2
    const complex_t c00 = a.amp0 * b.amp0;
    const complex_t c01 = a.amp0 * b.amp1;
    const complex_t c10 = a.amp1 * b.amp0;
    const complex_t c11 = a.amp1 * b.amp1;
    BellDistribution d;
    d.p[0] = 0.5 * std::norm(c00 + c11);
    d.p[1] = 0.5 * std::norm(c00 - c11);
    d.p[2] = 0.5 * std::norm(c01 + c10);
    d.p[3] = 0.5 * std::norm(c01 - c10);
    return d;
}

BellOutcome sample_bell(const BellDistribution& d, Rng& rng) {
    double u = rng.uniform01() * d.sum();
    for (std::size_t i = 0; i < 3; ++i) {
        u -= d.p[i];
        if (u < 0.0) return kConclusiveOutcomes[i];
    }
    return BellOutcome::PsiMinus;
}

int measure_in_basis(const QubitState& s, PrepBasis basis, Rng& rng) {
    double p0;
    if (basis == PrepBasis::Z) {
        p0 = std::norm(s.amp0);
    } else {
        // |<+|s>|^2
        p0 = 0.5 * std::norm(s.amp0 + s.amp1);
    }
    return rng.uniform01() < p0 ? 0 : 1;
}

QubitState apply_flip_noise(const QubitState& s, PrepBasis basis, double p_flip,
                            Rng& rng) {
    if (!(p_flip >= 0.0 && p_flip <= 0.5)) {
        throw std::invalid_argument("apply_flip_noise: p_flip outside [0, 1/2]");
    }
    if (!rng.bernoulli(p_flip)) return s;
    // Orthogonal partner within the state's own basis: sigma_x swaps the Z
    // eigenstates, sigma_z swaps |+> and |->.
    if (basis == PrepBasis::Z) return {s.amp1, s.amp0};
    return {s.amp0, -s.amp1};
}

}  // namespace mdiqd
