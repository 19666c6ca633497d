#include "mdiqd/leakage.hpp"

#include <cmath>
#include <stdexcept>

#include "mdiqd/finite_key.hpp"

namespace mdiqd {

double BitPairPosterior::probability(std::size_t pair) const {
    if (total == 0) return 0.0;
    return static_cast<double>(weight[pair]) / static_cast<double>(total);
}

double BitPairPosterior::entropy_bits() const {
    double h = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double p = probability(i);
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

std::uint8_t BitPairPosterior::support_mask() const {
    std::uint8_t mask = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (weight[i] > 0) mask |= static_cast<std::uint8_t>(1u << i);
    }
    return mask;
}

namespace {

// Integer weight (in units of 1/2) of announcement `o` for the preparation
// pair (c_a, c_b) in `basis`. Every Bell probability of a same-basis
// preparation is exactly 0 or 1/2, so the rounding is exact.
unsigned half_weight(PrepBasis basis, int c_a, int c_b, std::size_t outcome_idx) {
    const BellDistribution d =
        bell_probabilities(prepare(c_a, basis), prepare(c_b, basis));
    return d.p[outcome_idx] > 0.25 ? 1u : 0u;
}

}  // namespace

LeakageReport mdiqd_announcement_entropy(bool kept_only) {
    LeakageReport rep;
    rep.kept_only = kept_only;

    // Joint weights over (announcement, bit pair): uniform prior over the 8
    // preparations (basis x C_A x C_B), each contributing 0 or 1/2 per
    // announcement. Common normalization 1/16 cancels in the posteriors.
    unsigned grand_total = 0;
    for (std::size_t o = 0; o < 4; ++o) {
        BitPairPosterior& post = rep.posterior[o];
        for (PrepBasis basis : {PrepBasis::Z, PrepBasis::X}) {
            for (int c_a = 0; c_a < 2; ++c_a) {
                for (int c_b = 0; c_b < 2; ++c_b) {
                    const unsigned w = half_weight(basis, c_a, c_b, o);
                    post.weight[2 * c_a + c_b] += w;
                    post.total += w;
                }
            }
        }
        grand_total += post.total;
    }

    for (std::size_t o = 0; o < 4; ++o) {
        rep.announcement_probability[o] =
            static_cast<double>(rep.posterior[o].total) /
            static_cast<double>(grand_total);
        rep.entropy_bits[o] = rep.posterior[o].entropy_bits();
        rep.leak_bits[o] = 2.0 - rep.entropy_bits[o];
    }

    const bool kept[4] = {false, true, true, false};  // {Phi-, Psi+}
    double weight_sum = 0.0;
    double leak_sum = 0.0;
    for (std::size_t o = 0; o < 4; ++o) {
        if (kept_only && !kept[o]) continue;
        weight_sum += rep.announcement_probability[o];
        leak_sum += rep.announcement_probability[o] * rep.leak_bits[o];
    }
    rep.expected_leak_bits = weight_sum > 0.0 ? leak_sum / weight_sum : 0.0;
    return rep;
}

BitPairPosterior restricted_inconclusive_posterior() {
    BitPairPosterior post;
    for (PrepBasis basis : {PrepBasis::Z, PrepBasis::X}) {
        for (int c_a = 0; c_a < 2; ++c_a) {
            for (int c_b = 0; c_b < 2; ++c_b) {
                const unsigned w = half_weight(basis, c_a, c_b, 0) +
                                   half_weight(basis, c_a, c_b, 1);
                post.weight[2 * c_a + c_b] += w;
                post.total += w;
            }
        }
    }
    return post;
}

std::uint8_t pauli_bits(PauliOp op) {
    return static_cast<std::uint8_t>(op);
}

namespace {

using Mat2 = std::array<std::array<complex_t, 2>, 2>;

Mat2 pauli_matrix(PauliOp op) {
    switch (op) {
        case PauliOp::I: return {{{1.0, 0.0}, {0.0, 1.0}}};
        case PauliOp::SigmaX: return {{{0.0, 1.0}, {1.0, 0.0}}};
        case PauliOp::ISigmaY: return {{{0.0, 1.0}, {-1.0, 0.0}}};
        case PauliOp::SigmaZ: return {{{1.0, 0.0}, {0.0, -1.0}}};
    }
    throw std::logic_error("pauli_matrix: unknown operator");
}

// Two-qubit amplitudes in (c00, c01, c10, c11) order; the operator acts on
// the second (traveling) qubit.
std::array<complex_t, 4> apply_to_traveling(const Mat2& u,
                                            const std::array<complex_t, 4>& c) {
    return {
        u[0][0] * c[0] + u[0][1] * c[1],
        u[1][0] * c[0] + u[1][1] * c[1],
        u[0][0] * c[2] + u[0][1] * c[3],
        u[1][0] * c[2] + u[1][1] * c[3],
    };
}

}  // namespace

BellOutcome nguyen_announcement(PauliOp alice_op, PauliOp bob_op) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    std::array<complex_t, 4> c = {0.0, inv_sqrt2, inv_sqrt2, 0.0};  // |psi+>
    c = apply_to_traveling(pauli_matrix(alice_op), c);
    c = apply_to_traveling(pauli_matrix(bob_op), c);

    const double p[4] = {
        0.5 * std::norm(c[0] + c[3]),
        0.5 * std::norm(c[0] - c[3]),
        0.5 * std::norm(c[1] + c[2]),
        0.5 * std::norm(c[1] - c[2]),
    };
    for (std::size_t i = 0; i < 4; ++i) {
        if (p[i] > 0.5) return kConclusiveOutcomes[i];
    }
    throw std::logic_error("nguyen_announcement: Pauli encoding did not give a point mass");
}

NguyenReport nguyen_simulate_and_leak(std::size_t rounds, Rng& rng) {
    if (rounds < 1) throw std::invalid_argument("nguyen_simulate_and_leak: rounds must be >= 1");

    NguyenReport rep;
    rep.rounds = rounds;
    for (PauliOp bob : kPauliOps) {
        for (PauliOp alice : kPauliOps) {
            const BellOutcome o = nguyen_announcement(alice, bob);
            rep.candidates[static_cast<std::size_t>(o)].push_back(
                {pauli_bits(bob), pauli_bits(alice)});
        }
    }
    for (const auto& list : rep.candidates) {
        if (list.size() != 4) {
            throw std::logic_error("nguyen_simulate_and_leak: announcement classes must have size 4");
        }
    }

    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < rounds; ++i) {
        const PauliOp alice = kPauliOps[rng.below(4)];
        const PauliOp bob = kPauliOps[rng.below(4)];
        counts[static_cast<std::size_t>(nguyen_announcement(alice, bob))]++;
    }
    for (std::size_t o = 0; o < 4; ++o) {
        rep.announcement_frequency[o] =
            static_cast<double>(counts[o]) / static_cast<double>(rounds);
    }

    // Posterior given any announcement: uniform over its four candidates out
    // of the 16 equally likely operator pairs.
    rep.posterior_entropy_bits = std::log2(4.0);
    rep.leak_bits = 4.0 - rep.posterior_entropy_bits;
    return rep;
}

EveBoundReport eve_information_bound(double q_prime, double nu) {
    if (!(q_prime >= 0.0 && q_prime <= 1.0) || !(nu >= 0.0) ||
        q_prime + nu > 1.0) {
        throw std::invalid_argument("eve_information_bound: q_prime + nu outside [0,1]");
    }
    EveBoundReport rep;
    rep.mutual_information_bound =
        2.0 * truncated_binary_entropy(q_prime + nu);
    const double raw = 1.0 - 2.0 * truncated_binary_entropy(q_prime);
    rep.uncertainty_clamped = raw < 0.0;
    rep.eve_uncertainty = rep.uncertainty_clamped ? 0.0 : raw;
    return rep;
}

double empirical_mutual_information(const Bits& x, const Bits& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("empirical_mutual_information: length mismatch");
    }
    if (x.empty()) return 0.0;

    double joint[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t i = 0; i < x.size(); ++i) {
        joint[x[i] & 1][y[i] & 1] += 1.0;
    }
    const double n = static_cast<double>(x.size());
    const double px[2] = {(joint[0][0] + joint[0][1]) / n,
                          (joint[1][0] + joint[1][1]) / n};
    const double py[2] = {(joint[0][0] + joint[1][0]) / n,
                          (joint[0][1] + joint[1][1]) / n};
    double mi = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double pij = joint[i][j] / n;
            if (pij > 0.0) mi += pij * std::log2(pij / (px[i] * py[j]));
        }
    }
    return mi < 0.0 ? 0.0 : mi;
}

}  // namespace mdiqd
