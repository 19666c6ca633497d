#include "mdiqd/dialogue.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdiqd {

namespace {
constexpr std::uint64_t kEstimationForkTag = 0xd1a;

bool in_kept_set(BellOutcome o, bool restricted) {
    if (restricted) return o == BellOutcome::PsiPlus;
    return o == BellOutcome::PhiMinus || o == BellOutcome::PsiPlus;
}
}  // namespace

void SecurityParams::validate() const {
    if (m < 2) throw std::invalid_argument("SecurityParams: m must be >= 2");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("SecurityParams: gamma outside (0,1)");
    if (!(q_threshold >= 0.0 && q_threshold <= 1.0)) throw std::invalid_argument("SecurityParams: q_threshold outside [0,1]");
    if (!(eps_qsdc > 0.0 && eps_qsdc <= 1.0)) throw std::invalid_argument("SecurityParams: eps_qsdc outside (0,1]");
    if (gamma * static_cast<double>(m) / 2.0 < 1.0) {
        throw std::invalid_argument("SecurityParams: gamma*m/2 must be >= 1 to estimate anything");
    }
}

int decode(int prepared_bit, PrepBasis basis, BellOutcome announcement) {
    bool same;
    switch (announcement) {
        case BellOutcome::PhiPlus:
            same = true;
            break;
        case BellOutcome::PhiMinus:
            same = basis == PrepBasis::Z;
            break;
        case BellOutcome::PsiPlus:
            same = basis == PrepBasis::X;
            break;
        case BellOutcome::PsiMinus:
            same = false;
            break;
        default:
            throw std::invalid_argument("decode: inconclusive announcement");
    }
    return same ? prepared_bit : 1 - prepared_bit;
}

double serfling_deviation_nu(std::size_t m, double gamma, double eps) {
    if (m < 2) throw std::invalid_argument("serfling_deviation_nu: m must be >= 2");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("serfling_deviation_nu: gamma outside (0,1)");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("serfling_deviation_nu: eps outside (0,1)");
    const double md = static_cast<double>(m);
    return std::sqrt((gamma * md + 2.0) / (gamma * gamma * (1.0 - gamma) * md * md) *
                     std::log(1.0 / eps));
}

SessionTranscript run_dialogue(const Bits& b, const Bits& a, const Bits& a_prime,
                               const SecurityParams& params,
                               const UtpStrategy& utp, double p_flip, Rng& rng,
                               std::vector<UtpSideRecord>* side_records) {
    params.validate();
    utp.validate();
    if (a.size() != params.m || a_prime.size() != params.m || b.size() != params.m) {
        throw std::invalid_argument("run_dialogue: a, a_prime and b must all have length m");
    }

    SessionTranscript t;
    t.params = params;
    t.restricted_analyzer = utp.restricted_analyzer();
    t.rounds.resize(params.m);

    std::vector<std::size_t> kept_indices;
    kept_indices.reserve(params.m / 2 + 8);

    for (std::size_t j = 0; j < params.m; ++j) {
        RoundRecord& r = t.rounds[j];
        r.index = static_cast<std::uint32_t>(j);
        r.a_bit = a[j];
        r.a_prime_bit = a_prime[j];
        r.b_bit = b[j];

        const PrepBasis basis = basis_from_key_bit(b[j]);
        QubitState qa = prepare(a[j], basis);
        QubitState qb = prepare(a_prime[j], basis);
        qa = apply_flip_noise(qa, basis, p_flip, rng);
        qb = apply_flip_noise(qb, basis, p_flip, rng);

        r.announcement = utp_announce(utp, qa, qb, rng, side_records, j);
        r.kept = in_kept_set(r.announcement, t.restricted_analyzer);
        if (r.kept) {
            r.g_a = static_cast<std::uint8_t>(decode(a[j], basis, r.announcement));
            r.g_b = static_cast<std::uint8_t>(decode(a_prime[j], basis, r.announcement));
            kept_indices.push_back(j);
        }
    }

    t.kept_count = kept_indices.size();
    if (t.kept_count == 0) {
        throw std::runtime_error("run_dialogue: no kept rounds; nothing to estimate or deliver");
    }

    // The estimation count follows the actually-kept set, floor(gamma*kept),
    // selected with public coins both parties reproduce.
    const std::size_t n_est = static_cast<std::size_t>(
        std::floor(params.gamma * static_cast<double>(t.kept_count)));
    if (n_est < 1) {
        throw std::runtime_error("run_dialogue: estimation sample is empty; increase m or gamma");
    }
    Rng public_rng = rng.fork(kEstimationForkTag);
    for (std::size_t i = 0; i < n_est; ++i) {
        const std::size_t j = i + public_rng.below(t.kept_count - i);
        std::swap(kept_indices[i], kept_indices[j]);
    }

    std::size_t errors = 0;
    for (std::size_t i = 0; i < n_est; ++i) {
        RoundRecord& r = t.rounds[kept_indices[i]];
        r.revealed = true;
        // Both parties reveal their guesses; each checks the counterpart's
        // guess against the bit they actually sent.
        errors += r.g_a != r.a_prime_bit;
        errors += r.g_b != r.a_bit;
    }
    t.revealed_count = n_est;
    t.observed_qber = static_cast<double>(errors) / static_cast<double>(2 * n_est);
    t.nu = serfling_deviation_nu(params.m, params.gamma, params.eps_qsdc);
    t.nu_degenerate = t.nu > 1.0;
    t.aborted = t.observed_qber > params.q_threshold;

    if (!t.aborted) {
        t.delivered_alice_to_bob.reserve(t.kept_count - n_est);
        t.delivered_bob_to_alice.reserve(t.kept_count - n_est);
        for (const RoundRecord& r : t.rounds) {
            if (r.kept && !r.revealed) {
                t.delivered_alice_to_bob.push_back(r.g_b);
                t.delivered_bob_to_alice.push_back(r.g_a);
            }
        }
    }
    return t;
}

CorrectnessReport correctness_bound_check(const SessionTranscript& t) {
    if (t.aborted) {
        throw std::invalid_argument("correctness_bound_check: transcript is aborted");
    }
    std::size_t comparisons = 0;
    std::size_t errors = 0;
    for (const RoundRecord& r : t.rounds) {
        if (!r.kept || r.revealed) continue;
        comparisons += 2;
        errors += r.g_a != r.a_prime_bit;
        errors += r.g_b != r.a_bit;
    }
    CorrectnessReport rep;
    rep.empirical_error =
        comparisons == 0 ? 0.0
                         : static_cast<double>(errors) / static_cast<double>(comparisons);
    rep.bound = t.observed_qber + t.nu;
    rep.satisfied = rep.empirical_error <= rep.bound;
    return rep;
}

}  // namespace mdiqd
