#include "mdiqd/bb84.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdiqd {

namespace {
constexpr std::uint64_t kEstimationForkTag = 0xb84;
}

void Bb84Config::validate() const {
    if (n_signals < 4) throw std::invalid_argument("Bb84Config: n_signals must be >= 4");
    if (!(p_flip >= 0.0 && p_flip <= 0.5)) throw std::invalid_argument("Bb84Config: p_flip outside [0, 1/2]");
    if (!(sample_fraction > 0.0 && sample_fraction < 1.0)) throw std::invalid_argument("Bb84Config: sample_fraction outside (0,1)");
    if (!(tolerable_qber >= 0.0 && tolerable_qber <= 1.0)) throw std::invalid_argument("Bb84Config: tolerable_qber outside [0,1]");
    if (!(source_quality > 0.0 && source_quality <= 1.0)) throw std::invalid_argument("Bb84Config: source_quality outside (0,1]");
    if (!(eps_qkd > 0.0 && eps_qkd <= 1.0)) throw std::invalid_argument("Bb84Config: eps_qkd outside (0,1]");
    if (!(eps_q > 0.0 && eps_q <= 1.0)) throw std::invalid_argument("Bb84Config: eps_q outside (0,1]");
    if (!(f_ec >= 0.0)) throw std::invalid_argument("Bb84Config: f_ec must be >= 0");
}

Bb84Outcome run_bb84(const Bb84Config& cfg, Rng& rng) {
    cfg.validate();
    const bool eve = cfg.eve == EveStrategy::InterceptResend;

    Bb84Outcome out;
    out.sifted_alice.reserve(cfg.n_signals / 2 + 8);
    out.sifted_bob.reserve(cfg.n_signals / 2 + 8);

    for (std::size_t i = 0; i < cfg.n_signals; ++i) {
        const int a_bit = rng.bit();
        const PrepBasis a_basis = basis_from_key_bit(rng.bit());
        QubitState q = prepare(a_bit, a_basis);
        PrepBasis transit_basis = a_basis;

        int eve_bit = 0;
        if (eve) {
            // Intercept-resend: measure in a random basis and forward the
            // corresponding eigenstate.
            const PrepBasis e_basis = basis_from_key_bit(rng.bit());
            eve_bit = measure_in_basis(q, e_basis, rng);
            q = prepare(eve_bit, e_basis);
            transit_basis = e_basis;
        }

        q = apply_flip_noise(q, transit_basis, cfg.p_flip, rng);

        const PrepBasis b_basis = basis_from_key_bit(rng.bit());
        const int b_bit = measure_in_basis(q, b_basis, rng);

        if (b_basis == a_basis) {
            out.sifted_alice.push_back(static_cast<std::uint8_t>(a_bit));
            out.sifted_bob.push_back(static_cast<std::uint8_t>(b_bit));
            if (eve) out.eve_sifted_guesses.push_back(static_cast<std::uint8_t>(eve_bit));
        }
    }

    const std::size_t sifted = out.sifted_alice.size();
    const std::size_t k =
        static_cast<std::size_t>(static_cast<double>(sifted) * cfg.sample_fraction);
    if (sifted < 2 || k < 1 || k >= sifted) {
        throw std::runtime_error("run_bb84: too few sifted bits to sample; increase n_signals");
    }

    // Both parties select the estimation sample with the same public coins.
    Rng public_rng = rng.fork(kEstimationForkTag);
    std::vector<std::size_t> order(sifted);
    for (std::size_t i = 0; i < sifted; ++i) order[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + public_rng.below(sifted - i);
        std::swap(order[i], order[j]);
    }
    out.sampled.assign(sifted, 0);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < k; ++i) {
        out.sampled[order[i]] = 1;
        mismatches += out.sifted_alice[order[i]] != out.sifted_bob[order[i]];
    }

    out.sample_bits = k;
    out.raw_bits = sifted - k;
    out.observed_qber = static_cast<double>(mismatches) / static_cast<double>(k);
    out.mu = statistical_deviation_mu(out.raw_bits, k, cfg.eps_q);

    if (out.observed_qber > cfg.tolerable_qber) {
        out.aborted = true;
        out.secure_length = 0;
        return out;
    }

    FiniteKeyParams fk;
    fk.n = out.raw_bits;
    fk.k = k;
    fk.q = cfg.source_quality;
    fk.qber = cfg.tolerable_qber;
    fk.eps_q = cfg.eps_q;
    fk.eps_cor = cfg.eps_qkd / 2.0;
    fk.eps_bar = cfg.eps_qkd / 2.0;
    fk.leak_ec = default_leak_ec(fk.n, cfg.tolerable_qber, cfg.f_ec);
    // A non-positive bound yields an empty key but is not the estimation
    // abort: the protocol aborts only on the QBER threshold above.
    const KeyLengthResult kl = secure_key_length_detail(fk);
    out.secure_length = kl.l;

    out.key_alice.reserve(out.secure_length);
    out.key_bob.reserve(out.secure_length);
    for (std::size_t i = 0; i < sifted && out.key_alice.size() < out.secure_length; ++i) {
        if (out.sampled[i]) continue;
        out.key_alice.push_back(out.sifted_alice[i]);
        out.key_bob.push_back(out.sifted_bob[i]);
        if (eve) out.eve_key_guesses.push_back(out.eve_sifted_guesses[i]);
    }
    return out;
}

}  // namespace mdiqd
