#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mdiqd/rng.hpp"

namespace mdiqd {

using complex_t = std::complex<double>;

// 0/1 values, one per element.
using Bits = std::vector<std::uint8_t>;

// Preparation basis. Z = {|0>,|1>} and corresponds to key bit 0,
// X = {|+>,|->} and corresponds to key bit 1.
enum class PrepBasis : std::uint8_t { Z, X };

inline PrepBasis basis_from_key_bit(int b) {
    return b == 0 ? PrepBasis::Z : PrepBasis::X;
}

// The measurement node's public announcement. Inconclusive occurs only with
// the restricted (linear-optics) analyzer, which resolves Psi+ and Psi- but
// cannot separate Phi+ from Phi-.
enum class BellOutcome : std::uint8_t {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    Inconclusive
};

inline constexpr std::array<BellOutcome, 4> kConclusiveOutcomes = {
    BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus,
    BellOutcome::PsiMinus};

const char* to_string(BellOutcome o);
std::optional<BellOutcome> bell_outcome_from_string(std::string_view s);

// Pure single-qubit state amp0|0> + amp1|1>.
struct QubitState {
    complex_t amp0;
    complex_t amp1;

    double norm_sq() const { return std::norm(amp0) + std::norm(amp1); }
    bool is_normalized(double tol = 1e-12) const {
        return std::abs(norm_sq() - 1.0) <= tol;
    }
};

// Projection probabilities onto (Phi+, Phi-, Psi+, Psi-), in that fixed
// order everywhere in the library.
struct BellDistribution {
    std::array<double, 4> p{};

    double sum() const { return p[0] + p[1] + p[2] + p[3]; }
    bool is_valid(double tol = 1e-12) const;
};

// Encoding rule shared by both parties:
//   bit 0, basis Z -> |0>     bit 1, basis Z -> |1>
//   bit 0, basis X -> |+>     bit 1, basis X -> |->
QubitState prepare(int bit, PrepBasis basis);

// p_i = |<Bell_i| a (x) b>|^2 for the four Bell vectors. Throws
// std::invalid_argument if either input is not normalized.
BellDistribution bell_probabilities(const QubitState& a, const QubitState& b);

// Draws one conclusive outcome from d. Deterministic given the rng state.
BellOutcome sample_bell(const BellDistribution& d, Rng& rng);

// Born-rule measurement in the given basis; the state is consumed.
int measure_in_basis(const QubitState& s, PrepBasis basis, Rng& rng);

// Basis-preserving flip channel: with probability p_flip the qubit is
// replaced by the orthogonal state of its own preparation basis (sigma_x in
// Z, sigma_z in X), otherwise passed through unchanged. p_flip must lie in
// [0, 1/2].
//
// Conversion to observed error rates: on BB84 sifted bits the QBER equals
// p_flip directly; in the dialogue phase both qubits traverse the channel
// independently and a guess error occurs iff exactly one of them flips, so
// the kept-round error rate is 2*p_flip*(1-p_flip).
QubitState apply_flip_noise(const QubitState& s, PrepBasis basis, double p_flip,
                            Rng& rng);

}  // namespace mdiqd
