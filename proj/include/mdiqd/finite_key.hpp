#pragma once

#include <cstddef>

namespace mdiqd {

// Binary entropy, truncated: -(1-x)log2(1-x) - x log2(x) for x <= 1/2,
// exactly 1 for x > 1/2. h(0) = 0. Throws outside [0,1].
double truncated_binary_entropy(double x);

// mu = sqrt( (n+k)/(nk) * (k+1)/k * ln(1/eps_q) ), the statistical deviation
// added to the tolerable QBER in the finite-key bound. eps_q in (0,1];
// eps_q = 1 is admitted so the zero-deviation limit is expressible exactly.
double statistical_deviation_mu(std::size_t n, std::size_t k, double eps_q);

// Inputs of the finite-key secure-length bound.
struct FiniteKeyParams {
    std::size_t n = 0;      // raw key bits
    std::size_t k = 0;      // bits consumed by error estimation
    double q = 1.0;         // source quality, (0,1]
    double qber = 0.0;      // tolerable QBER Q, [0,1]
    double eps_q = 1e-10;   // failure probability of the deviation bound
    double eps_cor = 1e-10; // correctness parameter, (0,2]
    double eps_bar = 1e-10; // smoothing parameter, (0,1/2]
    double leak_ec = 0.0;   // bits disclosed by error correction, >= 0

    // The closed upper ends (eps_q = 1, eps_cor = 2, eps_bar = 1/2) make the
    // corresponding penalty terms exactly zero; useful for degenerate checks.
    void validate() const;  // throws std::invalid_argument
};

struct KeyLengthResult {
    double unfloored = 0.0;        // bound value before flooring
    std::size_t l = 0;             // floor, clamped at 0
    bool abort_recommended = false;// true iff the bound went non-positive
    double mu = 0.0;               // deviation used for h(Q + mu)
};

// l = floor( n(q - h(Q + mu)) - leak_ec - log2(2/eps_cor) - 2 log2(1/(2 eps_bar)) ),
// clamped at zero.
KeyLengthResult secure_key_length_detail(const FiniteKeyParams& p);
std::size_t secure_key_length(const FiniteKeyParams& p);

// Standard error-correction leakage model leak_ec = f_ec * n * h(qber).
double default_leak_ec(std::size_t n, double qber, double f_ec = 1.1);

}  // namespace mdiqd
