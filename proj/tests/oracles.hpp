#pragma once

// Independent reference implementations used only by tests. These stay
// deliberately naive (explicit vectors, textbook formulas) so they share no
// code path with the library they check.

#include <array>
#include <complex>

namespace oracle {

// |<Bell_i|ab>|^2 via explicit four-component inner products against the
// Bell vectors, in (Phi+, Phi-, Psi+, Psi-) order.
std::array<double, 4> bell_projection_probs(std::complex<double> a0,
                                            std::complex<double> a1,
                                            std::complex<double> b0,
                                            std::complex<double> b1);

// Truncated binary entropy, written straight off its definition.
double binary_entropy_direct(double x);

// Finite-key statistical deviation.
double mu_direct(double n, double k, double eps_q);

// Serfling deviation for the dialogue estimation phase.
double nu_direct(double m, double gamma, double eps);

}  // namespace oracle
