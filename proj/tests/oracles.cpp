#include "oracles.hpp"

#include <cmath>

namespace oracle {

std::array<double, 4> bell_projection_probs(std::complex<double> a0,
                                            std::complex<double> a1,
                                            std::complex<double> b0,
                                            std::complex<double> b1) {
    using cd = std::complex<double>;
    const double s = 1.0 / std::sqrt(2.0);
    // Bell vectors over the (|00>, |01>, |10>, |11>) amplitudes.
    const cd bell[4][4] = {
        {s, 0.0, 0.0, s},
        {s, 0.0, 0.0, -s},
        {0.0, s, s, 0.0},
        {0.0, s, -s, 0.0},
    };
    const cd product[4] = {a0 * b0, a0 * b1, a1 * b0, a1 * b1};
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) {
        cd inner = 0.0;
        for (int j = 0; j < 4; ++j) inner += std::conj(bell[i][j]) * product[j];
        out[i] = std::norm(inner);
    }
    return out;
}

double binary_entropy_direct(double x) {
    if (x > 0.5) return 1.0;
    double h = 0.0;
    if (x > 0.0) h -= x * std::log2(x);
    if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
    return h;
}

double mu_direct(double n, double k, double eps_q) {
    return std::sqrt((n + k) / (n * k) * (k + 1.0) / k * std::log(1.0 / eps_q));
}

double nu_direct(double m, double gamma, double eps) {
    return std::sqrt((gamma * m + 2.0) / (gamma * gamma * (1.0 - gamma) * m * m) *
                     std::log(1.0 / eps));
}

}  // namespace oracle
