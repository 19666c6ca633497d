#include "mdiqd/finite_key.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiqd {

double truncated_binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("truncated_binary_entropy: x outside [0,1]");
    }
    if (x > 0.5) return 1.0;
    if (x == 0.0) return 0.0;
    return -(1.0 - x) * std::log2(1.0 - x) - x * std::log2(x);
}

double statistical_deviation_mu(std::size_t n, std::size_t k, double eps_q) {
    if (n < 1 || k < 1) {
        throw std::invalid_argument("statistical_deviation_mu: n and k must be >= 1");
    }
    if (!(eps_q > 0.0 && eps_q <= 1.0)) {
        throw std::invalid_argument("statistical_deviation_mu: eps_q outside (0,1]");
    }
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    return std::sqrt((nd + kd) / (nd * kd) * (kd + 1.0) / kd *
                     std::log(1.0 / eps_q));
}

void FiniteKeyParams::validate() const {
    if (n < 1 || k < 1) throw std::invalid_argument("FiniteKeyParams: n, k must be >= 1");
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("FiniteKeyParams: q outside (0,1]");
    if (!(qber >= 0.0 && qber <= 1.0)) throw std::invalid_argument("FiniteKeyParams: qber outside [0,1]");
    if (!(eps_q > 0.0 && eps_q <= 1.0)) throw std::invalid_argument("FiniteKeyParams: eps_q outside (0,1]");
    if (!(eps_cor > 0.0 && eps_cor <= 2.0)) throw std::invalid_argument("FiniteKeyParams: eps_cor outside (0,2]");
    if (!(eps_bar > 0.0 && eps_bar <= 0.5)) throw std::invalid_argument("FiniteKeyParams: eps_bar outside (0,1/2]");
    if (!(leak_ec >= 0.0)) throw std::invalid_argument("FiniteKeyParams: leak_ec must be >= 0");
}

KeyLengthResult secure_key_length_detail(const FiniteKeyParams& p) {
    p.validate();
    KeyLengthResult r;
    r.mu = statistical_deviation_mu(p.n, p.k, p.eps_q);
    const double penalized_qber = std::min(p.qber + r.mu, 1.0);
    const double value = static_cast<double>(p.n) *
                             (p.q - truncated_binary_entropy(penalized_qber)) -
                         p.leak_ec - std::log2(2.0 / p.eps_cor) -
                         2.0 * std::log2(1.0 / (2.0 * p.eps_bar));
    r.unfloored = value;
    if (value <= 0.0) {
        r.l = 0;
        r.abort_recommended = true;
    } else {
        r.l = static_cast<std::size_t>(std::floor(value));
    }
    return r;
}

std::size_t secure_key_length(const FiniteKeyParams& p) {
    return secure_key_length_detail(p).l;
}

double default_leak_ec(std::size_t n, double qber, double f_ec) {
    return f_ec * static_cast<double>(n) * truncated_binary_entropy(qber);
}

}  // namespace mdiqd
