#include "greenwave/theta.hpp"

#include <cmath>
#include <stdexcept>

#include "greenwave/params.hpp"

namespace greenwave {

namespace {

// Direct sums for eta >= 1; terms fall below 2^-1075 within ~9 terms.
double theta3_direct(double eta) {
    double s = 1.0;
    for (int n = 1;; ++n) {
        const double term = 2.0 * std::exp(-constants::pi * n * n * eta);
        s += term;
        if (term < s * 1e-18) break;
    }
    return s;
}

double theta3_deriv_direct(double eta) {
    double s = 0.0;
    for (int n = 1;; ++n) {
        const double n2 = double(n) * n;
        const double term = 2.0 * constants::pi * n2 * std::exp(-constants::pi * n2 * eta);
        s += term;
        if (term < (s + 1e-300) * 1e-18) break;
    }
    return -s;
}

}  // namespace

double jacobi_theta3(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("jacobi_theta3: eta must be > 0");
    if (eta >= 1.0) return theta3_direct(eta);
    return theta3_direct(1.0 / eta) / std::sqrt(eta);
}

double jacobi_theta3_deriv(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("jacobi_theta3_deriv: eta must be > 0");
    if (eta >= 1.0) return theta3_deriv_direct(eta);
    // theta3(eta) = eta^{-1/2} theta3(1/eta)
    // theta3'(eta) = -1/2 eta^{-3/2} theta3(1/eta) - eta^{-5/2} theta3'(1/eta)
    const double inv = 1.0 / eta;
    return -0.5 * std::pow(eta, -1.5) * theta3_direct(inv) -
           std::pow(eta, -2.5) * theta3_deriv_direct(inv);
}

}  // namespace greenwave
