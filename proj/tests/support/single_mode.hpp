#pragma once

// Closed-form solution of one damped mode,
//     y'' + a y' + nu^2 (eps y' + y) = 0,  y(0) = alpha, y'(0) = beta,
// through the characteristic roots in complex long double arithmetic.
// Shares no code with the library kernel evaluation.

#include <complex>

namespace testsupport {

struct SingleMode {
    long double a, eps, nu;

    std::complex<long double> r_plus() const {
        const std::complex<long double> disc =
            std::sqrt(std::complex<long double>((a + eps * nu * nu) * (a + eps * nu * nu) -
                                                4.0L * nu * nu));
        return (-(a + eps * nu * nu) + disc) / 2.0L;
    }
    std::complex<long double> r_minus() const {
        const std::complex<long double> disc =
            std::sqrt(std::complex<long double>((a + eps * nu * nu) * (a + eps * nu * nu) -
                                                4.0L * nu * nu));
        return (-(a + eps * nu * nu) - disc) / 2.0L;
    }

    double value(double alpha, double beta, double t, int order = 0) const {
        const std::complex<long double> rp = r_plus(), rm = r_minus();
        const std::complex<long double> A =
            (std::complex<long double>(beta) - rm * std::complex<long double>(alpha)) / (rp - rm);
        const std::complex<long double> B = std::complex<long double>(alpha) - A;
        std::complex<long double> v = A * std::exp(rp * std::complex<long double>(t)) *
                                          std::pow(rp, order) +
                                      B * std::exp(rm * std::complex<long double>(t)) *
                                          std::pow(rm, order);
        return static_cast<double>(v.real());
    }
};

}  // namespace testsupport
