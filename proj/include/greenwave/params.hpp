#pragma once

#include <stdexcept>
#include <string>

namespace greenwave {

/// Coefficients of the operator  L = d_tt + a d_t - c^2 d_xx (eps d_t + 1).
///
/// a may have either sign on input; the solver pipeline reduces every
/// problem to a >= 0, c = 1 before touching the spectral engine.
struct EquationParams {
    double a = 0.0;    // damping [1/time]
    double eps = 1.0;  // third-order dissipation [time], > 0
    double c = 1.0;    // wave speed [space/time], > 0
};

inline void validate(const EquationParams& p) {
    if (!(p.eps > 0.0))
        throw std::invalid_argument("EquationParams: eps must be > 0, got " +
                                    std::to_string(p.eps));
    if (!(p.c > 0.0))
        throw std::invalid_argument("EquationParams: c must be > 0, got " +
                                    std::to_string(p.c));
}

namespace constants {
// zeta(2) and Gamma(3/4), compiled in so no runtime special-function
// dependency is needed.
inline constexpr double zeta2 = 1.6449340668482264;       // pi^2/6
inline constexpr double gamma_3_4 = 1.2254167024651777;   // Gamma(3/4)
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;
}  // namespace constants

}  // namespace greenwave
