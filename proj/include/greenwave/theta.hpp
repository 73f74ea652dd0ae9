#pragma once

namespace greenwave {

/// Jacobi theta3 on the imaginary axis: theta3(eta) = sum_{n in Z} e^{-pi n^2 eta},
/// eta > 0.  For eta < 1 the modular identity theta3(eta) = theta3(1/eta)/sqrt(eta)
/// is applied first so the series always converges in a handful of terms.
double jacobi_theta3(double eta);

/// d theta3 / d eta (negative for eta > 0).
double jacobi_theta3_deriv(double eta);

}  // namespace greenwave
