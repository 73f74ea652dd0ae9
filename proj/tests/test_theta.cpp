#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "greenwave/params.hpp"
#include "greenwave/theta.hpp"

using namespace greenwave;

namespace {

// brute-force reference, no modular shortcut
double theta3_brute(double eta) {
    double s = 1.0;
    for (int n = 1; n <= 4000; ++n) {
        const double term = 2.0 * std::exp(-constants::pi * n * n * eta);
        s += term;
        if (term < 1e-30) break;
    }
    return s;
}

}  // namespace

TEST_CASE("theta3 limits and frozen value") {
    CHECK(jacobi_theta3(50.0) == doctest::Approx(1.0).epsilon(1e-15));
    // 1 + 2 e^{-pi} + 2 e^{-4 pi} + ... summed directly
    CHECK(jacobi_theta3(1.0) == doctest::Approx(1.0864348112133081).epsilon(1e-15));
    CHECK_THROWS_AS(jacobi_theta3(0.0), std::invalid_argument);
    CHECK_THROWS_AS(jacobi_theta3(-2.0), std::invalid_argument);
}

TEST_CASE("modular identity theta3(eta) sqrt(eta) = theta3(1/eta)") {
    for (double eta : {0.1, 0.5, 2.0}) {
        const double lhs = theta3_brute(eta) * std::sqrt(eta);
        const double rhs = theta3_brute(1.0 / eta);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        // and the library value agrees with brute force on both sides
        CHECK(jacobi_theta3(eta) == doctest::Approx(theta3_brute(eta)).epsilon(1e-14));
    }
}

TEST_CASE("theta3 derivative matches central differences") {
    for (double eta : {0.3, 0.8, 1.5, 4.0}) {
        const double h = 1e-6 * eta;
        const double fd = (jacobi_theta3(eta + h) - jacobi_theta3(eta - h)) / (2.0 * h);
        CHECK(jacobi_theta3_deriv(eta) == doctest::Approx(fd).epsilon(1e-7));
        CHECK(jacobi_theta3_deriv(eta) < 0.0);  // strictly decreasing
    }
}
