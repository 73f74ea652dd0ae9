#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "greenwave/mode_kernel.hpp"
#include "support/single_mode.hpp"

using namespace greenwave;

TEST_CASE("kernel construction classifies the three regimes") {
    const ModeKernel crit = make_mode_kernel({1.0, 1.0, 1.0}, 1);
    CHECK(crit.h == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(crit.omega_sq == doctest::Approx(0.0));
    CHECK(crit.regime == Regime::Critical);

    const ModeKernel osc = make_mode_kernel({0.0, 0.1, 1.0}, 1);
    CHECK(osc.h == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(osc.omega_sq == doctest::Approx(-0.9975).epsilon(1e-14));
    CHECK(osc.regime == Regime::Oscillatory);

    const ModeKernel over = make_mode_kernel({0.0, 1.0, 1.0}, 3);
    CHECK(over.h == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(over.omega_sq == doctest::Approx(11.25).epsilon(1e-15));
    CHECK(over.regime == Regime::Overdamped);

    CHECK_THROWS_AS(make_mode_kernel({0.0, 0.0, 1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_mode_kernel({0.0, -1.0, 1.0}, 1), std::invalid_argument);
}

TEST_CASE("critical kernel is t e^{-t} for a = eps = n = 1") {
    const ModeKernel k = make_mode_kernel({1.0, 1.0, 1.0}, 1);
    for (double t : {0.0, 0.1, 0.5, 2.0, 10.0}) {
        CHECK(eval_H(k, t, 0) == doctest::Approx(t * std::exp(-t)).epsilon(1e-13));
        CHECK(eval_H(k, t, 1) == doctest::Approx((1.0 - t) * std::exp(-t)).epsilon(1e-13));
    }
    CHECK(eval_H(k, 0.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("n = 0, a = 0 kernel is H(t) = t") {
    const ModeKernel k = make_mode_kernel({0.0, 1.0, 1.0}, 0);
    for (double t : {0.0, 0.3, 2.0, 25.0}) CHECK(eval_H(k, t, 0) == doctest::Approx(t));
    // and for a > 0 it is (1 - e^{-a t})/a
    const ModeKernel ka = make_mode_kernel({0.7, 1.0, 1.0}, 0);
    for (double t : {0.1, 1.0, 6.0})
        CHECK(eval_H(ka, t, 0) ==
              doctest::Approx((1.0 - std::exp(-0.7 * t)) / 0.7).epsilon(1e-14));
}

TEST_CASE("oscillatory closed form at (n=1, a=0, eps=0.1, t=2)") {
    const ModeKernel k = make_mode_kernel({0.0, 0.1, 1.0}, 1);
    const long double W = std::sqrt(0.9975L);
    const long double expect = std::exp(-0.1L) * std::sin(2.0L * W) / W;
    CHECK(eval_H(k, 2.0, 0) == doctest::Approx(static_cast<double>(expect)).epsilon(1e-14));
}

TEST_CASE("argument validation") {
    const ModeKernel k = make_mode_kernel({0.5, 1.0, 1.0}, 2);
    CHECK_THROWS_AS(eval_H(k, -0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_H(k, 1.0, 3), std::invalid_argument);
}

TEST_CASE("initial conditions across the mode range") {
    for (double a : {0.0, 0.5, 2.0})
        for (double eps : {0.1, 1.0, 5.0})
            for (int n = 0; n <= 64; ++n) {
                const ModeKernel k = make_mode_kernel({a, eps, 1.0}, n);
                CHECK(eval_H(k, 0.0, 0) == 0.0);
                CHECK(std::abs(eval_H(k, 0.0, 1) - 1.0) <= 1e-13);
            }
}

TEST_CASE("closed-form ODE residual vanishes to 1e-10 relative") {
    for (double a : {0.0, 0.5, 2.0})
        for (double eps : {0.1, 1.0, 5.0})
            for (int n : {0, 1, 2, 3, 5, 10, 50})
                for (double t : {0.0, 1e-3, 0.1, 1.0, 5.0}) {
                    const ModeKernel k = make_mode_kernel({a, eps, 1.0}, n);
                    const HDerivs d = eval_H_all(k, t);
                    const double n2 = double(n) * n;
                    const double res = d.Hdd + a * d.Hd + n2 * (eps * d.Hd + d.H);
                    const double scale = std::max(
                        {std::abs(d.Hdd), std::abs(a * d.Hd), n2 * std::abs(eps * d.Hd + d.H),
                         1e-30});
                    CHECK(std::abs(res) / scale <= 1e-10);
                }
}

TEST_CASE("H_{-n} = H_n bitwise") {
    for (int n : {1, 3, 17}) {
        const ModeKernel kp = make_mode_kernel({0.3, 0.7, 1.0}, n);
        const ModeKernel km = make_mode_kernel({0.3, 0.7, 1.0}, -n);
        for (double t : {0.0, 0.4, 2.7}) {
            const HDerivs dp = eval_H_all(kp, t), dm = eval_H_all(km, t);
            CHECK(dp.H == dm.H);
            CHECK(dp.Hd == dm.Hd);
            CHECK(dp.Hdd == dm.Hdd);
        }
    }
}

TEST_CASE("regime continuity across omega_sq = 0") {
    // kernels straddling the critical point by 1e-12 agree with the critical
    // formula t e^{-h t} to 1e-10 relative
    for (double s : {1e-12, -1e-12}) {
        ModeKernel k;
        k.nu = 1.0;
        k.h = 1.0;
        k.omega_sq = s;
        k.regime = s > 0 ? Regime::Overdamped : Regime::Oscillatory;
        k.a = 2.0 * k.h - k.nu * k.nu;  // eps = 1
        k.eps = 1.0;
        for (double t : {0.5, 1.0, 5.0}) {
            const double crit = t * std::exp(-k.h * t);
            CHECK(std::abs(eval_H(k, t, 0) - crit) <= 1e-10 * std::abs(crit));
        }
    }
}

TEST_CASE("eval_eps_combos matches naive composition at benign modes") {
    for (double a : {0.0, 1.0})
        for (double eps : {0.5, 2.0})
            for (int n : {0, 1, 2, 4})
                for (double t : {0.1, 1.0, 3.0}) {
                    const ModeKernel k = make_mode_kernel({a, eps, 1.0}, n);
                    const HDerivs d = eval_H_all(k, t);
                    const EpsCombos ec = eval_eps_combos(k, t);
                    const double c1 = eps * d.Hd + d.H;
                    const double c2 = eps * d.Hdd + d.Hd;
                    CHECK(ec.eps_Hd_plus_H ==
                          doctest::Approx(c1).epsilon(1e-8).scale(std::abs(eps * d.Hd) + 1));
                    CHECK(ec.eps_Hdd_plus_Hd ==
                          doctest::Approx(c2).epsilon(1e-8).scale(std::abs(eps * d.Hdd) + 1));
                }
}

TEST_CASE("eval_eps_combos stays accurate deep in the overdamped regime") {
    // composing eps H'' + H' from eval_H output loses every digit here;
    // the dedicated form must match a long-double direct evaluation
    const double a = 0.0, eps = 5.0;
    const int n = 200;
    const double t = 3.0335156e-3;
    const ModeKernel k = make_mode_kernel({a, eps, 1.0}, n);
    const EpsCombos ec = eval_eps_combos(k, t);

    const long double h = 0.5L * (a + eps * (long double)(n) * n);
    const long double w = std::sqrt(h * h - (long double)(n)*n);
    const long double A = (1.0L + eps * (w - h)) * std::exp((w - h) * t);
    const long double B = (eps * (w + h) - 1.0L) * std::exp(-(w + h) * t);
    const long double c1 = (A + B) / (2.0L * w);
    const long double c2 = ((1.0L + eps * (w - h)) * (w - h) * std::exp((w - h) * t) -
                            (eps * (w + h) - 1.0L) * (w + h) * std::exp(-(w + h) * t)) /
                           (2.0L * w);
    CHECK(ec.eps_Hd_plus_H == doctest::Approx((double)c1).epsilon(1e-6));
    CHECK(ec.eps_Hdd_plus_Hd == doctest::Approx((double)c2).epsilon(1e-6));
}

TEST_CASE("kernel matches the characteristic-root closed form") {
    // independent route: complex characteristic roots in long double
    for (double a : {0.0, 0.4, 1.7})
        for (double eps : {0.2, 1.0, 4.0})
            for (int n : {1, 2, 7, 23}) {
                const testsupport::SingleMode sm{a, eps, double(n)};
                const ModeKernel k = make_mode_kernel({a, eps, 1.0}, n);
                for (double t : {0.05, 0.9, 3.1}) {
                    const double ref = sm.value(0.0, 1.0, t);  // H has (0,1) data
                    CHECK(eval_H(k, t, 0) ==
                          doctest::Approx(ref).epsilon(1e-11).scale(1.0));
                }
            }
}

TEST_CASE("bound envelope constants") {
    CHECK(make_bound_envelope({0.0, 1.0, 1.0}).n_bar == 3);
    CHECK(make_bound_envelope({0.0, 0.1, 1.0}).n_bar == 21);
    CHECK(make_bound_envelope({0.0, 5.0, 1.0}).n_bar == 1);
    const BoundEnvelope e = make_bound_envelope({0.0, 1.0, 1.0});
    CHECK(e.M == doctest::Approx(2.0 + 2.0 * std::log(3.0) +
                                 2.0 * constants::pi * constants::pi / 3.0));
    CHECK(e.kappa == doctest::Approx(3.0 + 4.0 + 2.0 * constants::pi * constants::pi / 9.0));

    // past n_bar: h > 0, n^2/h <= 2/eps, n^2/h^2 in (0,1)
    for (double eps : {0.1, 1.0, 5.0}) {
        const BoundEnvelope env = make_bound_envelope({0.0, eps, 1.0});
        for (int n = env.n_bar; n <= env.n_bar + 40; ++n) {
            const ModeKernel k = make_mode_kernel({0.0, eps, 1.0}, n);
            CHECK(k.h > 0.0);
            CHECK(double(n) * n / k.h <= 2.0 / eps + 1e-12);
            const double sigma = double(n) * n / (k.h * k.h);
            CHECK(sigma > 0.0);
            CHECK(sigma < 1.0);
        }
    }
}

TEST_CASE("bound_oracles spot checks") {
    {  // |H'| <= 1 at (a=0, eps=1, n=5, t=0.3)
        const ModeKernel k = make_mode_kernel({0.0, 1.0, 1.0}, 5);
        const LemmaBounds b = bound_oracles({0.0, 1.0, 1.0}, 5, 0.3);
        CHECK(std::abs(eval_H(k, 0.3, 1)) <= b.Hd_unit);
    }
    {  // |H| <= t at (a=2, eps=0.5, n=1, t=0.01)
        const ModeKernel k = make_mode_kernel({2.0, 0.5, 1.0}, 1);
        const LemmaBounds b = bound_oracles({2.0, 0.5, 1.0}, 1, 0.01);
        CHECK(b.H_linear == 0.01);
        CHECK(std::abs(eval_H(k, 0.01, 0)) <= 0.01);
    }
    {  // n = 1 below n_bar: 1/|n| branch
        const LemmaBounds b = bound_oracles({0.0, 1.0, 1.0}, 1, 0.5);
        REQUIRE(b.H_abs.has_value());
        CHECK(*b.H_abs == doctest::Approx(1.0));
        CHECK_FALSE(b.dH_l[0].has_value());  // lemma tail bounds start at n_bar
    }
    {  // n = 0: only the universal bounds apply
        const LemmaBounds b = bound_oracles({0.5, 1.0, 1.0}, 0, 1.0);
        CHECK_FALSE(b.H_abs.has_value());
        CHECK_FALSE(b.dH_l[0].has_value());
        CHECK_FALSE(b.eps_Hd_plus_H.has_value());
        CHECK(b.Hd_unit == 1.0);
        CHECK(b.one_minus_Hd == doctest::Approx(0.5));  // (2h + 0) t = a t
    }
}

TEST_CASE("squared-L2 mode-sum bounds") {
    const EquationParams p{0.0, 1.0, 1.0};
    const L2Bounds b = l2_norm_bounds(p, 0.5);
    const double pi2 = constants::pi * constants::pi;
    CHECK(b.theta_x == doctest::Approx(2.0 + 4.0 + 4.0 * pi2 / 3.0));

    // truncated-sum oracle at N = 1000, t = 0.5
    double sum = 0.0;
    for (int n = 1; n <= 1000; ++n) {
        const double H = eval_H(make_mode_kernel(p, n), 0.5, 0);
        sum += 2.0 * (n * H) * (n * H);
    }
    CHECK(sum <= b.theta_x);

    // theta_t bound value at t = 1 against an in-test series for theta3
    const L2Bounds b1 = l2_norm_bounds(p, 1.0);
    double th3 = 1.0;
    for (int n = 1; n < 60; ++n) th3 += 2.0 * std::exp(-constants::pi * n * n * 2.0 / constants::pi);
    const double kappa = 3.0 + 4.0 + 2.0 * pi2 / 9.0;
    CHECK(b1.theta_t == doctest::Approx(kappa + 8.0 * std::exp(4.0) * th3).epsilon(1e-12));
    CHECK(std::isfinite(b1.theta_t));
    CHECK_THROWS_AS(l2_norm_bounds(p, 0.0), std::invalid_argument);
}

TEST_CASE("theta kernel basics") {
    const EquationParams p{0.5, 5.0, 1.0};  // all modes overdamped: H_n >= 0
    CHECK(theta_kernel(p, 0.4, 0.0, 8) == 0.0);

    const int nm = truncation_floor(p, 0.7, 1e-12);
    const double t0 = theta_kernel(p, 0.0, 0.7, nm);
    for (double x : {0.3, 1.1, 2.4, constants::pi}) {
        const double v = theta_kernel(p, x, 0.7, nm);
        CHECK(std::abs(v) <= t0 * (1.0 + 1e-12));                       // center max here
        CHECK(v == doctest::Approx(theta_kernel(p, -x, 0.7, nm)));      // even
        CHECK(v == doctest::Approx(theta_kernel(p, x + constants::two_pi, 0.7, nm)));
    }
    CHECK(constants::two_pi * t0 <= sup_envelope_N(p, 0.7));

    CHECK_THROWS_AS(theta_kernel(p, 0.0, 1e-5, 4), std::invalid_argument);
    CHECK_THROWS_AS(theta_kernel(p, 0.0, -1.0, nm), std::invalid_argument);
}

TEST_CASE("truncation floor honors its tail bound") {
    for (double eps : {0.1, 1.0, 5.0}) {
        const EquationParams p{0.0, eps, 1.0};
        for (double t : {0.5, 2.0, 20.0}) {
            const int N = truncation_floor(p, t, 1e-12);
            CHECK(N >= make_bound_envelope(p).n_bar);
            CHECK(theta_tail_bound(p, t, N) <= 1e-12);
            CHECK(truncation_floor(p, t, 1e-6) <= N);
        }
    }
}
