#include "greenwave/time_signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace greenwave {

TimeSignal::TimeSignal(std::function<double(double)> v, std::function<double(double)> d1,
                       std::function<double(double)> d2)
    : v_(std::move(v)), d1_(std::move(d1)), d2_(std::move(d2)), zero_(false) {}

TimeSignal TimeSignal::zero() { return TimeSignal(); }

namespace {

struct Spline {
    std::vector<double> t, y, m;  // m = second derivatives at knots

    int segment(double x) const {
        const auto it = std::upper_bound(t.begin(), t.end(), x);
        int i = static_cast<int>(it - t.begin()) - 1;
        return std::clamp(i, 0, static_cast<int>(t.size()) - 2);
    }
    double value(double x) const {
        const int i = segment(x);
        const double h = t[i + 1] - t[i], A = (t[i + 1] - x) / h, B = (x - t[i]) / h;
        return A * y[i] + B * y[i + 1] +
               ((A * A * A - A) * m[i] + (B * B * B - B) * m[i + 1]) * h * h / 6.0;
    }
    double deriv(double x) const {
        const int i = segment(x);
        const double h = t[i + 1] - t[i], A = (t[i + 1] - x) / h, B = (x - t[i]) / h;
        return (y[i + 1] - y[i]) / h +
               ((1.0 - 3.0 * A * A) * m[i] + (3.0 * B * B - 1.0) * m[i + 1]) * h / 6.0;
    }
    double deriv2(double x) const {
        const int i = segment(x);
        const double h = t[i + 1] - t[i], A = (t[i + 1] - x) / h, B = (x - t[i]) / h;
        return A * m[i] + B * m[i + 1];
    }
};

}  // namespace

TimeSignal TimeSignal::from_samples(std::vector<double> t, std::vector<double> y) {
    const int n = static_cast<int>(t.size());
    if (n < 3 || y.size() != t.size())
        throw std::invalid_argument("TimeSignal::from_samples: need >= 3 samples");
    for (int i = 1; i < n; ++i)
        if (!(t[i] > t[i - 1]))
            throw std::invalid_argument("TimeSignal::from_samples: times must increase");

    // natural spline: tridiagonal solve for knot second derivatives
    std::vector<double> m(n, 0.0), c(n, 0.0), d(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
        const double mu = h0 / (h0 + h1);
        const double rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0) / (h0 + h1);
        const double p = mu * c[i - 1] + 2.0;
        c[i] = (1.0 - mu) / p;
        d[i] = (rhs - mu * d[i - 1]) / p;
    }
    for (int i = n - 2; i >= 1; --i) m[i] = d[i] - c[i] * m[i + 1];

    auto sp = std::make_shared<Spline>(Spline{std::move(t), std::move(y), std::move(m)});
    return TimeSignal([sp](double x) { return sp->value(x); },
                      [sp](double x) { return sp->deriv(x); },
                      [sp](double x) { return sp->deriv2(x); });
}

}  // namespace greenwave
