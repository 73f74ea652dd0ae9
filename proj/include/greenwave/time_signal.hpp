#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace greenwave {

/// A twice-differentiable signal of time: boundary data h0, hpi, k0, kpi.
/// Carries its first two derivatives explicitly because the homogenization
/// source terms need them exactly.
class TimeSignal {
  public:
    TimeSignal() = default;
    TimeSignal(std::function<double(double)> v, std::function<double(double)> d1,
               std::function<double(double)> d2);

    static TimeSignal zero();
    /// Natural cubic spline through (t_i, y_i); the spline's second
    /// derivative supplies the required d2 with O(dt^2) accuracy.
    static TimeSignal from_samples(std::vector<double> t, std::vector<double> y);

    double value(double t) const { return v_(t); }
    double deriv(double t) const { return d1_(t); }
    double deriv2(double t) const { return d2_(t); }
    bool is_zero() const { return zero_; }

  private:
    std::function<double(double)> v_ = [](double) { return 0.0; };
    std::function<double(double)> d1_ = [](double) { return 0.0; };
    std::function<double(double)> d2_ = [](double) { return 0.0; };
    bool zero_ = true;
};

}  // namespace greenwave
