#pragma once

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "greenwave/mode_kernel.hpp"
#include "greenwave/params.hpp"

namespace greenwave {

/// Uniform sample locations.  Periodic: 2*nx points on [0, 2pi), nx a power
/// of two.  Interval: nx+1 points on [0, pi]; odd/even extension maps an
/// interval grid onto the periodic grid of the same nx.
struct SpaceGrid {
    enum class Kind { Periodic, Interval };
    Kind kind = Kind::Periodic;
    int nx = 0;

    static SpaceGrid periodic(int nx);
    static SpaceGrid interval(int nx);

    int num_points() const { return kind == Kind::Periodic ? 2 * nx : nx + 1; }
    double point(int j) const { return constants::pi * j / nx; }
    std::vector<double> points() const;
    double dx() const { return constants::pi / nx; }

    bool operator==(const SpaceGrid&) const = default;
};

enum class Basis { ComplexExp, Sine, Cosine };

/// Truncated coefficient vector on one of the three bases.
///  - ComplexExp (PBC): bins c[0..N] with c_{-n} = conj(c_n) for real fields.
///  - Sine (DBC): r[k] = b_{k+1}, modes 1..N; field vanishes at x = 0, pi.
///  - Cosine (NBC): r[k] = a_k, modes 0..N; spectral derivative vanishes there.
struct SpectralField {
    Basis basis = Basis::ComplexExp;
    int trunc = 0;
    std::vector<std::complex<double>> c;  // ComplexExp
    std::vector<double> r;                // Sine / Cosine

    int num_modes() const {
        return basis == Basis::ComplexExp ? trunc + 1
                                          : static_cast<int>(r.size());
    }
    /// Mode index of storage slot k.
    int mode_of(int k) const { return basis == Basis::Sine ? k + 1 : k; }
};

struct ParityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ParityCheck { Enforce, Relax };

Basis basis_for_samples(const SpaceGrid& g, Basis requested);

/// Forward transform.  trunc <= nx - 1.  For Sine/Cosine the samples live on
/// the interval grid and are odd/even-extended internally; Enforce trips
/// ParityViolation when the endpoint conditions of the extension fail.
SpectralField analyze(const std::vector<double>& samples, const SpaceGrid& grid,
                      Basis basis, int trunc, ParityCheck parity = ParityCheck::Enforce);

/// Inverse of analyze on band-limited data; real output.
std::vector<double> synthesize(const SpectralField& f, const SpaceGrid& grid);

/// d/dx in coefficient space: ComplexExp multiplies mode n by i n;
/// Sine <-> Cosine swap with factor n.
SpectralField spectral_derivative(const SpectralField& f);

/// Multiplies coefficient n by H_nu(t) (order 0) or H'_nu(t) (order 1),
/// nu = freq_scale * n.  Realizes w^g and w^g_t.
SpectralField green_convolve(const SpectralField& g, double t, const EquationParams& params,
                             int order, double freq_scale = 1.0);

/// Solution of the source-free problem from spectral initial data:
///   u_n(t)  = [(u1)_n + 2 h_n (u0)_n] H_n(t) + (u0)_n H'_n(t)
///   u_nt(t) = (u1)_n H'_n(t) - nu^2 (u0)_n H_n(t)
/// The u_t line is the closed-form identity obtained by integration by
/// parts, so no time differencing ever touches the evolved state.
std::pair<SpectralField, SpectralField> homogeneous_evolution(const SpectralField& u0,
                                                              const SpectralField& u1, double t,
                                                              const EquationParams& params,
                                                              double freq_scale = 1.0);

/// Odd/even extension of interval samples to the full periodic grid.
/// Used by the interval-basis transforms; greenwave::extend in reduction.hpp
/// is the checked public form.
std::vector<double> extend_samples(const std::vector<double>& samples, bool odd);

}  // namespace greenwave
