// bath.hpp - Ohmic spectral rate with KMS symmetry and the fourteen
// time-dependent coefficients x1..x10, y1..y4 of the dissipator

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qb/schedule.hpp"

namespace qb {

struct BathSpec {
    double eta_g2{1e-4};                            // dimensionless coupling product
    double beta{1.0 / 2.6};                         // inverse temperature
    double omega_c{8.0 * std::numbers::pi_v<double>};  // high-frequency cutoff
    bool cross_coupling{true};  // false zeroes the x-z cross rates
};

inline void validate(const BathSpec& bath) {
    if (!(bath.eta_g2 >= 0.0) || !std::isfinite(bath.eta_g2))
        throw std::invalid_argument("eta_g2 must be nonnegative and finite");
    if (!(bath.beta > 0.0) || !std::isfinite(bath.beta))
        throw std::invalid_argument("beta must be positive and finite");
    if (!(bath.omega_c > 0.0) || !std::isfinite(bath.omega_c))
        throw std::invalid_argument("omega_c must be positive and finite");
}

// gamma(omega) = 2 pi eta_g2 omega exp(-|omega|/omega_c) / (1 - exp(-beta omega)).
// The omega -> 0 singularity is removable; for |beta omega| < 1e-8 the
// first-order series 1/beta (1 + beta omega / 2) is exact to double precision.
inline double spectral_rate(const BathSpec& bath, double omega) {
    const double u = bath.beta * omega;
    const double pre = 2.0 * std::numbers::pi_v<double> * bath.eta_g2 *
                       std::exp(-std::abs(omega) / bath.omega_c);
    if (std::abs(u) < 1e-8)
        return pre / bath.beta * (1.0 + 0.5 * u);
    return pre * omega / (1.0 - std::exp(-u));
}

inline double bath_correlation_time(const BathSpec& bath) {
    return bath.beta / (2.0 * std::numbers::pi_v<double>);
}

// |gamma(-w) - e^{-beta w} gamma(w)| / gamma(|w|); zero-coupling baths have
// no rates to compare, so the residual is defined as 0 there.
inline double kms_residual(const BathSpec& bath, double omega) {
    if (omega == 0.0)
        throw std::domain_error("KMS residual is undefined at omega = 0");
    const double denom = spectral_rate(bath, std::abs(omega));
    if (denom == 0.0) return 0.0;
    const double lhs = spectral_rate(bath, -omega);
    const double rhs = std::exp(-bath.beta * omega) * spectral_rate(bath, omega);
    return std::abs(lhs - rhs) / denom;
}

// Markov/weak-coupling sanity checks; advisory only.  The spec stores the
// product eta*g^2, so g^2 is read off with eta at its unit value.
inline std::vector<std::string> weak_coupling_warnings(const BathSpec& bath,
                                                       const DriveSchedule& sched) {
    std::vector<std::string> out;
    const double tau_b = bath_correlation_time(bath);
    const double g2 = bath.eta_g2;
    const double dmin = gap_minimum(sched).delta_min;
    if (g2 * tau_b > 0.1 * dmin)
        out.push_back("weak-coupling condition g^2 tau_B << delta_min violated");
    if (std::sqrt(g2) * tau_b > 0.1)
        out.push_back("Markov condition g tau_B << 1 violated");
    if (bath.omega_c * bath.beta < 5.0)
        out.push_back("cutoff condition omega_c >> 1/beta violated");
    return out;
}

// x[1..10], y[1..4]; index 0 is unused padding so the code reads like the
// formulas.  x1..x8 sit at Bohr frequency +-delta, x9/x10 at +-2 delta,
// y1..y4 at 0.  The cross rates x3..x6, y3, y4 carry signed factors (A-B)
// and (A^2-B^2); they vanish when cross_coupling is off.
struct RateSet {
    std::array<double, 11> x{};
    std::array<double, 5> y{};
    double s{0.0};
    double delta{0.0};
};

inline RateSet rate_set(const BathSpec& bath, const DriveSchedule& sched, double s) {
    validate(bath);
    const Eigensystem sys = eigensystem(sched, s);
    const Amplitudes amp = amplitudes(sched, s);
    const double d = sys.delta;
    const double d2 = d * d;
    const double d3 = d2 * d;
    const double d4 = d2 * d2;
    const double A = amp.a;
    const double B = amp.b;
    const double r2 = std::sqrt(2.0);

    const double g_d = spectral_rate(bath, d);
    const double g_md = spectral_rate(bath, -d);
    const double g_2d = spectral_rate(bath, 2.0 * d);
    const double g_m2d = spectral_rate(bath, -2.0 * d);
    const double g_0 = spectral_rate(bath, 0.0);
    const double cross = bath.cross_coupling ? 1.0 : 0.0;

    RateSet r;
    r.s = s;
    r.delta = d;
    r.x[1] = (A - B) * (A - B) * g_d / (4.0 * d2);
    r.x[2] = (A - B) * (A - B) * g_md / (4.0 * d2);
    r.x[3] = A * B * (A - B) * g_d * cross / (r2 * d3);
    r.x[4] = A * B * (A - B) * g_md * cross / (r2 * d3);
    r.x[5] = r.x[3];
    r.x[6] = r.x[4];
    r.x[7] = 2.0 * A * A * B * B * g_d / d4;
    r.x[8] = 2.0 * A * A * B * B * g_md / d4;
    r.x[9] = (A * A - B * B) * (A * A - B * B) * g_2d / (4.0 * d4);
    r.x[10] = (A * A - B * B) * (A * A - B * B) * g_m2d / (4.0 * d4);
    r.y[1] = (A + B) * (A + B) * g_0 / (2.0 * d2);
    r.y[2] = (A * A - B * B) * (A * A - B * B) * g_0 / (4.0 * d4);
    r.y[3] = (A + B) * (A * A - B * B) * g_0 * cross / (2.0 * r2 * d3);
    r.y[4] = r.y[3];
    return r;
}

inline AdiabaticBounds adiabatic_bounds(const DriveSchedule& sched, const BathSpec& bath) {
    return adiabatic_bounds(sched, bath.beta);
}

}  // namespace qb
