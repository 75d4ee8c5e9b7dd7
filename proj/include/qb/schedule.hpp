// schedule.hpp - linear drive schedules, instantaneous eigensystem, gap
// minimum, nonadiabatic coupling, and adiabatic time bounds

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qb/types.hpp"

namespace qb {

// Charge ramps A up (A = omega_a*s, B = omega_b*(1-s)) so the dark state
// carries |lambda_1> at s=0 into |lambda_3> at s=1.  Reversed swaps the two
// ramps (A starts full on).
enum class Ordering { Charge, Reversed };

struct DriveSchedule {
    double omega_a{1.0};
    double omega_b{1.0};
    Ordering ordering{Ordering::Charge};
};

inline void validate(const DriveSchedule& sched) {
    if (!(sched.omega_a > 0.0) || !std::isfinite(sched.omega_a))
        throw std::invalid_argument("omega_a must be positive and finite");
    if (!(sched.omega_b > 0.0) || !std::isfinite(sched.omega_b))
        throw std::invalid_argument("omega_b must be positive and finite");
}

struct Amplitudes {
    double a;   // A(s)
    double b;   // B(s)
    double da;  // dA/ds
    double db;  // dB/ds
};

inline Amplitudes amplitudes(const DriveSchedule& sched, double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::domain_error("scaled time s must lie in [0, 1]");
    if (sched.ordering == Ordering::Charge)
        return {sched.omega_a * s, sched.omega_b * (1.0 - s),
                sched.omega_a, -sched.omega_b};
    return {sched.omega_a * (1.0 - s), sched.omega_b * s,
            -sched.omega_a, sched.omega_b};
}

// Eigenvalues (-delta, 0, +delta) and real eigenvector columns in the bare
// basis.  With a = A/delta, b = B/delta the columns are
//   v1 = (a, -1, b)/sqrt(2),  v2 = (-b, 0, a),  v3 = (a, 1, b)/sqrt(2).
// v2 is the dark state (no middle-level component).  These formulas are
// continuous in s and keep the |lambda_3> component of the dark state
// nonnegative, which pins the sign of the nonadiabatic coupling.
struct Eigensystem {
    double delta;  // instantaneous gap
    Vec3 eps;      // (-delta, 0, +delta)
    Mat3 vectors;  // columns ordered as eps
};

inline Eigensystem eigensystem(const DriveSchedule& sched, double s) {
    validate(sched);
    const Amplitudes amp = amplitudes(sched, s);
    const double delta = std::hypot(amp.a, amp.b);
    if (!(delta > 1e-300))
        throw std::runtime_error("degenerate gap: delta(s) = 0");
    const double a = amp.a / delta;
    const double b = amp.b / delta;
    const double r2 = 1.0 / std::sqrt(2.0);
    Eigensystem sys;
    sys.delta = delta;
    sys.eps = Vec3(-delta, 0.0, delta);
    sys.vectors << a * r2, -b, a * r2,
                   -r2,     0.0, r2,
                   b * r2,  a,  b * r2;
    return sys;
}

struct GapMinimum {
    double delta_min;
    double s_min;
};

inline GapMinimum gap_minimum(const DriveSchedule& sched) {
    validate(sched);
    const double wa2 = sched.omega_a * sched.omega_a;
    const double wb2 = sched.omega_b * sched.omega_b;
    const double s_rev = wa2 / (wa2 + wb2);
    return {sched.omega_a * sched.omega_b / std::sqrt(wa2 + wb2),
            sched.ordering == Ordering::Reversed ? s_rev : 1.0 - s_rev};
}

// M(s) = <eps_2|d_s eps_1> = (A B' - A' B) / (sqrt(2) delta^2); also equals
// <eps_2|d_s eps_3>, while <eps_3|d_s eps_1> vanishes identically.
inline double nonadiabatic_coupling(const DriveSchedule& sched, double s) {
    validate(sched);
    const Amplitudes amp = amplitudes(sched, s);
    const double d2 = amp.a * amp.a + amp.b * amp.b;
    if (!(d2 > 1e-300))
        throw std::runtime_error("degenerate gap: delta(s) = 0");
    return (amp.a * amp.db - amp.da * amp.b) / (std::sqrt(2.0) * d2);
}

struct AdiabaticBounds {
    double tf_gap;   // (wa^2+wb^2)^(3/2) / (sqrt(2) wa^2 wb^2)
    double tf_bath;  // (beta/2pi)^2 sqrt(wa^2+wb^2) / sqrt(2)
};

inline AdiabaticBounds adiabatic_bounds(const DriveSchedule& sched, double beta) {
    validate(sched);
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    const double wa2 = sched.omega_a * sched.omega_a;
    const double wb2 = sched.omega_b * sched.omega_b;
    const double sum = wa2 + wb2;
    const double tau_b = beta / (2.0 * std::numbers::pi_v<double>);
    return {std::pow(sum, 1.5) / (std::sqrt(2.0) * wa2 * wb2),
            tau_b * tau_b * std::sqrt(sum) / std::sqrt(2.0)};
}

inline const char* ordering_name(Ordering o) {
    return o == Ordering::Charge ? "charge" : "reversed";
}

}  // namespace qb
