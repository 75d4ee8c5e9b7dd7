// evolve.hpp - fixed-step integration of the master equation over s in [0,1]

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qb/generator.hpp"
#include "qb/types.hpp"

namespace qb {

// Trajectories always store 1001 equally spaced samples; internal step
// counts are rounded up to a multiple of 1000 so every sample lands on an
// integration node.
inline constexpr int kTrajectorySamples = 1001;

inline long default_steps(double tf) {
    const double raw = std::max(20000.0, std::ceil(200.0 * tf));
    const long n = static_cast<long>(raw);
    return ((n + 999) / 1000) * 1000;
}

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double violation, long steps)
        : std::runtime_error(what), max_violation(violation), steps(steps) {}
    double max_violation;
    long steps;
};

struct TrajectorySample {
    double s;
    Mat3c rho;  // eigenbasis
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double tf{0.0};
    Variant variant{Variant::Full};
    long steps{0};
    double max_trace_drift{0.0};  // max |tr rho - 1| per step, before renormalization
    double min_eigenvalue{0.0};   // smallest eigenvalue seen at sample points
    double max_violation{0.0};    // max of trace drift and sample negativity
};

inline DensityMatrix initial_dark_state() {
    DensityMatrix rho;
    rho.m = Mat3c::Zero();
    rho.m(1, 1) = 1.0;
    rho.basis = Basis::Eigen;
    return rho;
}

struct EvolveOptions {
    long steps{0};  // 0 selects default_steps(tf)
    GeneratorOptions gen{};
};

namespace detail {

// In-place Hermitian projection of the vectorized state; returns the trace.
inline double symmetrize(Vec9c& v) {
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const std::complex<double> m = 0.5 * (v[3 * i + j] + std::conj(v[3 * j + i]));
            v[3 * i + j] = m;
            v[3 * j + i] = std::conj(m);
        }
        v[4 * i] = v[4 * i].real();
    }
    return (v[0] + v[4] + v[8]).real();
}

}  // namespace detail

// Classical 4th-order integration of d rho/ds = Generator(s) rho with
// per-step re-symmetrization and trace renormalization.  Positivity is
// monitored at sample points but never enforced.  Throws IntegrationError
// if trace drift or negativity exceeds 1e-6.
inline Trajectory evolve(const DriveSchedule& sched, const BathSpec& bath, double tf,
                         const DensityMatrix& rho0, const EvolveOptions& opts = {}) {
    validate(sched);
    validate(bath);
    if (!(tf > 0.0) || !std::isfinite(tf))
        throw std::invalid_argument("tf must be positive and finite");
    if (rho0.basis != Basis::Eigen)
        throw std::invalid_argument("initial state must carry the eigen basis tag");
    validate_state(rho0);
    if (opts.steps != 0 && opts.steps < 100)
        throw std::invalid_argument("step count must be at least 100");

    const long requested = opts.steps != 0 ? opts.steps : default_steps(tf);
    const long n = ((requested + 999) / 1000) * 1000;
    const long stride = n / (kTrajectorySamples - 1);
    const double h = 1.0 / static_cast<double>(n);

    Trajectory traj;
    traj.tf = tf;
    traj.variant = opts.gen.variant;
    traj.steps = n;
    traj.samples.reserve(kTrajectorySamples);

    Vec9c v = vectorize(rho0.m);
    traj.samples.push_back({0.0, rho0.m});
    double min_eig = min_eigenvalue(rho0.m);
    double max_drift = 0.0;

    Generator g_left = build_generator(sched, bath, 0.0, tf, opts.gen);
    for (long step = 0; step < n; ++step) {
        const double s_mid = (static_cast<double>(step) + 0.5) / static_cast<double>(n);
        const double s_right = static_cast<double>(step + 1) / static_cast<double>(n);
        const Generator g_mid = build_generator(sched, bath, s_mid, tf, opts.gen);
        const Generator g_right = build_generator(sched, bath, s_right, tf, opts.gen);

        const Vec9c k1 = g_left.matrix * v;
        const Vec9c k2 = g_mid.matrix * (v + (0.5 * h) * k1);
        const Vec9c k3 = g_mid.matrix * (v + (0.5 * h) * k2);
        const Vec9c k4 = g_right.matrix * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double trace = detail::symmetrize(v);
        if (!std::isfinite(trace) || trace <= 0.0)
            throw IntegrationError(
                "integration diverged (trace " + std::to_string(trace) + " at step " +
                    std::to_string(step + 1) + " of " + std::to_string(n) + ", tf " +
                    std::to_string(tf) + ")",
                std::numeric_limits<double>::infinity(), n);
        max_drift = std::max(max_drift, std::abs(trace - 1.0));
        v /= trace;
        g_left = g_right;

        if ((step + 1) % stride == 0) {
            const Mat3c rho = unvectorize(v);
            traj.samples.push_back({s_right, rho});
            min_eig = std::min(min_eig, min_eigenvalue(rho));
        }
    }

    traj.max_trace_drift = max_drift;
    traj.min_eigenvalue = min_eig;
    traj.max_violation = std::max(max_drift, std::max(0.0, -min_eig));
    if (traj.max_violation > 1e-6)
        throw IntegrationError(
            "integration failed to preserve state constraints (violation " +
                std::to_string(traj.max_violation) + " at tf " + std::to_string(tf) +
                ", steps " + std::to_string(n) + ")",
            traj.max_violation, n);
    return traj;
}

}  // namespace qb
