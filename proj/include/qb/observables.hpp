// observables.hpp - battery figures of merit, Gibbs reference state, and
// trace-norm distance

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qb/evolve.hpp"
#include "qb/schedule.hpp"
#include "qb/types.hpp"

namespace qb {

// Bare level energies, strictly increasing; the battery Hamiltonian is
// H0 = diag(levels).
struct BatterySpec {
    Vec3 levels{0.0, 1.0, 1.95};
};

inline void validate(const BatterySpec& spec) {
    if (!(spec.levels[0] < spec.levels[1] && spec.levels[1] < spec.levels[2]))
        throw std::invalid_argument("battery levels must be strictly increasing");
}

inline DensityMatrix to_bare_basis(const DensityMatrix& rho, const DriveSchedule& sched,
                                   double s) {
    if (rho.basis != Basis::Eigen)
        throw std::invalid_argument("to_bare_basis expects an eigen-basis state");
    const Mat3 V = eigensystem(sched, s).vectors;
    return {V * rho.m * V.transpose(), Basis::Bare};
}

inline double stored_energy(const DensityMatrix& rho_bare, const BatterySpec& spec,
                            const DensityMatrix& rho0_bare) {
    if (rho_bare.basis != Basis::Bare || rho0_bare.basis != Basis::Bare)
        throw std::invalid_argument("stored_energy expects bare-basis states");
    const Vec3& lam = spec.levels;
    double e = 0.0;
    for (int i = 0; i < 3; ++i)
        e += lam[i] * (rho_bare.m(i, i).real() - rho0_bare.m(i, i).real());
    return e;
}

// Passive-state construction: populations sorted descending against levels
// sorted ascending.  Values within 1e-14 of zero are flushed to zero.
inline double ergotropy(const DensityMatrix& rho_bare, const BatterySpec& spec) {
    if (rho_bare.basis != Basis::Bare)
        throw std::invalid_argument("ergotropy expects a bare-basis state");
    validate_state(rho_bare);
    const Vec3& lam = spec.levels;
    Eigen::SelfAdjointEigenSolver<Mat3c> es(rho_bare.m, Eigen::EigenvaluesOnly);
    const Vec3 pops_asc = es.eigenvalues();
    double energy = 0.0;
    double passive = 0.0;
    for (int i = 0; i < 3; ++i) {
        energy += lam[i] * rho_bare.m(i, i).real();
        passive += lam[i] * pops_asc[2 - i];
    }
    const double w = energy - passive;
    return std::abs(w) < 1e-14 ? 0.0 : w;
}

inline std::optional<double> efficiency(double ergotropy_w, double stored_de) {
    if (std::abs(stored_de) < 1e-9) return std::nullopt;
    return ergotropy_w / stored_de;
}

inline DensityMatrix gibbs_state(const DriveSchedule& sched, double s, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be positive and finite");
    const double d = eigensystem(sched, s).delta;
    const double w1 = std::exp(beta * d);
    const double w3 = std::exp(-beta * d);
    const double z = w1 + 1.0 + w3;
    DensityMatrix rho;
    rho.m = Mat3c::Zero();
    rho.m(0, 0) = w1 / z;
    rho.m(1, 1) = 1.0 / z;
    rho.m(2, 2) = w3 / z;
    rho.basis = Basis::Eigen;
    return rho;
}

// Sum of absolute eigenvalues of rho - sigma; no 1/2 prefactor, range [0, 2].
inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.basis != sigma.basis)
        throw std::invalid_argument("trace_distance arguments must share a basis");
    Eigen::SelfAdjointEigenSolver<Mat3c> es(rho.m - sigma.m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

struct ObservableRecord {
    double s{0.0};
    double stored_energy{0.0};
    double ergotropy{0.0};
    std::optional<double> efficiency{};
    double dark_population{0.0};
    double distance_to_gibbs{0.0};
};

// Per-sample observables along a trajectory; the s=0 sample in the bare
// basis is the stored-energy reference.
inline std::vector<ObservableRecord> record(const Trajectory& traj,
                                            const DriveSchedule& sched,
                                            const BathSpec& bath,
                                            const BatterySpec& spec) {
    validate(spec);
    if (traj.samples.empty())
        throw std::invalid_argument("trajectory has no samples");
    const DensityMatrix rho0_bare =
        to_bare_basis({traj.samples.front().rho, Basis::Eigen}, sched,
                      traj.samples.front().s);
    std::vector<ObservableRecord> out(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const TrajectorySample& sample = traj.samples[i];
        const DensityMatrix rho_eig{sample.rho, Basis::Eigen};
        const DensityMatrix rho_bare = to_bare_basis(rho_eig, sched, sample.s);
        ObservableRecord rec;
        rec.s = sample.s;
        rec.stored_energy = stored_energy(rho_bare, spec, rho0_bare);
        rec.ergotropy = ergotropy(rho_bare, spec);
        rec.efficiency = efficiency(rec.ergotropy, rec.stored_energy);
        rec.dark_population = sample.rho(1, 1).real();
        rec.distance_to_gibbs =
            trace_distance(rho_eig, gibbs_state(sched, sample.s, bath.beta));
        out[i] = rec;
    }
    return out;
}

}  // namespace qb
