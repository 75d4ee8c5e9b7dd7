// sweep.hpp - parameter sweeps over tf, coupling, and temperature, with
// optimal-time detection and deterministic row assembly

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qb/bath.hpp"
#include "qb/evolve.hpp"
#include "qb/generator.hpp"
#include "qb/observables.hpp"
#include "qb/schedule.hpp"

namespace qb {

struct SweepConfig {
    DriveSchedule sched{};
    BathSpec bath{};
    BatterySpec battery{};
    GeneratorOptions gen{};
    std::vector<std::pair<double, double>> omega_pairs{};  // empty: use sched
    std::vector<double> tf_grid{};                         // empty: default grid
    std::vector<double> couplings{};                       // sweep_coupling grid
    std::vector<double> betas{};                           // sweep_temperature grid
    double tf{9.93};                                       // fixed-tf operations
    long steps{0};                                         // 0: default_steps(tf)
    int workers{1};
    bool refine{true};
};

// Log-spaced grid with exact endpoints.
std::vector<double> log_grid(double lo, double hi, int points);

// 60 log-spaced points covering the short-time rise, the optimum, the
// partial-recovery window, and the long-time plateau.
std::vector<double> default_tf_grid();

struct SweepRow {
    double omega_a{0.0};
    double omega_b{0.0};
    double eta_g2{0.0};
    double beta{0.0};
    double omega_c{0.0};
    Ordering ordering{Ordering::Charge};
    Variant variant{Variant::Full};
    double tf{0.0};
    double tf_dimensionless{0.0};  // tf / tf_gap bound
    long steps{0};
    double dark_population{0.0};
    double stored_energy{0.0};
    double ergotropy{0.0};
    std::optional<double> efficiency{};
    double distance_to_gibbs{0.0};
    double tf_gap_bound{0.0};
    double tf_bath_bound{0.0};
    bool optimal{false};         // argmax of dark population over the result
    bool optimal_energy{false};  // argmax of stored energy over the result
    bool pair_optimal{false};    // argmax within this row's (omega_a, omega_b)
    std::string error{};         // nonempty marks a failed cell
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::ptrdiff_t optimal_index{-1};
    std::ptrdiff_t optimal_energy_index{-1};
};

// One evolve per tf grid point (per amplitude pair), then a golden-section
// refinement around each pair's coarse argmax down to 1e-2 relative tf
// resolution.  Failed cells carry error markers; the sweep throws only if
// every cell failed.
SweepResult sweep_tf(const SweepConfig& config);

// Runs sweep_tf per coupling value and reports each refined optimum as one
// summary row.
SweepResult sweep_coupling(const SweepConfig& config);

// Final observables at fixed tf across the beta grid.
SweepResult sweep_temperature(const SweepConfig& config);

struct DistanceRow {
    double s{0.0};
    double distance{0.0};
};

struct DistanceTable {
    SweepConfig config;
    long steps{0};
    std::vector<DistanceRow> rows;
};

// Trace distance to the instantaneous Gibbs state along one trajectory at
// the configured tf.
DistanceTable distance_trace(const SweepConfig& config);

}  // namespace qb
