// acceptance.cpp - end-to-end acceptance gate.  Runs eleven numbered checks
// over the full pipeline and prints one [PASS]/[FAIL] line each with the
// measured values and elapsed time.  Exit code 0 only if every check passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qb/bath.hpp"
#include "qb/emit.hpp"
#include "qb/evolve.hpp"
#include "qb/generator.hpp"
#include "qb/observables.hpp"
#include "qb/schedule.hpp"
#include "qb/sweep.hpp"
#include "qb/types.hpp"
#include "support/oracles.hpp"

using qb::BathSpec;
using qb::DriveSchedule;
using qb::GeneratorOptions;
using qb::Mat3;
using qb::Mat3c;
using qb::Mat9c;
using qb::Ordering;
using qb::SweepConfig;
using qb::SweepResult;
using qb::SweepRow;
using qb::Variant;
using qb::Vec9c;

namespace {

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

struct Outcome {
    bool pass{false};
    std::string detail;
};

int failures = 0;

void report(int number, const std::string& name, const Outcome& outcome,
            double seconds) {
    if (!outcome.pass) ++failures;
    std::printf("[%s] criterion %d: %s: %s (%.1f s)\n",
                outcome.pass ? "PASS" : "FAIL", number, name.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
}

template <typename Fn>
void run(int number, const std::string& name, double budget_s, Fn&& fn) {
    Timer timer;
    Outcome outcome;
    try {
        outcome = fn();
    } catch (const std::exception& err) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + err.what();
    }
    const double elapsed = timer.seconds();
    if (outcome.pass && elapsed > budget_s) {
        outcome.pass = false;
        outcome.detail += fmt("; runtime %.1f s exceeds budget %.0f s", elapsed,
                              budget_s);
    }
    report(number, name, outcome, elapsed);
}

double max_abs(const Mat3c& m) { return m.cwiseAbs().maxCoeff(); }

// ---- criterion 1 ----

Outcome check_kms() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> log_beta(std::log(0.05), std::log(5.0));
    // Samples keep |beta*omega| >= 1e-2, outside the cancellation noise of
    // the direct formula.
    std::uniform_real_distribution<double> log_u(std::log(1e-2), std::log(10.0));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        BathSpec bath;
        bath.beta = std::exp(log_beta(rng));
        double omega = std::exp(log_u(rng)) / bath.beta;
        if (coin(rng) < 0.5) omega = -omega;
        worst = std::max(worst, qb::kms_residual(bath, omega));
    }
    return {worst < 1e-12,
            fmt("max detailed-balance residual %.3g < 1e-12 over 1000 (beta, "
                "omega) pairs",
                worst)};
}

// ---- criterion 2 ----

Outcome check_cptp() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> s_dist(0.0, 1.0);
    const DriveSchedule sched;
    const BathSpec bath;
    double worst_trace = 0.0;
    double worst_herm = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double s = s_dist(rng);
        const Mat3c rho = qbtest::random_density(rng);
        for (Variant variant : {Variant::Full, Variant::AdiabaticLimit}) {
            GeneratorOptions opts;
            opts.variant = variant;
            const qb::Generator gen = qb::build_generator(sched, bath, s, 1.0, opts);
            const Mat3c out = qb::apply(gen, rho);
            worst_trace = std::max(worst_trace, std::abs(out.trace()));
            worst_herm = std::max(worst_herm, max_abs(out - out.adjoint()));
        }
    }

    double worst_gibbs = 0.0;
    GeneratorOptions frozen;
    frozen.variant = Variant::AdiabaticLimit;
    for (int k = 1; k <= 9; ++k) {
        const double s = 0.1 * k;
        const qb::Generator gen = qb::build_generator(sched, bath, s, 1.0, frozen);
        Eigen::JacobiSVD<Mat9c> svd(gen.matrix, Eigen::ComputeFullV);
        Vec9c null_vec = svd.matrixV().col(8);
        const std::complex<double> tr = null_vec(0) + null_vec(4) + null_vec(8);
        if (std::abs(tr) < 1e-6) {
            return {false, fmt("stationary vector at s=%.1f has no trace", s)};
        }
        null_vec /= tr;
        const Mat3c stat = qb::unvectorize(null_vec);
        const Mat3c gibbs = qb::gibbs_state(sched, s, bath.beta).m;
        worst_gibbs = std::max(worst_gibbs, max_abs(stat - gibbs));
    }

    const bool pass =
        worst_trace < 1e-12 && worst_herm < 1e-12 && worst_gibbs < 1e-8;
    return {pass,
            fmt("trace residual %.3g, hermiticity residual %.3g (< 1e-12, 1000 "
                "states, both variants); stationary-vs-thermal gap %.3g < 1e-8",
                worst_trace, worst_herm, worst_gibbs)};
}

// ---- criterion 3 ----

Outcome check_closed_forms() {
    const std::vector<DriveSchedule> schedules = {
        {1.0, 1.0, Ordering::Charge},
        {2.0, 1.0, Ordering::Charge},
        {1.0, 2.0, Ordering::Reversed},
    };
    double worst = 0.0;
    for (const DriveSchedule& sched : schedules) {
        for (int k = 0; k < 1000; ++k) {
            const double s = static_cast<double>(k) / 999.0;
            const qb::Eigensystem sys = qb::eigensystem(sched, s);
            const Mat3 v = qbtest::numeric_eigenvectors(sched, s, sys.vectors);
            const Mat3 x_eig = v.transpose() * qbtest::bare_x() * v;
            const Mat3 z_eig = v.transpose() * qbtest::bare_z() * v;
            const std::vector<qb::LindbladOp> ops = qb::lindblad_ops(sched, s);
            const double freqs[5] = {0.0, sys.delta, -sys.delta,
                                     2.0 * sys.delta, -2.0 * sys.delta};
            for (int f = 0; f < 5; ++f) {
                const Mat3 xs =
                    qbtest::frequency_sector(x_eig, sys.eps, freqs[f]);
                const Mat3 zs =
                    qbtest::frequency_sector(z_eig, sys.eps, freqs[f]);
                worst = std::max(
                    worst, max_abs(ops[static_cast<std::size_t>(2 * f)].matrix -
                                   xs.cast<std::complex<double>>()));
                worst = std::max(
                    worst,
                    max_abs(ops[static_cast<std::size_t>(2 * f + 1)].matrix -
                            zs.cast<std::complex<double>>()));
            }
        }
    }
    return {worst < 1e-10,
            fmt("closed forms vs numeric sector decomposition: max entry gap "
                "%.3g < 1e-10 on a 1000-point s-grid, three schedules",
                worst)};
}

// ---- criterion 4 ----

Outcome check_mixing_fd() {
    const double h = 1e-4;
    double worst = 0.0;
    for (const Ordering ordering : {Ordering::Charge, Ordering::Reversed}) {
        DriveSchedule sched;
        sched.ordering = ordering;
        for (int k = 0; k < 1000; ++k) {
            const double s = 0.01 + 0.98 * static_cast<double>(k) / 999.0;
            const double analytic = qb::nonadiabatic_coupling(sched, s);
            const double numeric = qbtest::fd_mixing(sched, s, h);
            worst = std::max(worst, std::abs(analytic - numeric));
        }
    }
    return {worst < 1e-6,
            fmt("analytic mixing vs central differences: max error %.3g < 1e-6 "
                "on s in [0.01, 0.99], both orderings",
                worst)};
}

// ---- criteria 5 and 11 share the default sweep ----

SweepResult default_sweep(int workers) {
    SweepConfig config;
    config.workers = workers;
    return qb::sweep_tf(config);
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    qb::write_sweep(out, result, qb::Format::Csv);
    return out.str();
}

Outcome check_default_sweep(const SweepResult& result) {
    if (result.optimal_index < 0) return {false, "no optimal row"};
    const SweepRow& best =
        result.rows[static_cast<std::size_t>(result.optimal_index)];
    const double peak = best.dark_population;

    bool interior = true;
    if (result.optimal_index == 0 ||
        result.optimal_index ==
            static_cast<std::ptrdiff_t>(result.rows.size()) - 1) {
        interior = false;
    }

    double rise_max = 0.0;
    double outside_max = 0.0;
    double late_max = 0.0;
    for (const SweepRow& row : result.rows) {
        if (!row.error.empty()) return {false, "a sweep cell failed: " + row.error};
        if (row.tf < 1.0) rise_max = std::max(rise_max, row.dark_population);
        if (&row != &best &&
            (row.tf < 0.5 * best.tf || row.tf > 2.0 * best.tf)) {
            outside_max = std::max(outside_max, row.dark_population);
        }
        if (row.tf >= 10.0 * best.tf && row.tf <= 2000.0) {
            late_max = std::max(late_max, row.dark_population);
        }
    }
    const SweepRow& last = result.rows.back();

    const bool pass = interior && best.tf > 8.93 && best.tf < 10.93 &&
                      best.tf_dimensionless > 4.4685 &&
                      best.tf_dimensionless < 5.4615 && peak > 0.97 &&
                      peak < 1.01 && rise_max < 0.05 && outside_max < peak &&
                      late_max < peak - 0.05 && last.distance_to_gibbs < 0.1;
    return {pass,
            fmt("optimum tf %.4g (window 8.93..10.93), dimensionless %.4g "
                "(window 4.4685..5.4615), peak dark population %.4g (window "
                "0.97..1.01); dark < %.3g below tf=1, single peak, final "
                "distance to thermal %.3g < 0.1",
                best.tf, best.tf_dimensionless, peak, rise_max,
                last.distance_to_gibbs)};
}

// ---- criterion 6 ----

Outcome check_uneven_pairs() {
    SweepConfig config;
    config.omega_pairs = {{2.0, 1.0}, {1.0, 2.0}};
    config.tf_grid = qb::log_grid(1.0, 500.0, 25);
    const SweepResult result = qb::sweep_tf(config);

    const SweepRow* strong_first = nullptr;
    const SweepRow* weak_first = nullptr;
    for (const SweepRow& row : result.rows) {
        if (!row.pair_optimal) continue;
        if (row.omega_a == 2.0) strong_first = &row;
        if (row.omega_a == 1.0) weak_first = &row;
    }
    if (strong_first == nullptr || weak_first == nullptr) {
        return {false, "missing a per-pair optimum"};
    }
    const double t1 = strong_first->tf;
    const double t2 = weak_first->tf;
    const double spread = std::abs(t1 - t2) / (0.5 * (t1 + t2));
    const bool pass = t1 > 20.27 * 0.85 && t1 < 20.27 * 1.15 &&
                      strong_first->dark_population > 0.972 - 0.03 &&
                      strong_first->dark_population < 0.972 + 0.03 &&
                      t2 > 20.31 * 0.85 && t2 < 20.31 * 1.15 &&
                      weak_first->dark_population > 0.975 - 0.03 &&
                      weak_first->dark_population < 0.975 + 0.03 &&
                      spread < 0.02;
    return {pass,
            fmt("(2,1) optimum tf %.4g peak %.4g (20.27 +- 15%%, 0.972 +- "
                "0.03); (1,2) optimum tf %.4g peak %.4g (20.31 +- 15%%, 0.975 "
                "+- 0.03); relative spread %.3g < 0.02",
                t1, strong_first->dark_population, t2,
                weak_first->dark_population, spread)};
}

// ---- criterion 7 ----

Outcome check_energetics() {
    const DriveSchedule sched;
    const qb::BatterySpec battery;

    SweepConfig temps;
    temps.betas = {5.0 / 2.6, 1.0 / 2.6, 1.0 / 13.0};
    temps.tf = 9.93;
    const SweepResult by_temp = qb::sweep_temperature(temps);
    if (by_temp.rows.size() != 3) return {false, "expected three beta rows"};
    const SweepRow& hot = by_temp.rows[0];
    const SweepRow& mid = by_temp.rows[1];
    const SweepRow& cold = by_temp.rows[2];
    if (!(cold.beta > mid.beta && mid.beta > hot.beta)) {
        return {false, "beta rows not in ascending order"};
    }
    if (!cold.efficiency || !mid.efficiency || !hot.efficiency) {
        return {false, "missing efficiency at the reference time"};
    }

    BathSpec cold_bath;
    cold_bath.beta = 5.0 / 2.6;
    auto stored_at = [&](double tf) {
        const qb::Trajectory traj =
            qb::evolve(sched, cold_bath, tf, qb::initial_dark_state());
        return qb::record(traj, sched, cold_bath, battery).back().stored_energy;
    };
    const double quick = stored_at(0.1);
    const double slow = stored_at(2000.0);

    const bool pass = cold.stored_energy > 1.90 && cold.stored_energy < 2.00 &&
                      cold.ergotropy > 1.90 && cold.ergotropy < 2.00 &&
                      *cold.efficiency > 0.97 && *cold.efficiency < 1.03 &&
                      quick < 0.1 && slow < cold.stored_energy &&
                      cold.stored_energy > mid.stored_energy &&
                      mid.stored_energy > hot.stored_energy &&
                      *cold.efficiency > *mid.efficiency &&
                      *mid.efficiency > *hot.efficiency;
    return {pass,
            fmt("cold bath at tf=9.93: stored %.4g, extractable %.4g (1.95 +- "
                "0.05), efficiency %.4g (1 +- 0.03); tf=0.1 stores %.3g < 0.1; "
                "tf=2000 stores %.4g < %.4g; temperature ordering monotone",
                cold.stored_energy, cold.ergotropy, *cold.efficiency, quick,
                slow, cold.stored_energy)};
}

// ---- criterion 8 ----

Outcome check_coupling_trend() {
    SweepConfig config;
    config.couplings = {1e-5, 3e-5, 1e-4, 3e-4, 1e-3};
    config.tf_grid = qb::log_grid(1.0, 500.0, 25);
    const SweepResult result = qb::sweep_coupling(config);
    if (result.rows.size() != 5) return {false, "expected five coupling rows"};
    std::string list;
    bool ordered = true;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (!result.rows[i].error.empty()) {
            return {false, "a coupling cell failed: " + result.rows[i].error};
        }
        list += fmt("%s%.4g", i ? ", " : "", result.rows[i].tf);
        if (i > 0 && result.rows[i].tf > result.rows[i - 1].tf * 1.03) {
            ordered = false;
        }
    }
    return {ordered,
            fmt("optimal charging time per coupling {1e-5..1e-3}: {%s}; "
                "nonincreasing within 3%% grid resolution",
                list.c_str())};
}

// ---- criterion 9 ----

Outcome check_ergotropy_oracle() {
    std::mt19937_64 rng(909);
    const qb::BatterySpec spec;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double worst_diag = 0.0;
    for (int k = 0; k < 1000; ++k) {
        double p[3] = {unit(rng), unit(rng), unit(rng)};
        const double sum = p[0] + p[1] + p[2];
        qb::DensityMatrix rho;
        rho.basis = qb::Basis::Bare;
        rho.m = Mat3c::Zero();
        double energy = 0.0;
        qb::Vec3 pops;
        for (int i = 0; i < 3; ++i) {
            pops(i) = p[i] / sum;
            rho.m(i, i) = pops(i);
            energy += spec.levels(i) * pops(i);
        }
        const double brute =
            energy - qbtest::passive_energy_bruteforce(pops, spec.levels);
        worst_diag = std::max(worst_diag,
                              std::abs(qb::ergotropy(rho, spec) - brute));
    }

    double worst_slack = -1.0;
    for (int k = 0; k < 50; ++k) {
        const Mat3c rho = qbtest::random_density(rng);
        qb::DensityMatrix bare{rho, qb::Basis::Bare};
        const double w = qb::ergotropy(bare, spec);
        double energy = 0.0;
        for (int i = 0; i < 3; ++i) energy += spec.levels(i) * rho(i, i).real();
        for (int trial = 0; trial < 10000; ++trial) {
            const Mat3c u = qbtest::haar_unitary(rng);
            const Mat3c rotated = u * rho * u.adjoint();
            double rotated_energy = 0.0;
            for (int i = 0; i < 3; ++i) {
                rotated_energy += spec.levels(i) * rotated(i, i).real();
            }
            worst_slack = std::max(worst_slack, (energy - rotated_energy) - w);
        }
    }
    const bool pass = worst_diag < 1e-12 && worst_slack < 1e-6;
    return {pass,
            fmt("sorted-population formula vs permutation brute force: max gap "
                "%.3g < 1e-12 (1000 diagonal states); best Haar trial exceeds "
                "the bound by %.3g < 1e-6 (50 states x 10000 unitaries)",
                worst_diag, worst_slack)};
}

// ---- criterion 10 ----

Outcome check_rhs_transcriptions() {
    std::mt19937_64 rng(1010);
    const DriveSchedule sched;
    const BathSpec bath;
    const double tf = 9.93;
    double worst = 0.0;
    for (int sv = 0; sv < 10; ++sv) {
        const double s = static_cast<double>(sv) / 9.0;
        GeneratorOptions opts;
        const qb::Generator gen = qb::build_generator(sched, bath, s, tf, opts);
        for (int k = 0; k < 100; ++k) {
            const Mat3c rho = qbtest::random_density(rng);
            const Mat3c via_matrix = qb::apply(gen, rho);
            const Mat3c via_entries =
                qb::componentwise_rhs(sched, bath, s, tf, opts, rho);
            worst = std::max(worst, max_abs(via_matrix - via_entries));
        }
    }

    BathSpec silent;
    silent.eta_g2 = 0.0;
    bool exact = true;
    for (int sv = 0; sv <= 20; ++sv) {
        const double s = static_cast<double>(sv) / 20.0;
        GeneratorOptions full_opts;
        GeneratorOptions ad_opts;
        ad_opts.variant = Variant::AdiabaticLimit;
        GeneratorOptions rot_opts;
        rot_opts.phases = false;
        const Mat9c g_full =
            qb::build_generator(sched, bath, s, tf, full_opts).matrix;
        const Mat9c g_ad = qb::build_generator(sched, bath, s, tf, ad_opts).matrix;
        const Mat9c g_rot =
            qb::build_generator(sched, silent, s, tf, rot_opts).matrix;
        const Mat9c sum = g_ad + g_rot;
        for (int r = 0; r < 9 && exact; ++r) {
            for (int c = 0; c < 9 && exact; ++c) {
                if (g_full(r, c) != sum(r, c)) exact = false;
            }
        }
    }
    const bool pass = worst < 1e-10 && exact;
    return {pass,
            fmt("entrywise transcription vs assembled generator: max gap %.3g "
                "< 1e-10 (100 states x 10 s-values); mixing-deleted full "
                "variant equals the adiabatic variant exactly: %s",
                worst, exact ? "yes" : "no")};
}

// ---- criterion 11 ----

Outcome check_determinism(const std::string& serial_csv, double* extra_seconds) {
    Timer timer;
    const std::string four = sweep_csv(default_sweep(4));
    const std::string eight = sweep_csv(default_sweep(8));
    *extra_seconds = timer.seconds();
    const bool pass = four == serial_csv && eight == serial_csv;
    return {pass,
            fmt("default sweep CSV with 1, 4, and 8 workers: %zu bytes, byte "
                "identical: %s",
                serial_csv.size(), pass ? "yes" : "no")};
}

}  // namespace

int main() {
    const Timer total;
    std::printf("acceptance checks (library defaults: omega_a=1, omega_b=1, "
                "eta_g2=1e-4, beta=1/2.6, omega_c=8*pi)\n");
    std::fflush(stdout);

    run(1, "detailed balance of the spectral rate", 1.0, check_kms);
    run(2, "generator preserves trace, hermiticity, thermal fixed point", 10.0,
        check_cptp);
    run(3, "closed-form jump operators match the numeric construction", 5.0,
        check_closed_forms);
    run(4, "analytic mixing matches finite differences", 1.0, check_mixing_fd);

    // The serial default sweep is shared between criteria 5 and 11.
    Timer sweep_timer;
    SweepResult serial;
    std::string serial_csv;
    std::string sweep_error;
    try {
        serial = default_sweep(1);
        serial_csv = sweep_csv(serial);
    } catch (const std::exception& err) {
        sweep_error = err.what();
    }
    const double sweep_seconds = sweep_timer.seconds();

    if (sweep_error.empty()) {
        Timer timer;
        Outcome outcome = check_default_sweep(serial);
        if (outcome.pass && sweep_seconds > 300.0) {
            outcome.pass = false;
            outcome.detail += fmt("; runtime %.1f s exceeds budget 300 s",
                                  sweep_seconds);
        }
        report(5, "optimal charging time and curve shape at defaults", outcome,
               sweep_seconds + timer.seconds());
    } else {
        report(5, "optimal charging time and curve shape at defaults",
               {false, "exception: " + sweep_error}, sweep_seconds);
    }

    run(6, "uneven amplitude pairs share a symmetric optimum", 600.0,
        check_uneven_pairs);
    run(7, "stored energy, extractable work, and efficiency", 300.0,
        check_energetics);
    run(8, "stronger coupling never delays the optimum", 900.0,
        check_coupling_trend);
    run(9, "ergotropy against brute force and Haar sampling", 30.0,
        check_ergotropy_oracle);
    run(10, "right-hand-side transcriptions agree", 5.0,
        check_rhs_transcriptions);

    if (sweep_error.empty()) {
        Timer timer;
        double extra = 0.0;
        Outcome outcome = check_determinism(serial_csv, &extra);
        const double combined = sweep_seconds + extra;
        if (outcome.pass && combined > 600.0) {
            outcome.pass = false;
            outcome.detail +=
                fmt("; runtime %.1f s exceeds budget 600 s", combined);
        }
        report(11, "sweep output is independent of the worker count", outcome,
               combined);
    } else {
        report(11, "sweep output is independent of the worker count",
               {false, "exception: " + sweep_error}, 0.0);
    }

    std::printf("%d of 11 criteria passed (%.1f s total)\n", 11 - failures,
                total.seconds());
    return failures == 0 ? 0 : 1;
}
