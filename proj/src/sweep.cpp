// sweep.cpp - sweep engine: cell evaluation, worker scheduling, golden-section
// refinement of the optimal charging time, row ordering and flag marking

#include "qb/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

namespace qb {

namespace {

// ---- grids ----

void check_grid(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) {
        throw std::invalid_argument(std::string(name) + " grid is empty");
    }
    for (double v : grid) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string(name) +
                                        " grid entries must be positive and finite");
        }
    }
}

void check_workers(int workers) {
    if (workers < 1) {
        throw std::invalid_argument("workers must be >= 1");
    }
}

// ---- cell evaluation ----

struct Cell {
    double omega_a{0.0};
    double omega_b{0.0};
    double eta_g2{0.0};
    double beta{0.0};
    double tf{0.0};
    int pair{0};
};

// Pure function of (config, cell) so worker count never changes row bytes.
SweepRow run_cell(const SweepConfig& config, const Cell& cell) {
    SweepRow row;
    row.omega_a = cell.omega_a;
    row.omega_b = cell.omega_b;
    row.eta_g2 = cell.eta_g2;
    row.beta = cell.beta;
    row.omega_c = config.bath.omega_c;
    row.ordering = config.sched.ordering;
    row.variant = config.gen.variant;
    row.tf = cell.tf;

    DriveSchedule sched = config.sched;
    sched.omega_a = cell.omega_a;
    sched.omega_b = cell.omega_b;
    BathSpec bath = config.bath;
    bath.eta_g2 = cell.eta_g2;
    bath.beta = cell.beta;

    try {
        const AdiabaticBounds bounds = adiabatic_bounds(sched, bath);
        row.tf_gap_bound = bounds.tf_gap;
        row.tf_bath_bound = bounds.tf_bath;
        row.tf_dimensionless = cell.tf / bounds.tf_gap;

        EvolveOptions opts;
        opts.steps = config.steps;
        opts.gen = config.gen;
        const Trajectory traj =
            evolve(sched, bath, cell.tf, initial_dark_state(), opts);
        row.steps = traj.steps;

        const std::vector<ObservableRecord> recs =
            record(traj, sched, bath, config.battery);
        const ObservableRecord& fin = recs.back();
        row.dark_population = fin.dark_population;
        row.stored_energy = fin.stored_energy;
        row.ergotropy = fin.ergotropy;
        row.efficiency = fin.efficiency;
        row.distance_to_gibbs = fin.distance_to_gibbs;
    } catch (const std::exception& err) {
        row.error = err.what();
    }
    return row;
}

void run_cells(const SweepConfig& config, const std::vector<Cell>& cells,
               std::vector<SweepRow>& rows) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(cells.size());
    rows.resize(cells.size());
    if (config.workers <= 1 || n <= 1) {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            rows[static_cast<std::size_t>(i)] =
                run_cell(config, cells[static_cast<std::size_t>(i)]);
        }
        return;
    }
#pragma omp parallel for schedule(dynamic) num_threads(config.workers)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)] =
            run_cell(config, cells[static_cast<std::size_t>(i)]);
    }
}

// ---- ordering and flags ----

bool row_before(const SweepRow& lhs, const SweepRow& rhs) {
    return std::tie(lhs.omega_a, lhs.omega_b, lhs.eta_g2, lhs.beta, lhs.tf) <
           std::tie(rhs.omega_a, rhs.omega_b, rhs.eta_g2, rhs.beta, rhs.tf);
}

// First row in sorted order wins ties, so flags are reproducible.
void mark_flags(SweepResult& result) {
    std::ptrdiff_t best = -1;
    std::ptrdiff_t best_energy = -1;
    std::map<std::pair<double, double>, std::ptrdiff_t> pair_best;
    for (std::ptrdiff_t i = 0;
         i < static_cast<std::ptrdiff_t>(result.rows.size()); ++i) {
        const SweepRow& row = result.rows[static_cast<std::size_t>(i)];
        if (!row.error.empty()) {
            continue;
        }
        if (best < 0 ||
            row.dark_population >
                result.rows[static_cast<std::size_t>(best)].dark_population) {
            best = i;
        }
        if (best_energy < 0 ||
            row.stored_energy >
                result.rows[static_cast<std::size_t>(best_energy)].stored_energy) {
            best_energy = i;
        }
        const auto key = std::make_pair(row.omega_a, row.omega_b);
        const auto found = pair_best.find(key);
        if (found == pair_best.end() ||
            row.dark_population >
                result.rows[static_cast<std::size_t>(found->second)]
                    .dark_population) {
            pair_best[key] = i;
        }
    }
    if (best >= 0) {
        result.rows[static_cast<std::size_t>(best)].optimal = true;
    }
    if (best_energy >= 0) {
        result.rows[static_cast<std::size_t>(best_energy)].optimal_energy = true;
    }
    for (const auto& entry : pair_best) {
        result.rows[static_cast<std::size_t>(entry.second)].pair_optimal = true;
    }
    result.optimal_index = best;
    result.optimal_energy_index = best_energy;
}

void finish(SweepResult& result) {
    if (result.rows.empty()) {
        throw std::invalid_argument("sweep produced no rows");
    }
    bool any_ok = false;
    for (const SweepRow& row : result.rows) {
        if (row.error.empty()) {
            any_ok = true;
            break;
        }
    }
    if (!any_ok) {
        throw IntegrationError("every sweep cell failed: " + result.rows.front().error,
                               0.0, 0);
    }
    std::stable_sort(result.rows.begin(), result.rows.end(), row_before);
    mark_flags(result);
}

// ---- refinement ----

// Zooms a uniform grid into the bracket around the coarse argmax until the
// bracket reaches percent resolution.  Every probe is recorded as a regular
// row.
void refine_pair(const SweepConfig& config, const Cell& proto, double lo,
                 double hi, std::vector<SweepRow>& out) {
    constexpr int kInterior = 7;
    double a = lo;
    double b = hi;
    int guard = 0;
    while ((b - a) > 1e-2 * 0.5 * (a + b) && guard < 12) {
        const double step = (b - a) / (kInterior + 1);
        double probes[kInterior];
        double best_val = 0.0;
        int best_k = -1;
        for (int k = 0; k < kInterior; ++k) {
            probes[k] = a + (k + 1) * step;
            Cell cell = proto;
            cell.tf = probes[k];
            out.push_back(run_cell(config, cell));
            const SweepRow& row = out.back();
            const double val = row.error.empty()
                                   ? row.dark_population
                                   : -std::numeric_limits<double>::infinity();
            if (best_k < 0 || val > best_val) {
                best_val = val;
                best_k = k;
            }
        }
        a = best_k == 0 ? a : probes[best_k - 1];
        b = best_k == kInterior - 1 ? b : probes[best_k + 1];
        ++guard;
    }
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("log grid needs 0 < lo < hi, both finite");
    }
    if (points < 2) {
        throw std::invalid_argument("log grid needs at least 2 points");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double step = (std::log(hi) - std::log(lo)) / (points - 1);
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + i * step);
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<double> default_tf_grid() { return log_grid(0.1, 5000.0, 60); }

SweepResult sweep_tf(const SweepConfig& config) {
    validate(config.sched);
    validate(config.bath);
    validate(config.battery);
    check_workers(config.workers);

    std::vector<std::pair<double, double>> pairs = config.omega_pairs;
    if (pairs.empty()) {
        pairs.emplace_back(config.sched.omega_a, config.sched.omega_b);
    }
    for (const auto& pair : pairs) {
        if (!(pair.first > 0.0) || !std::isfinite(pair.first) ||
            !(pair.second > 0.0) || !std::isfinite(pair.second)) {
            throw std::invalid_argument(
                "amplitude pairs must be positive and finite");
        }
    }
    std::vector<double> grid =
        config.tf_grid.empty() ? default_tf_grid() : config.tf_grid;
    check_grid(grid, "tf");

    std::vector<Cell> cells;
    cells.reserve(pairs.size() * grid.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        for (double tf : grid) {
            cells.push_back(Cell{pairs[p].first, pairs[p].second,
                                 config.bath.eta_g2, config.bath.beta, tf,
                                 static_cast<int>(p)});
        }
    }

    SweepResult result;
    run_cells(config, cells, result.rows);

    if (config.refine) {
        std::vector<SweepRow> refined;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            // Coarse rows for this pair, ordered by tf, failures dropped.
            std::vector<std::size_t> ok;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i].pair == static_cast<int>(p) &&
                    result.rows[i].error.empty()) {
                    ok.push_back(i);
                }
            }
            std::stable_sort(ok.begin(), ok.end(),
                             [&](std::size_t lhs, std::size_t rhs) {
                                 return cells[lhs].tf < cells[rhs].tf;
                             });
            if (ok.size() < 3) {
                continue;
            }
            std::size_t arg = 0;
            for (std::size_t k = 1; k < ok.size(); ++k) {
                if (result.rows[ok[k]].dark_population >
                    result.rows[ok[arg]].dark_population) {
                    arg = k;
                }
            }
            // A boundary argmax has no bracket; the coarse row stands.
            if (arg == 0 || arg + 1 == ok.size()) {
                continue;
            }
            Cell proto = cells[ok[arg]];
            refine_pair(config, proto, cells[ok[arg - 1]].tf,
                        cells[ok[arg + 1]].tf, refined);
        }
        for (SweepRow& row : refined) {
            result.rows.push_back(std::move(row));
        }
    }

    finish(result);
    return result;
}

SweepResult sweep_coupling(const SweepConfig& config) {
    std::vector<double> couplings = config.couplings;
    if (couplings.empty()) {
        couplings = {1e-5, 3e-5, 1e-4, 3e-4, 1e-3};
    }
    check_grid(couplings, "coupling");

    SweepResult result;
    for (double coupling : couplings) {
        SweepConfig sub = config;
        sub.bath.eta_g2 = coupling;
        sub.couplings.clear();
        const SweepResult inner = sweep_tf(sub);
        SweepRow row = inner.rows[static_cast<std::size_t>(inner.optimal_index)];
        row.optimal = false;
        row.optimal_energy = false;
        row.pair_optimal = false;
        result.rows.push_back(std::move(row));
    }
    finish(result);
    return result;
}

SweepResult sweep_temperature(const SweepConfig& config) {
    std::vector<double> betas = config.betas;
    if (betas.empty()) {
        betas.push_back(config.bath.beta);
    }
    check_grid(betas, "beta");
    if (!(config.tf > 0.0) || !std::isfinite(config.tf)) {
        throw std::invalid_argument("tf must be positive and finite");
    }
    validate(config.sched);
    validate(config.bath);
    validate(config.battery);
    check_workers(config.workers);

    std::vector<Cell> cells;
    cells.reserve(betas.size());
    for (double beta : betas) {
        cells.push_back(Cell{config.sched.omega_a, config.sched.omega_b,
                             config.bath.eta_g2, beta, config.tf, 0});
    }
    SweepResult result;
    run_cells(config, cells, result.rows);
    finish(result);
    return result;
}

DistanceTable distance_trace(const SweepConfig& config) {
    validate(config.sched);
    validate(config.bath);
    validate(config.battery);
    if (!(config.tf > 0.0) || !std::isfinite(config.tf)) {
        throw std::invalid_argument("tf must be positive and finite");
    }
    EvolveOptions opts;
    opts.steps = config.steps;
    opts.gen = config.gen;
    const Trajectory traj = evolve(config.sched, config.bath, config.tf,
                                   initial_dark_state(), opts);
    const std::vector<ObservableRecord> recs =
        record(traj, config.sched, config.bath, config.battery);

    DistanceTable table;
    table.config = config;
    table.steps = traj.steps;
    table.rows.reserve(recs.size());
    for (const ObservableRecord& rec : recs) {
        table.rows.push_back(DistanceRow{rec.s, rec.distance_to_gibbs});
    }
    return table;
}

}  // namespace qb
