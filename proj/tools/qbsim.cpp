// qbsim.cpp - command-line front end: eigensystem, spectrum, and rate tables,
// single trajectories, and the tf/coupling/temperature sweep drivers

#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qb/bath.hpp"
#include "qb/emit.hpp"
#include "qb/evolve.hpp"
#include "qb/generator.hpp"
#include "qb/observables.hpp"
#include "qb/schedule.hpp"
#include "qb/sweep.hpp"

namespace {

using qb::Format;

// ---- option state ----

struct CommonOpts {
    double omega_a{1.0};
    double omega_b{1.0};
    double eta_g2{1e-4};
    double beta{1.0 / 2.6};
    double omega_c{8.0 * std::numbers::pi_v<double>};
    double tf{9.93};
    long steps{0};
    std::string variant{"full"};
    std::string ordering{"charge"};
    std::string lambda{"0,1,1.95"};
    std::string format{"csv"};
    std::string out{};
    std::string config_path{};
    int workers{1};
    bool phases{true};
    bool cross{true};
};

struct ExtraOpts {
    int eigen_samples{101};
    int spd_samples{121};
    double omega_min{-3.0};
    double omega_max{3.0};
    double s_value{0.5};
    std::vector<double> tf_grid{};
    double tf_min{0.1};
    double tf_max{5000.0};
    int tf_points{60};
    std::vector<std::string> pairs{};
    std::vector<double> couplings{};
    std::vector<double> betas{};
    bool refine{true};
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--omega-a", o.omega_a, "Peak amplitude of drive A");
    cmd->add_option("--omega-b", o.omega_b, "Peak amplitude of drive B");
    cmd->add_option("--eta-g2", o.eta_g2, "Bath coupling strength eta*g^2");
    cmd->add_option("--beta", o.beta, "Inverse bath temperature");
    cmd->add_option("--omega-c", o.omega_c, "Ohmic cutoff frequency");
    cmd->add_option("--tf", o.tf, "Total evolution time");
    cmd->add_option("--steps", o.steps, "Integrator steps (0 = automatic)");
    cmd->add_option("--variant", o.variant,
                    "Generator variant: full keeps the nonadiabatic mixing "
                    "terms, adiabatic drops them")
        ->check(CLI::IsMember({"full", "adiabatic"}));
    cmd->add_option("--ordering", o.ordering,
                    "Drive ordering: charge ramps A up while B ramps down, "
                    "reversed swaps the two envelopes")
        ->check(CLI::IsMember({"charge", "reversed"}));
    cmd->add_option("--lambda", o.lambda, "Battery levels as l1,l2,l3");
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "Output path (default: stdout)");
    cmd->add_option("--config", o.config_path,
                    "key=value config file; command-line flags win");
    cmd->add_option("--workers", o.workers, "Concurrent sweep workers");
    cmd->add_flag("--phases,!--no-phases", o.phases,
                  "Keep the coherent phase rotation");
    cmd->add_flag("--cross-coupling,!--no-cross-coupling", o.cross,
                  "Keep the x/z interference dissipator terms");
}

void add_tf_grid(CLI::App* cmd, ExtraOpts& x) {
    cmd->add_option("--tf-grid", x.tf_grid,
                    "Explicit tf grid values (repeatable)")
        ->delimiter(',');
    cmd->add_option("--tf-min", x.tf_min, "Log grid lower edge");
    cmd->add_option("--tf-max", x.tf_max, "Log grid upper edge");
    cmd->add_option("--tf-points", x.tf_points, "Log grid size");
    cmd->add_flag("--refine,!--no-refine", x.refine,
                  "Refine around the coarse optimum");
}

// ---- value parsing ----

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(text, &pos);
        if (pos != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": cannot parse number '" + text +
                                    "'");
    }
}

long parse_long(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const long value = std::stol(text, &pos);
        if (pos != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": cannot parse integer '" + text +
                                    "'");
    }
}

bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "0" || text == "false" || text == "no" || text == "off") {
        return false;
    }
    throw std::invalid_argument(what + ": cannot parse boolean '" + text + "'");
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ',')) {
        parts.push_back(part);
    }
    return parts;
}

std::pair<double, double> parse_pair(const std::string& text) {
    const std::vector<std::string> parts = split_commas(text);
    if (parts.size() != 2) {
        throw std::invalid_argument("amplitude pair must be two numbers: '" +
                                    text + "'");
    }
    return {parse_double(parts[0], "omega pair"),
            parse_double(parts[1], "omega pair")};
}

qb::BatterySpec parse_lambda(const std::string& text) {
    const std::vector<std::string> parts = split_commas(text);
    if (parts.size() != 3) {
        throw std::invalid_argument("lambda must be three numbers: '" + text +
                                    "'");
    }
    qb::BatterySpec spec;
    for (int i = 0; i < 3; ++i) {
        spec.levels(i) = parse_double(parts[static_cast<std::size_t>(i)], "lambda");
    }
    return spec;
}

// ---- config overlay ----

// Fills option values from the config file wherever the command line left
// them untouched.
class ConfigOverlay {
  public:
    ConfigOverlay(CLI::App* sub,
                  const std::map<std::string, std::vector<std::string>>& cfg)
        : sub_(sub), cfg_(cfg) {}

    void number(const char* flag, const char* key, double& target) const {
        if (const std::string* raw = pick(flag, key)) {
            target = parse_double(*raw, key);
        }
    }

    void count(const char* flag, const char* key, long& target) const {
        if (const std::string* raw = pick(flag, key)) {
            target = parse_long(*raw, key);
        }
    }

    void count(const char* flag, const char* key, int& target) const {
        if (const std::string* raw = pick(flag, key)) {
            target = static_cast<int>(parse_long(*raw, key));
        }
    }

    void text(const char* flag, const char* key, std::string& target) const {
        if (const std::string* raw = pick(flag, key)) {
            target = *raw;
        }
    }

    void toggle(const char* flag, const char* key, bool& target) const {
        if (const std::string* raw = pick(flag, key)) {
            target = parse_bool(*raw, key);
        }
    }

    void numbers(const char* flag, const char* key,
                 std::vector<double>& target) const {
        const std::vector<std::string>* lines = pick_all(flag, key);
        if (!lines) {
            return;
        }
        target.clear();
        for (const std::string& line : *lines) {
            for (const std::string& part : split_commas(line)) {
                target.push_back(parse_double(part, key));
            }
        }
    }

    void texts(const char* flag, const char* key,
               std::vector<std::string>& target) const {
        const std::vector<std::string>* lines = pick_all(flag, key);
        if (!lines) {
            return;
        }
        target = *lines;
    }

  private:
    bool untouched(const char* flag) const {
        const CLI::Option* opt = sub_->get_option_no_throw(flag);
        return opt != nullptr && opt->count() == 0;
    }

    const std::string* pick(const char* flag, const char* key) const {
        if (!untouched(flag)) {
            return nullptr;
        }
        const auto found = cfg_.find(key);
        if (found == cfg_.end() || found->second.empty()) {
            return nullptr;
        }
        return &found->second.back();
    }

    const std::vector<std::string>* pick_all(const char* flag,
                                             const char* key) const {
        if (!untouched(flag)) {
            return nullptr;
        }
        const auto found = cfg_.find(key);
        if (found == cfg_.end() || found->second.empty()) {
            return nullptr;
        }
        return &found->second;
    }

    CLI::App* sub_;
    const std::map<std::string, std::vector<std::string>>& cfg_;
};

void apply_overlay(CLI::App* sub, CommonOpts& c, ExtraOpts& x) {
    if (c.config_path.empty()) {
        return;
    }
    const auto cfg = qb::load_config(c.config_path);
    const ConfigOverlay ov(sub, cfg);
    ov.number("--omega-a", "omega_a", c.omega_a);
    ov.number("--omega-b", "omega_b", c.omega_b);
    ov.number("--eta-g2", "eta_g2", c.eta_g2);
    ov.number("--beta", "beta", c.beta);
    ov.number("--omega-c", "omega_c", c.omega_c);
    ov.number("--tf", "tf", c.tf);
    ov.count("--steps", "steps", c.steps);
    ov.text("--variant", "variant", c.variant);
    ov.text("--ordering", "ordering", c.ordering);
    ov.text("--lambda", "lambda", c.lambda);
    ov.text("--format", "format", c.format);
    ov.text("--out", "out", c.out);
    ov.count("--workers", "workers", c.workers);
    ov.toggle("--phases", "phases", c.phases);
    ov.toggle("--cross-coupling", "cross_coupling", c.cross);
    if (sub->get_name() == "eigen") {
        ov.count("--samples", "samples", x.eigen_samples);
    }
    if (sub->get_name() == "spectral-density") {
        ov.count("--samples", "samples", x.spd_samples);
    }
    ov.number("--omega-min", "omega_min", x.omega_min);
    ov.number("--omega-max", "omega_max", x.omega_max);
    ov.number("--s", "s", x.s_value);
    ov.numbers("--tf-grid", "tf_grid", x.tf_grid);
    ov.number("--tf-min", "tf_min", x.tf_min);
    ov.number("--tf-max", "tf_max", x.tf_max);
    ov.count("--tf-points", "tf_points", x.tf_points);
    ov.toggle("--refine", "refine", x.refine);
    ov.texts("--omega-pair", "omega_pair", x.pairs);
    ov.numbers("--coupling", "coupling", x.couplings);
    ov.numbers("--beta-grid", "beta_grid", x.betas);
}

// ---- domain assembly ----

qb::DriveSchedule make_sched(const CommonOpts& c) {
    qb::DriveSchedule sched;
    sched.omega_a = c.omega_a;
    sched.omega_b = c.omega_b;
    sched.ordering = c.ordering == "reversed" ? qb::Ordering::Reversed
                                              : qb::Ordering::Charge;
    return sched;
}

qb::BathSpec make_bath(const CommonOpts& c) {
    qb::BathSpec bath;
    bath.eta_g2 = c.eta_g2;
    bath.beta = c.beta;
    bath.omega_c = c.omega_c;
    bath.cross_coupling = c.cross;
    return bath;
}

qb::GeneratorOptions make_gen(const CommonOpts& c) {
    qb::GeneratorOptions gen;
    gen.variant = c.variant == "adiabatic" ? qb::Variant::AdiabaticLimit
                                           : qb::Variant::Full;
    gen.phases = c.phases;
    return gen;
}

qb::SweepConfig make_sweep_config(const CommonOpts& c, const ExtraOpts& x) {
    qb::SweepConfig config;
    config.sched = make_sched(c);
    config.bath = make_bath(c);
    config.battery = parse_lambda(c.lambda);
    config.gen = make_gen(c);
    config.tf = c.tf;
    config.steps = c.steps;
    config.workers = c.workers;
    config.refine = x.refine;
    return config;
}

std::vector<double> make_tf_grid(const ExtraOpts& x) {
    if (!x.tf_grid.empty()) {
        return x.tf_grid;
    }
    return qb::log_grid(x.tf_min, x.tf_max, x.tf_points);
}

// ---- subcommand bodies ----

std::string run_eigen(const CommonOpts& c, const ExtraOpts& x, Format fmt) {
    const qb::DriveSchedule sched = make_sched(c);
    const std::vector<qb::EigenRow> rows =
        qb::eigen_table(sched, x.eigen_samples);
    std::ostringstream buf;
    qb::write_eigen(buf, sched, rows, fmt);
    return buf.str();
}

std::string run_spectral(const CommonOpts& c, const ExtraOpts& x, Format fmt) {
    const qb::BathSpec bath = make_bath(c);
    const std::vector<qb::SpectralRow> rows =
        qb::spectral_table(bath, x.omega_min, x.omega_max, x.spd_samples);
    std::ostringstream buf;
    qb::write_spectral(buf, bath, rows, fmt);
    return buf.str();
}

std::string run_rates(const CommonOpts& c, const ExtraOpts& x, Format fmt) {
    const qb::DriveSchedule sched = make_sched(c);
    const qb::BathSpec bath = make_bath(c);
    const qb::RateSet rates = qb::rate_set(bath, sched, x.s_value);
    std::ostringstream buf;
    qb::write_rates(buf, sched, bath, rates, fmt);
    return buf.str();
}

std::string run_evolve(const CommonOpts& c, Format fmt) {
    const qb::DriveSchedule sched = make_sched(c);
    const qb::BathSpec bath = make_bath(c);
    const qb::BatterySpec battery = parse_lambda(c.lambda);
    qb::EvolveOptions opts;
    opts.steps = c.steps;
    opts.gen = make_gen(c);
    const qb::Trajectory traj =
        qb::evolve(sched, bath, c.tf, qb::initial_dark_state(), opts);
    const std::vector<qb::ObservableRecord> recs =
        qb::record(traj, sched, bath, battery);
    std::ostringstream buf;
    qb::write_trajectory(buf, traj, recs, sched, bath, fmt);
    return buf.str();
}

std::string run_distance(const CommonOpts& c, const ExtraOpts& x, Format fmt) {
    const qb::DistanceTable table = qb::distance_trace(make_sweep_config(c, x));
    std::ostringstream buf;
    qb::write_distance(buf, table, fmt);
    return buf.str();
}

std::string run_sweep_tf(const CommonOpts& c, const ExtraOpts& x, Format fmt) {
    qb::SweepConfig config = make_sweep_config(c, x);
    config.tf_grid = make_tf_grid(x);
    for (const std::string& pair : x.pairs) {
        config.omega_pairs.push_back(parse_pair(pair));
    }
    const qb::SweepResult result = qb::sweep_tf(config);
    std::ostringstream buf;
    qb::write_sweep(buf, result, fmt);
    return buf.str();
}

std::string run_sweep_coupling(const CommonOpts& c, const ExtraOpts& x,
                               Format fmt) {
    qb::SweepConfig config = make_sweep_config(c, x);
    config.tf_grid = make_tf_grid(x);
    config.couplings = x.couplings;
    const qb::SweepResult result = qb::sweep_coupling(config);
    std::ostringstream buf;
    qb::write_sweep(buf, result, fmt);
    return buf.str();
}

std::string run_sweep_temp(const CommonOpts& c, const ExtraOpts& x,
                           Format fmt) {
    qb::SweepConfig config = make_sweep_config(c, x);
    config.betas = x.betas;
    if (config.betas.empty()) {
        config.betas = {5.0 / 2.6, 1.0 / 2.6, 1.0 / (5.0 * 2.6)};
    }
    const qb::SweepResult result = qb::sweep_temperature(config);
    std::ostringstream buf;
    qb::write_sweep(buf, result, fmt);
    return buf.str();
}

void deliver(const CommonOpts& c, const std::string& content) {
    if (c.out.empty()) {
        std::cout << content;
        return;
    }
    qb::write_file(c.out, content);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Simulates slow-ramp charging of a dissipative three-level battery "
        "and sweeps for optimal charging times"};
    app.require_subcommand(1);

    CommonOpts c;
    ExtraOpts x;

    CLI::App* eigen =
        app.add_subcommand("eigen", "Instantaneous eigensystem table over s");
    add_common(eigen, c);
    eigen->add_option("--samples", x.eigen_samples, "Grid points in s");

    CLI::App* spectral = app.add_subcommand(
        "spectral-density", "Thermal decay rate over a frequency window");
    add_common(spectral, c);
    spectral->add_option("--omega-min", x.omega_min, "Window lower edge");
    spectral->add_option("--omega-max", x.omega_max, "Window upper edge");
    spectral->add_option("--samples", x.spd_samples, "Grid points in omega");

    CLI::App* rates =
        app.add_subcommand("rates", "Dissipator rate coefficients at one s");
    add_common(rates, c);
    rates->add_option("--s", x.s_value, "Scaled time in [0,1]");

    CLI::App* evolve =
        app.add_subcommand("evolve", "Single trajectory with observables");
    add_common(evolve, c);

    CLI::App* sweep_tf = app.add_subcommand(
        "sweep-tf", "Scan total evolution times for the charging optimum");
    add_common(sweep_tf, c);
    add_tf_grid(sweep_tf, x);
    sweep_tf->add_option("--omega-pair", x.pairs,
                         "Amplitude pair a,b (repeatable)");

    CLI::App* sweep_coupling = app.add_subcommand(
        "sweep-coupling", "Optimal charging time per coupling strength");
    add_common(sweep_coupling, c);
    add_tf_grid(sweep_coupling, x);
    sweep_coupling->add_option("--coupling", x.couplings,
                               "Coupling grid (repeatable)")
        ->delimiter(',');

    CLI::App* sweep_temp = app.add_subcommand(
        "sweep-temp", "Final observables at fixed tf across temperatures");
    add_common(sweep_temp, c);
    sweep_temp->add_option("--beta-grid", x.betas,
                           "Inverse temperature grid (repeatable)")
        ->delimiter(',');

    CLI::App* distance = app.add_subcommand(
        "distance", "Trace distance to the instantaneous Gibbs state");
    add_common(distance, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        apply_overlay(sub, c, x);
        const Format fmt = qb::parse_format(c.format);
        std::string content;
        if (sub == eigen) {
            content = run_eigen(c, x, fmt);
        } else if (sub == spectral) {
            content = run_spectral(c, x, fmt);
        } else if (sub == rates) {
            content = run_rates(c, x, fmt);
        } else if (sub == evolve) {
            content = run_evolve(c, fmt);
        } else if (sub == sweep_tf) {
            content = run_sweep_tf(c, x, fmt);
        } else if (sub == sweep_coupling) {
            content = run_sweep_coupling(c, x, fmt);
        } else if (sub == sweep_temp) {
            content = run_sweep_temp(c, x, fmt);
        } else {
            content = run_distance(c, x, fmt);
        }
        deliver(c, content);
        return 0;
    } catch (const qb::IntegrationError& err) {
        std::cerr << "integration error: " << err.what() << '\n';
        return 2;
    } catch (const qb::IoError& err) {
        std::cerr << "io error: " << err.what() << '\n';
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}
