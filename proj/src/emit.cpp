// emit.cpp - CSV/JSON serialization of sweep, trajectory, distance, spectrum,
// eigensystem, and rate tables, plus the flat config reader

#include "qb/emit.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qb {

using ordered_json = nlohmann::ordered_json;

namespace {

// ---- field rendering ----

void put_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << csv_field(fields[i]);
    }
    out << '\n';
}

std::string opt_field(const std::optional<double>& value) {
    return value ? format_number(*value) : std::string{};
}

std::string flag_field(bool value) { return value ? "1" : "0"; }

ordered_json opt_json(const std::optional<double>& value) {
    if (value) {
        return *value;
    }
    return nullptr;
}

ordered_json run_parameters(const DriveSchedule& sched, const BathSpec& bath,
                            Variant variant, double tf, long steps) {
    ordered_json p;
    p["omega_a"] = sched.omega_a;
    p["omega_b"] = sched.omega_b;
    p["eta_g2"] = bath.eta_g2;
    p["beta"] = bath.beta;
    p["omega_c"] = bath.omega_c;
    p["ordering"] = ordering_name(sched.ordering);
    p["variant"] = variant_name(variant);
    p["tf"] = tf;
    p["steps"] = steps;
    return p;
}

std::vector<std::string> run_fields(const DriveSchedule& sched,
                                    const BathSpec& bath, Variant variant,
                                    double tf, long steps) {
    return {format_number(sched.omega_a), format_number(sched.omega_b),
            format_number(bath.eta_g2),  format_number(bath.beta),
            format_number(bath.omega_c), ordering_name(sched.ordering),
            variant_name(variant),       format_number(tf),
            std::to_string(steps)};
}

const char* kRunHeader =
    "omega_a,omega_b,eta_g2,beta,omega_c,ordering,variant,tf,steps";

}  // namespace

Format parse_format(const std::string& name) {
    if (name == "csv") {
        return Format::Csv;
    }
    if (name == "json") {
        return Format::Json;
    }
    throw std::invalid_argument("unknown format: " + name);
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string csv_field(const std::string& raw) {
    const bool needs_quotes =
        raw.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) {
        return raw;
    }
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

// ---- sweep tables ----

void write_sweep(std::ostream& out, const SweepResult& result, Format format) {
    if (format == Format::Csv) {
        out << "omega_a,omega_b,eta_g2,beta,omega_c,ordering,variant,tf,"
               "tf_dimensionless,steps,dark_population,stored_energy,"
               "ergotropy,efficiency,distance_to_gibbs,tf_gap_bound,"
               "tf_bath_bound,optimal,optimal_energy,pair_optimal,error\n";
        for (const SweepRow& row : result.rows) {
            put_row(out,
                    {format_number(row.omega_a), format_number(row.omega_b),
                     format_number(row.eta_g2), format_number(row.beta),
                     format_number(row.omega_c), ordering_name(row.ordering),
                     variant_name(row.variant), format_number(row.tf),
                     format_number(row.tf_dimensionless),
                     std::to_string(row.steps),
                     format_number(row.dark_population),
                     format_number(row.stored_energy),
                     format_number(row.ergotropy), opt_field(row.efficiency),
                     format_number(row.distance_to_gibbs),
                     format_number(row.tf_gap_bound),
                     format_number(row.tf_bath_bound), flag_field(row.optimal),
                     flag_field(row.optimal_energy),
                     flag_field(row.pair_optimal), row.error});
        }
        return;
    }
    ordered_json doc;
    doc["rows"] = ordered_json::array();
    for (const SweepRow& row : result.rows) {
        ordered_json r;
        r["omega_a"] = row.omega_a;
        r["omega_b"] = row.omega_b;
        r["eta_g2"] = row.eta_g2;
        r["beta"] = row.beta;
        r["omega_c"] = row.omega_c;
        r["ordering"] = ordering_name(row.ordering);
        r["variant"] = variant_name(row.variant);
        r["tf"] = row.tf;
        r["tf_dimensionless"] = row.tf_dimensionless;
        r["steps"] = row.steps;
        r["dark_population"] = row.dark_population;
        r["stored_energy"] = row.stored_energy;
        r["ergotropy"] = row.ergotropy;
        r["efficiency"] = opt_json(row.efficiency);
        r["distance_to_gibbs"] = row.distance_to_gibbs;
        r["tf_gap_bound"] = row.tf_gap_bound;
        r["tf_bath_bound"] = row.tf_bath_bound;
        r["optimal"] = row.optimal;
        r["optimal_energy"] = row.optimal_energy;
        r["pair_optimal"] = row.pair_optimal;
        r["error"] = row.error;
        doc["rows"].push_back(std::move(r));
    }
    doc["optimal_index"] = result.optimal_index;
    doc["optimal_energy_index"] = result.optimal_energy_index;
    out << doc.dump(2) << '\n';
}

// ---- trajectory table ----

void write_trajectory(std::ostream& out, const Trajectory& traj,
                      const std::vector<ObservableRecord>& recs,
                      const DriveSchedule& sched, const BathSpec& bath,
                      Format format) {
    if (recs.size() != traj.samples.size()) {
        throw std::invalid_argument(
            "trajectory and observable record counts differ");
    }
    if (format == Format::Csv) {
        out << kRunHeader << ",s";
        for (int i = 1; i <= 3; ++i) {
            for (int j = 1; j <= 3; ++j) {
                out << ",rho_" << i << j << "_re,rho_" << i << j << "_im";
            }
        }
        out << ",dark_population,stored_energy,ergotropy,efficiency,"
               "distance_to_gibbs\n";
        for (std::size_t k = 0; k < traj.samples.size(); ++k) {
            std::vector<std::string> fields =
                run_fields(sched, bath, traj.variant, traj.tf, traj.steps);
            fields.push_back(format_number(traj.samples[k].s));
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    fields.push_back(
                        format_number(traj.samples[k].rho(i, j).real()));
                    fields.push_back(
                        format_number(traj.samples[k].rho(i, j).imag()));
                }
            }
            fields.push_back(format_number(recs[k].dark_population));
            fields.push_back(format_number(recs[k].stored_energy));
            fields.push_back(format_number(recs[k].ergotropy));
            fields.push_back(opt_field(recs[k].efficiency));
            fields.push_back(format_number(recs[k].distance_to_gibbs));
            put_row(out, fields);
        }
        return;
    }
    ordered_json doc;
    doc["parameters"] =
        run_parameters(sched, bath, traj.variant, traj.tf, traj.steps);
    doc["rows"] = ordered_json::array();
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        ordered_json r;
        r["s"] = traj.samples[k].s;
        ordered_json re = ordered_json::array();
        ordered_json im = ordered_json::array();
        for (int i = 0; i < 3; ++i) {
            ordered_json re_row = ordered_json::array();
            ordered_json im_row = ordered_json::array();
            for (int j = 0; j < 3; ++j) {
                re_row.push_back(traj.samples[k].rho(i, j).real());
                im_row.push_back(traj.samples[k].rho(i, j).imag());
            }
            re.push_back(std::move(re_row));
            im.push_back(std::move(im_row));
        }
        r["rho_re"] = std::move(re);
        r["rho_im"] = std::move(im);
        r["dark_population"] = recs[k].dark_population;
        r["stored_energy"] = recs[k].stored_energy;
        r["ergotropy"] = recs[k].ergotropy;
        r["efficiency"] = opt_json(recs[k].efficiency);
        r["distance_to_gibbs"] = recs[k].distance_to_gibbs;
        doc["rows"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
}

// ---- distance table ----

void write_distance(std::ostream& out, const DistanceTable& table,
                    Format format) {
    const DriveSchedule& sched = table.config.sched;
    const BathSpec& bath = table.config.bath;
    if (format == Format::Csv) {
        out << kRunHeader << ",s,distance\n";
        for (const DistanceRow& row : table.rows) {
            std::vector<std::string> fields =
                run_fields(sched, bath, table.config.gen.variant,
                           table.config.tf, table.steps);
            fields.push_back(format_number(row.s));
            fields.push_back(format_number(row.distance));
            put_row(out, fields);
        }
        return;
    }
    ordered_json doc;
    doc["parameters"] = run_parameters(sched, bath, table.config.gen.variant,
                                       table.config.tf, table.steps);
    doc["rows"] = ordered_json::array();
    for (const DistanceRow& row : table.rows) {
        ordered_json r;
        r["s"] = row.s;
        r["distance"] = row.distance;
        doc["rows"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
}

// ---- eigensystem table ----

std::vector<EigenRow> eigen_table(const DriveSchedule& sched, int samples) {
    validate(sched);
    if (samples < 2) {
        throw std::invalid_argument("eigen table needs at least 2 samples");
    }
    std::vector<EigenRow> rows;
    rows.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double s = static_cast<double>(k) / (samples - 1);
        const Amplitudes amp = amplitudes(sched, s);
        const Eigensystem sys = eigensystem(sched, s);
        EigenRow row;
        row.s = s;
        row.a_val = amp.a;
        row.b_val = amp.b;
        row.delta = sys.delta;
        row.eps = sys.eps;
        row.vectors = sys.vectors;
        row.mixing = nonadiabatic_coupling(sched, s);
        rows.push_back(row);
    }
    return rows;
}

void write_eigen(std::ostream& out, const DriveSchedule& sched,
                 const std::vector<EigenRow>& rows, Format format) {
    if (format == Format::Csv) {
        out << "omega_a,omega_b,ordering,s,a_val,b_val,delta,eps_1,eps_2,eps_3";
        for (int i = 1; i <= 3; ++i) {
            for (int j = 1; j <= 3; ++j) {
                out << ",v_" << i << j;
            }
        }
        out << ",mixing\n";
        for (const EigenRow& row : rows) {
            std::vector<std::string> fields = {
                format_number(sched.omega_a), format_number(sched.omega_b),
                ordering_name(sched.ordering), format_number(row.s),
                format_number(row.a_val), format_number(row.b_val),
                format_number(row.delta), format_number(row.eps(0)),
                format_number(row.eps(1)), format_number(row.eps(2))};
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    fields.push_back(format_number(row.vectors(i, j)));
                }
            }
            fields.push_back(format_number(row.mixing));
            put_row(out, fields);
        }
        return;
    }
    ordered_json doc;
    ordered_json p;
    p["omega_a"] = sched.omega_a;
    p["omega_b"] = sched.omega_b;
    p["ordering"] = ordering_name(sched.ordering);
    doc["parameters"] = std::move(p);
    doc["rows"] = ordered_json::array();
    for (const EigenRow& row : rows) {
        ordered_json r;
        r["s"] = row.s;
        r["a_val"] = row.a_val;
        r["b_val"] = row.b_val;
        r["delta"] = row.delta;
        r["eps"] = {row.eps(0), row.eps(1), row.eps(2)};
        ordered_json v = ordered_json::array();
        for (int i = 0; i < 3; ++i) {
            v.push_back({row.vectors(i, 0), row.vectors(i, 1),
                         row.vectors(i, 2)});
        }
        r["vectors"] = std::move(v);
        r["mixing"] = row.mixing;
        doc["rows"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
}

// ---- spectral density table ----

std::vector<SpectralRow> spectral_table(const BathSpec& bath, double omega_min,
                                        double omega_max, int samples) {
    validate(bath);
    if (samples < 2) {
        throw std::invalid_argument("spectral table needs at least 2 samples");
    }
    if (!(omega_min < omega_max) || !std::isfinite(omega_min) ||
        !std::isfinite(omega_max)) {
        throw std::invalid_argument("spectral range must be finite with "
                                    "omega_min < omega_max");
    }
    std::vector<SpectralRow> rows;
    rows.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double omega =
            omega_min + (omega_max - omega_min) * k / (samples - 1);
        rows.push_back(SpectralRow{omega, spectral_rate(bath, omega)});
    }
    return rows;
}

void write_spectral(std::ostream& out, const BathSpec& bath,
                    const std::vector<SpectralRow>& rows, Format format) {
    if (format == Format::Csv) {
        out << "eta_g2,beta,omega_c,omega,rate\n";
        for (const SpectralRow& row : rows) {
            put_row(out, {format_number(bath.eta_g2), format_number(bath.beta),
                          format_number(bath.omega_c),
                          format_number(row.omega), format_number(row.rate)});
        }
        return;
    }
    ordered_json doc;
    ordered_json p;
    p["eta_g2"] = bath.eta_g2;
    p["beta"] = bath.beta;
    p["omega_c"] = bath.omega_c;
    doc["parameters"] = std::move(p);
    doc["rows"] = ordered_json::array();
    for (const SpectralRow& row : rows) {
        ordered_json r;
        r["omega"] = row.omega;
        r["rate"] = row.rate;
        doc["rows"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
}

// ---- rate table ----

void write_rates(std::ostream& out, const DriveSchedule& sched,
                 const BathSpec& bath, const RateSet& rates, Format format) {
    if (format == Format::Csv) {
        out << "omega_a,omega_b,eta_g2,beta,omega_c,ordering,s,delta";
        for (int i = 1; i <= 10; ++i) {
            out << ",x" << i;
        }
        for (int i = 1; i <= 4; ++i) {
            out << ",y" << i;
        }
        out << '\n';
        std::vector<std::string> fields = {
            format_number(sched.omega_a),  format_number(sched.omega_b),
            format_number(bath.eta_g2),    format_number(bath.beta),
            format_number(bath.omega_c),   ordering_name(sched.ordering),
            format_number(rates.s),        format_number(rates.delta)};
        for (int i = 1; i <= 10; ++i) {
            fields.push_back(format_number(rates.x[static_cast<std::size_t>(i)]));
        }
        for (int i = 1; i <= 4; ++i) {
            fields.push_back(format_number(rates.y[static_cast<std::size_t>(i)]));
        }
        put_row(out, fields);
        return;
    }
    ordered_json doc;
    doc["omega_a"] = sched.omega_a;
    doc["omega_b"] = sched.omega_b;
    doc["eta_g2"] = bath.eta_g2;
    doc["beta"] = bath.beta;
    doc["omega_c"] = bath.omega_c;
    doc["ordering"] = ordering_name(sched.ordering);
    doc["s"] = rates.s;
    doc["delta"] = rates.delta;
    for (int i = 1; i <= 10; ++i) {
        doc["x" + std::to_string(i)] = rates.x[static_cast<std::size_t>(i)];
    }
    for (int i = 1; i <= 4; ++i) {
        doc["y" + std::to_string(i)] = rates.y[static_cast<std::size_t>(i)];
    }
    out << doc.dump(2) << '\n';
}

// ---- file sink ----

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out << content;
    out.close();
    if (out.fail()) {
        throw IoError("write failed for " + path);
    }
}

// ---- config loading ----

std::map<std::string, std::vector<std::string>> load_config(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path);
    }
    std::map<std::string, std::vector<std::string>> config;
    std::string line;
    long number = 0;
    auto trim = [](const std::string& text) {
        std::size_t first = 0;
        std::size_t last = text.size();
        while (first < last &&
               std::isspace(static_cast<unsigned char>(text[first]))) {
            ++first;
        }
        while (last > first &&
               std::isspace(static_cast<unsigned char>(text[last - 1]))) {
            --last;
        }
        return text.substr(first, last - first);
    };
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(number) +
                                        ": expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(number) +
                                        ": empty key");
        }
        config[key].push_back(value);
    }
    return config;
}

}  // namespace qb
