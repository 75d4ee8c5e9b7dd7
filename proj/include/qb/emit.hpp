// emit.hpp - deterministic CSV/JSON table writers, file sink, and flat
// key=value config loading

#pragma once

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qb/bath.hpp"
#include "qb/evolve.hpp"
#include "qb/observables.hpp"
#include "qb/schedule.hpp"
#include "qb/sweep.hpp"

namespace qb {

class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class Format { Csv, Json };

Format parse_format(const std::string& name);

// %.12g rendering shared by every CSV column.
std::string format_number(double value);

// RFC 4180 quoting applied only when the field needs it.
std::string csv_field(const std::string& raw);

void write_sweep(std::ostream& out, const SweepResult& result, Format format);

void write_trajectory(std::ostream& out, const Trajectory& traj,
                      const std::vector<ObservableRecord>& recs,
                      const DriveSchedule& sched, const BathSpec& bath,
                      Format format);

void write_distance(std::ostream& out, const DistanceTable& table,
                    Format format);

struct EigenRow {
    double s{0.0};
    double a_val{0.0};
    double b_val{0.0};
    double delta{0.0};
    Vec3 eps{Vec3::Zero()};
    Mat3 vectors{Mat3::Zero()};
    double mixing{0.0};  // nonadiabatic coupling at s
};

std::vector<EigenRow> eigen_table(const DriveSchedule& sched, int samples);

void write_eigen(std::ostream& out, const DriveSchedule& sched,
                 const std::vector<EigenRow>& rows, Format format);

struct SpectralRow {
    double omega{0.0};
    double rate{0.0};
};

std::vector<SpectralRow> spectral_table(const BathSpec& bath, double omega_min,
                                        double omega_max, int samples);

void write_spectral(std::ostream& out, const BathSpec& bath,
                    const std::vector<SpectralRow>& rows, Format format);

void write_rates(std::ostream& out, const DriveSchedule& sched,
                 const BathSpec& bath, const RateSet& rates, Format format);

// Writes the whole payload or throws IoError with the path in the message.
void write_file(const std::string& path, const std::string& content);

// Flat key=value lines, '#' comments, repeated keys append in file order.
std::map<std::string, std::vector<std::string>> load_config(
    const std::string& path);

}  // namespace qb
