#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "drivebrake/model.hpp"
#include "drivebrake/ode.hpp"
#include "drivebrake/pde.hpp"

namespace drivebrake {

enum class Outcome { Coextinction = 0, JointInvasion = 1, DrivePersistsBrakeDies = 2, Undecided = 3 };

std::string to_string(Outcome o);

struct Thresholds {
    double eps_ext{0.01};
    double persist_v{0.05};
    double trailing_window{200.0};  // space units behind the u-front
    double level_u{0.1};
    double level_v{0.1};
};

struct OutcomeRecord {
    Params params{0.5, 0.0, 0.0};
    Outcome outcome{Outcome::Undecided};
    double sup_u_final{0.0};
    double sup_v_final{0.0};
    std::optional<double> u_speed;
    std::optional<double> v_speed;
    double runtime_s{0.0};
    Grid1D grid;
    double max_overshoot{0.0};
    std::string error;  // non-empty when the run failed

    int outcome_code() const { return error.empty() ? int(outcome) : 9; }
};

OutcomeRecord classify_run(const Params& p, const Grid1D& g, const RunResult& run, const Thresholds& th = {});

struct Scenario {
    Params params{0.5, 0.0, 0.0};
    Grid1D grid;
    InitialCondition ic;
    std::optional<std::vector<double>> n_field;  // prescribed n (Tanaka)
    std::optional<double> n0_level;              // initial n (Nagylaki)
    RunOptions run;
    Thresholds thresholds;
};

Scenario figure_scenario(const Params& p, const Grid1D& g = Grid1D::desk());

struct ScenarioRun {
    RunResult run;
    OutcomeRecord record;
    FrontTrack fronts;
};

ScenarioRun run_scenario(const Scenario& s);

struct SweepResult {
    std::vector<double> a_grid;
    std::vector<double> b_grid;
    std::vector<OutcomeRecord> records;  // a-major, b-minor
    // Per a > 1/2: largest b of the run of Coextinction cells starting at the smallest b.
    std::vector<std::optional<double>> coextinction_boundary;

    const OutcomeRecord& at(std::size_t ia, std::size_t ib) const { return records[ia * b_grid.size() + ib]; }
};

SweepResult sweep(const std::vector<double>& a_grid, const std::vector<double>& b_grid, double h,
                  const Scenario& templ, int jobs);

std::string sweep_csv(const SweepResult& s);
std::string sweep_matrix_csv(const SweepResult& s);
std::string outcome_record_text(const OutcomeRecord& r);

struct SpeedMeasurement {
    std::optional<double> measured;
    double predicted{0.0};
    double runtime_s{0.0};
};

// Drive alone (no brake) released as the usual block; u-front speed vs 2 sqrt(1-2a).
SpeedMeasurement measure_drive_speed(double a, const Grid1D& g = Grid1D::desk());
// Drive at 0.99 everywhere, brake 0.01 on x <= 64; v-front speed vs c_brake_into_drive.
SpeedMeasurement measure_brake_speed(double a, double b, const Grid1D& g = Grid1D::desk());

enum class FigureId { Fig4A, Fig4B, Fig5, Fig6, Fig3A, Fig3B, Fig7A, Fig7B };

std::string to_string(FigureId f);
std::optional<FigureId> parse_figure_id(const std::string& s);

struct PhaseSummary {
    Params params{0.5, 0.0, 0.0};
    std::uint64_t seed{0};
    double t_end{0.0};
    double tail_fraction{0.5};
    std::vector<FrequencyPair> starts;
    std::vector<TrajectoryClass> classes;
    std::vector<Equilibrium> equilibria;
};

struct PhaseOptions {
    int n_starts{10};
    double t_end{20000.0};
    double tail_fraction{0.5};
    double sample_interval{0.1};
    OdeOptions ode;
    std::uint64_t seed{20240601};
    int jobs{1};
};

// Integrates n seeded random interior starts and classifies each tail.
PhaseSummary run_phase(const Params& p, const PhaseOptions& opt, std::vector<Trajectory>* keep = nullptr);
std::string phase_summary_text(const PhaseSummary& s);

struct ReproduceOptions {
    std::filesystem::path out_dir;  // empty: no files
    Grid1D grid{Grid1D::desk()};
    std::uint64_t seed{20240601};
    int jobs{1};
};

struct ReproductionSummary {
    FigureId figure{FigureId::Fig6};
    std::string expected;
    std::string observed;
    bool pass{false};
    std::vector<std::filesystem::path> files;
    std::optional<OutcomeRecord> pde_record;
    std::optional<PhaseSummary> phase;
    double max_overshoot{0.0};

    std::string outcome_line() const;
};

ReproductionSummary reproduce(FigureId f, const ReproduceOptions& opt = {});

// Writes snapshots, rasters (CSV and PGM) and fronts of a PDE run into dir.
std::vector<std::filesystem::path> write_run_files(const std::filesystem::path& dir, const ScenarioRun& r,
                                                   bool pgm = true);

}  // namespace drivebrake
