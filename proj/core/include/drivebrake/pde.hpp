#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drivebrake/errors.hpp"
#include "drivebrake/model.hpp"
#include "drivebrake/tridiagonal.hpp"

namespace drivebrake {

struct FieldState {
    std::vector<double> u;
    std::vector<double> v;
    std::optional<std::vector<double>> n;
    double t{0.0};
};

enum class Field { U, V };

// Sets `field` to max(field, level) on nodes with x_lo <= x <= x_hi at release_time.
struct Block {
    Field field{Field::U};
    double x_lo{0.0};
    double x_hi{0.0};
    double level{0.0};
    double release_time{0.0};
};

struct InitialCondition {
    std::vector<Block> blocks;

    // Drive block at t=0, brake block released at t=80 on the left part of it.
    static InitialCondition figure_protocol(const Grid1D& g);
    // Both blocks at t=0, node ranges of the reference script.
    static InitialCondition appendix(const Grid1D& g);
};

// Writes a block into the fields. The released field keeps its level and the
// other field is reduced where the pair would leave T.
void apply_block(FieldState& s, const Grid1D& g, const Block& b);

// Advection velocity 2 d/dx(log n) at each node (centered, zero at the ends).
std::vector<double> drift_velocity(std::span<const double> n, const Grid1D& g);

enum class DriftProfile { None, Tanh, Exp };

struct DriftSpec {
    DriftProfile profile{DriftProfile::None};
    double n_left{1.0};
    double n_right{1.0};
    double center{640.0};
    double width{50.0};
    double slope{0.0};
};

// Prescribed n(x) for a profile; nullopt for DriftProfile::None.
std::optional<std::vector<double>> prescribed_n(const DriftSpec& d, const Grid1D& g);

struct StepOptions {
    bool null_reaction{false};  // diffusion (and drift) only
};

struct StepWorkspace {
    std::vector<double> ru, rv, rn, drift;
};

// One semi-implicit step in place. `velocity` is the drift for Tanaka runs
// with a prescribed n; in Nagylaki runs it is rebuilt from the evolving n.
void step_in_place(FieldState& s, const Params& p, const Grid1D& g, const DiffusionOperator& op,
                   const std::vector<double>* velocity, StepWorkspace& ws, const StepOptions& opt = {});

FieldState step(const FieldState& s, const Params& p, const Grid1D& g, const DiffusionOperator& op,
                const std::vector<double>* velocity = nullptr, const StepOptions& opt = {});

double triangle_overshoot(const FieldState& s);

// Largest infinity norm of the reaction Jacobian over a lattice on T.
double max_reaction_slope(const Params& p, int lattice_n = 41);
// Accuracy warning for the explicit reaction: dt * max_reaction_slope > 0.5.
bool stability_advisory(const Params& p, const Grid1D& g);

struct Snapshot {
    double t{0.0};
    std::vector<double> x, u, v;
    std::optional<std::vector<double>> n;
};

// Row-major space-time samples, one row per saved time.
struct Raster {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> u, v;
    std::vector<double> sup_u, sup_v;  // over the full grid
    std::vector<double> log_mean_n;    // Nagylaki runs only

    std::size_t rows() const { return times.size(); }
    std::size_t cols() const { return x.size(); }
    std::span<const double> u_row(std::size_t r) const { return {u.data() + r * cols(), cols()}; }
    std::span<const double> v_row(std::size_t r) const { return {v.data() + r * cols(), cols()}; }
};

struct RunOptions {
    std::vector<double> snapshot_times;
    double raster_interval{1.0};
    std::size_t raster_stride{0};  // 0 picks a stride giving at most ~4000 columns
    StepOptions step;
};

struct RunResult {
    FieldState final;
    std::vector<Snapshot> snapshots;
    Raster raster;
    double max_overshoot{0.0};
    double runtime_s{0.0};
};

RunResult run(const Params& p, const Grid1D& g, const InitialCondition& ic,
              const std::optional<std::vector<double>>& n_field = std::nullopt, const RunOptions& opt = {});

RunResult run_nagylaki(const Params& p, const Grid1D& g, const InitialCondition& ic, std::vector<double> n0,
                       const RunOptions& opt = {});

struct FrontTrack {
    std::vector<double> times;
    std::vector<std::optional<double>> x_u, x_v;
    std::optional<double> speed_u, speed_v;
};

std::optional<double> rightmost_crossing(std::span<const double> x, std::span<const double> f, double level);
std::optional<double> least_squares_slope(std::span<const double> t, std::span<const std::optional<double>> y,
                                          double t_lo, double t_hi);

FrontTrack track_fronts(const Raster& r, double level_u, double level_v, double fit_t_lo, double fit_t_hi);

// --- output formats ---------------------------------------------------------

std::string snapshot_csv(const Snapshot& s);
std::string snapshot_filename(double t);
std::string raster_csv(const Raster& r, Field f);
std::string raster_pgm(const Raster& r, Field f);
std::string fronts_csv(const FrontTrack& f);

}  // namespace drivebrake
