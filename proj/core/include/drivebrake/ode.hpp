#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "drivebrake/analysis.hpp"
#include "drivebrake/errors.hpp"
#include "drivebrake/model.hpp"

namespace drivebrake {

class StepSizeUnderflow : public NumericalError {
public:
    StepSizeUnderflow(double t, FrequencyPair state);
    double time() const { return t_; }
    FrequencyPair state() const { return state_; }

private:
    double t_;
    FrequencyPair state_;
};

struct TrajectoryClass {
    enum class Kind { ConvergesTo, SustainedOscillation, CornerExtinction, Undecided };
    Kind kind{Kind::Undecided};
    std::optional<FrequencyPair> point;
};

std::string to_string(const TrajectoryClass& c);

struct Trajectory {
    std::vector<double> times;
    std::vector<FrequencyPair> states;
    // (ln(u/o), ln(v/o)) at the same samples; finite where u or v underflow.
    std::vector<Vec2> log_ratio;
    TrajectoryClass classification;
};

struct OdeOptions {
    double dt_max{0.01};
    double rtol{1e-9};
    double atol{1e-12};
    double sample_interval{0.0};  // 0 stores every accepted step
    double min_step{1e-14};
};

// Dormand-Prince 5(4) in log-ratio coordinates x = ln(u/o), y = ln(v/o),
// o = 1-u-v. Starts on an edge (u = 0 or v = 0) keep that edge exactly.
Trajectory integrate_ode(const Params& p, FrequencyPair s0, double t_end, const OdeOptions& opt = {});

struct ClassifyOptions {
    double converge_tol{1e-3};
    double oscillation_diameter{1e-2};
    double turn_hysteresis{1e-3};      // on u, v when log_ratio is absent
    double log_turn_hysteresis{0.5};   // on the log-ratio coordinates
    int min_turns{2};
    // Oscillation is judged over this trailing share of the run; a heteroclinic
    // approach slows geometrically, so the convergence tail is too short for it.
    double recurrence_fraction{0.9};
    std::size_t min_tail_samples{100};
};

TrajectoryClass classify_trajectory(const Trajectory& traj, const std::vector<Equilibrium>& eqs,
                                    double tail_fraction = 0.5, const ClassifyOptions& opt = {});

std::vector<FrequencyPair> random_interior_starts(int n, std::uint64_t seed);

struct PersistenceResult {
    bool persistent{false};
    std::uint64_t seed{0};
    std::vector<double> tail_max;  // max of u+v over the final checking window, per start
};

// Each start is integrated to t_end; if u+v stayed below the threshold over
// [t_end/2, t_end] the run is extended up to max_extension * t_end, looking
// for a later excursion above it.
PersistenceResult persistence_check(const Params& p, int n_starts, double t_end, std::uint64_t seed,
                                    double threshold = 1e-3, double max_extension = 10.0);

// Total signed angle swept by the trajectory around center.
double accumulated_winding(const Trajectory& traj, FrequencyPair center);

std::vector<Trajectory> integrate_many(const Params& p, const std::vector<FrequencyPair>& starts, double t_end,
                                       const OdeOptions& opt, int jobs);

std::string trajectory_csv(const Trajectory& traj);

}  // namespace drivebrake
