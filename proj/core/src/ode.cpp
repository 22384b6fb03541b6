#include "drivebrake/ode.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "drivebrake/io.hpp"

namespace drivebrake {

StepSizeUnderflow::StepSizeUnderflow(double t, FrequencyPair state)
    : NumericalError("ODE step size underflow at t=" + format_double(t) + " (u=" + format_double(state.u) +
                         ", v=" + format_double(state.v) + ")"),
      t_(t),
      state_(state)
{
}

std::string to_string(const TrajectoryClass& c)
{
    switch (c.kind) {
    case TrajectoryClass::Kind::ConvergesTo:
        return "ConvergesTo(" + format_double(c.point->u) + "," + format_double(c.point->v) + ")";
    case TrajectoryClass::Kind::SustainedOscillation: return "SustainedOscillation";
    case TrajectoryClass::Kind::CornerExtinction: return "CornerExtinction";
    case TrajectoryClass::Kind::Undecided: return "Undecided";
    }
    return "?";
}

namespace {

using State = std::array<double, 2>;

FrequencyPair to_frequencies(const State& z)
{
    const double m = std::max({z[0], z[1], 0.0});
    const double eu = std::exp(z[0] - m), ev = std::exp(z[1] - m), eo = std::exp(-m);
    const double s = eu + ev + eo;
    return {eu / s, ev / s};
}

State to_log_ratio(FrequencyPair s)
{
    const double o = 1 - s.u - s.v;
    return {std::log(s.u / o), std::log(s.v / o)};
}

class LogRatioIntegrator {
public:
    LogRatioIntegrator(const Params& p, FrequencyPair s0, const OdeOptions& opt)
        : p_(p), opt_(opt), z_(to_log_ratio(s0)), h_(std::min(opt.dt_max, 1e-3))
    {
        k1_ = rhs(z_);
    }

    double time() const { return t_; }
    FrequencyPair state() const { return to_frequencies(z_); }
    Vec2 log_ratio() const { return {z_[0], z_[1]}; }

    // Advances to exactly t_target, calling on_step(t, state) after every accepted step.
    template <class F>
    void advance_to(double t_target, F&& on_step)
    {
        while (t_ < t_target) {
            double h = std::min({h_, opt_.dt_max, t_target - t_});
            const bool last = h >= t_target - t_;
            for (;;) {
                if (h < opt_.min_step) throw StepSizeUnderflow(t_, state());
                State z5, k7;
                const double err = try_step(h, z5, k7);
                const FrequencyPair s = to_frequencies(z5);
                const bool in_t = in_triangle(s, 1e-9) && std::isfinite(s.u) && std::isfinite(s.v);
                if (err <= 1.0 && in_t) {
                    t_ = last ? t_target : t_ + h;
                    z_ = z5;
                    k1_ = k7;
                    const double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                    if (!last || fac < 1) h_ = h * fac;
                    on_step(t_, s);
                    break;
                }
                h *= in_t ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9) : 0.5;
            }
        }
    }

private:
    State rhs(const State& z) const
    {
        const FrequencyPair s = to_frequencies(z);
        const Vec2 g = gametes(p_, s);
        const double g0 = wildtype_gametes(p_, s);
        const double w = mean_fitness(p_, s);
        if (p_.variant() == Variant::Tanaka) return {(g.x - g0) / w, (g.y - g0) / w};
        return {p_.w_oo() * (g.x - g0), p_.w_oo() * (g.y - g0)};
    }

    double try_step(double h, State& z5, State& k7) const
    {
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                                b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                                e6 = 22.0 / 525, e7 = -1.0 / 40;

        const State& k1 = k1_;
        State y;
        auto stage = [&](auto combine) {
            for (int i = 0; i < 2; ++i) y[i] = z_[i] + h * combine(i);
            return rhs(y);
        };
        const State k2 = stage([&](int i) { return a21 * k1[i]; });
        const State k3 = stage([&](int i) { return a31 * k1[i] + a32 * k2[i]; });
        const State k4 = stage([&](int i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
        const State k5 = stage([&](int i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; });
        const State k6 =
            stage([&](int i) { return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]; });
        for (int i = 0; i < 2; ++i)
            z5[i] = z_[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = rhs(z5);

        double sum = 0;
        int count = 0;
        for (int i = 0; i < 2; ++i) {
            // A -inf coordinate is an absent allele; it stays -inf and carries no error.
            if (!std::isfinite(z_[i])) continue;
            const double e =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opt_.atol + opt_.rtol * std::max(std::abs(z_[i]), std::abs(z5[i]));
            sum += (e / sc) * (e / sc);
            ++count;
        }
        if (count == 0) return 0.0;
        const double err = std::sqrt(sum / count);
        return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
    }

    Params p_;
    OdeOptions opt_;
    State z_;
    State k1_{};
    double t_{0.0};
    double h_;
};

void check_start(FrequencyPair s0)
{
    if (!(s0.u >= 0 && s0.v >= 0 && s0.u + s0.v < 1))
        throw std::invalid_argument("ODE start must satisfy u >= 0, v >= 0, u + v < 1");
}

}  // namespace

Trajectory integrate_ode(const Params& p, FrequencyPair s0, double t_end, const OdeOptions& opt)
{
    check_start(s0);
    if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
    LogRatioIntegrator integ(p, s0, opt);
    Trajectory tr;
    tr.times.push_back(0.0);
    tr.states.push_back(integ.state());
    tr.log_ratio.push_back(integ.log_ratio());
    double next = opt.sample_interval;
    integ.advance_to(t_end, [&](double t, FrequencyPair s) {
        if (opt.sample_interval > 0 && t < next && t < t_end) return;
        tr.times.push_back(t);
        tr.states.push_back(s);
        tr.log_ratio.push_back(integ.log_ratio());
        while (opt.sample_interval > 0 && next <= t) next += opt.sample_interval;
    });
    return tr;
}

namespace {

int count_turns(const std::vector<double>& x, double hyst)
{
    if (x.empty()) return 0;
    int dir = 0, turns = 0;
    double hi = x.front(), lo = x.front();
    for (double val : x) {
        if (dir == 0) {
            hi = std::max(hi, val);
            lo = std::min(lo, val);
            if (val > lo + hyst) {
                dir = 1;
                hi = val;
            } else if (val < hi - hyst) {
                dir = -1;
                lo = val;
            }
        } else if (dir == 1) {
            if (val > hi) {
                hi = val;
            } else if (val < hi - hyst) {
                ++turns;
                dir = -1;
                lo = val;
            }
        } else {
            if (val < lo) {
                lo = val;
            } else if (val > lo + hyst) {
                ++turns;
                dir = 1;
                hi = val;
            }
        }
    }
    return turns;
}

}  // namespace

TrajectoryClass classify_trajectory(const Trajectory& traj, const std::vector<Equilibrium>& eqs,
                                    double tail_fraction, const ClassifyOptions& opt)
{
    if (traj.times.empty()) throw std::invalid_argument("empty trajectory");
    if (!(tail_fraction > 0 && tail_fraction <= 1)) throw std::invalid_argument("tail_fraction must lie in (0,1]");
    const double t0 = traj.times.front(), t1 = traj.times.back();
    const double t_cut = t0 + (1 - tail_fraction) * (t1 - t0);
    const auto first =
        std::lower_bound(traj.times.begin(), traj.times.end(), t_cut) - traj.times.begin();
    const std::size_t n = traj.times.size() - std::size_t(first);
    if (n < opt.min_tail_samples) throw std::invalid_argument("trajectory tail too short to classify");

    std::vector<double> us, vs;
    us.reserve(n);
    vs.reserve(n);
    for (std::size_t i = std::size_t(first); i < traj.states.size(); ++i) {
        us.push_back(traj.states[i].u);
        vs.push_back(traj.states[i].v);
    }

    for (const auto& e : eqs) {
        // A tail parked near a repelling equilibrium is a slow passage, not a limit.
        if (is_repelling(e.stability)) continue;
        double dmax = 0;
        for (std::size_t i = 0; i < n; ++i)
            dmax = std::max(dmax, std::hypot(us[i] - e.location.u, vs[i] - e.location.v));
        if (dmax <= opt.converge_tol) {
            if (e.kind == EquilibriumKind::Corner00) return {TrajectoryClass::Kind::CornerExtinction, e.location};
            return {TrajectoryClass::Kind::ConvergesTo, e.location};
        }
    }

    const double r_cut = t0 + (1 - std::max(tail_fraction, opt.recurrence_fraction)) * (t1 - t0);
    const auto r_first = std::size_t(
        std::lower_bound(traj.times.begin(), traj.times.end(), r_cut) - traj.times.begin());
    us.clear();
    vs.clear();
    for (std::size_t i = r_first; i < traj.states.size(); ++i) {
        us.push_back(traj.states[i].u);
        vs.push_back(traj.states[i].v);
    }
    const auto [umin, umax] = std::minmax_element(us.begin(), us.end());
    const auto [vmin, vmax] = std::minmax_element(vs.begin(), vs.end());
    const double diam = std::hypot(*umax - *umin, *vmax - *vmin);
    int turns = 0;
    if (traj.log_ratio.size() == traj.states.size()) {
        // Extrema of a heteroclinic approach sit far below double precision in u, v.
        std::vector<double> xs, ys;
        for (std::size_t i = r_first; i < traj.log_ratio.size(); ++i) {
            xs.push_back(traj.log_ratio[i].x);
            ys.push_back(traj.log_ratio[i].y);
        }
        turns = count_turns(xs, opt.log_turn_hysteresis) + count_turns(ys, opt.log_turn_hysteresis);
    } else {
        turns = count_turns(us, opt.turn_hysteresis) + count_turns(vs, opt.turn_hysteresis);
    }
    if (diam > opt.oscillation_diameter && turns >= opt.min_turns)
        return {TrajectoryClass::Kind::SustainedOscillation, std::nullopt};
    return {};
}

std::vector<FrequencyPair> random_interior_starts(int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<FrequencyPair> out;
    out.reserve(std::size_t(std::max(n, 0)));
    while (int(out.size()) < n) {
        const double u = U(rng), v = U(rng);
        if (u > 0 && v > 0 && u + v < 1) out.push_back({u, v});
    }
    return out;
}

PersistenceResult persistence_check(const Params& p, int n_starts, double t_end, std::uint64_t seed,
                                    double threshold, double max_extension)
{
    PersistenceResult res{true, seed, {}};
    const OdeOptions opt{};
    for (const auto& s0 : random_interior_starts(n_starts, seed)) {
        LogRatioIntegrator integ(p, s0, opt);
        double window_max = 0;
        const double t_window = 0.5 * t_end;
        integ.advance_to(t_end, [&](double t, FrequencyPair s) {
            if (t >= t_window) window_max = std::max(window_max, s.u + s.v);
        });
        const double chunk = 0.5 * t_end;
        while (window_max <= threshold && integ.time() + chunk <= max_extension * t_end + 1e-9) {
            integ.advance_to(integ.time() + chunk,
                             [&](double, FrequencyPair s) { window_max = std::max(window_max, s.u + s.v); });
        }
        res.tail_max.push_back(window_max);
        if (window_max <= threshold) res.persistent = false;
    }
    return res;
}

double accumulated_winding(const Trajectory& traj, FrequencyPair center)
{
    double total = 0;
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        const double a0 = std::atan2(traj.states[i - 1].v - center.v, traj.states[i - 1].u - center.u);
        const double a1 = std::atan2(traj.states[i].v - center.v, traj.states[i].u - center.u);
        double d = a1 - a0;
        while (d > std::numbers::pi) d -= 2 * std::numbers::pi;
        while (d <= -std::numbers::pi) d += 2 * std::numbers::pi;
        total += d;
    }
    return total;
}

std::vector<Trajectory> integrate_many(const Params& p, const std::vector<FrequencyPair>& starts, double t_end,
                                       const OdeOptions& opt, int jobs)
{
    std::vector<Trajectory> out(starts.size());
    std::vector<std::exception_ptr> errors(starts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < starts.size(); i = next++) {
            try {
                out[i] = integrate_ode(p, starts[i], t_end, opt);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int k = std::max(1, std::min<int>(jobs, int(starts.size())));
    std::vector<std::jthread> pool;
    for (int i = 1; i < k; ++i) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::string trajectory_csv(const Trajectory& traj)
{
    std::string out = "t,u,v\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out += format_double(traj.times[i]);
        out += ',';
        out += format_double(traj.states[i].u);
        out += ',';
        out += format_double(traj.states[i].v);
        out += '\n';
    }
    return out;
}

}  // namespace drivebrake
