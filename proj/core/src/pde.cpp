#include "drivebrake/pde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "drivebrake/analysis.hpp"

namespace drivebrake {

InitialCondition InitialCondition::figure_protocol(const Grid1D& g)
{
    const double L = g.L;
    return {{{Field::U, 0.40 * L, 0.55 * L, 0.99, 0.0}, {Field::V, 0.40 * L, 0.45 * L, 0.01, 80.0}}};
}

InitialCondition InitialCondition::appendix(const Grid1D& g)
{
    const double L = g.L, dx = g.dx();
    return {{{Field::U, 0.40 * L + dx, 0.55 * L, 0.99, 0.0}, {Field::V, 0.45 * L + dx, 0.50 * L, 0.001, 0.0}}};
}

void apply_block(FieldState& s, const Grid1D& g, const Block& b)
{
    if (!(b.level >= 0 && b.level <= 1)) throw std::invalid_argument("block level must lie in [0,1]");
    const double slack = 1e-9 * g.dx();
    auto& mine = b.field == Field::U ? s.u : s.v;
    auto& other = b.field == Field::U ? s.v : s.u;
    for (std::size_t i = 0; i < g.nodes(); ++i) {
        const double x = g.x(i);
        if (x < b.x_lo - slack || x > b.x_hi + slack) continue;
        mine[i] = std::max(mine[i], b.level);
        other[i] = std::min(other[i], 1.0 - mine[i]);
    }
}

std::vector<double> drift_velocity(std::span<const double> n, const Grid1D& g)
{
    const std::size_t m = n.size();
    std::vector<double> c(m, 0.0);
    for (std::size_t i = 1; i + 1 < m; ++i) c[i] = (std::log(n[i + 1]) - std::log(n[i - 1])) / g.dx();
    return c;
}

std::optional<std::vector<double>> prescribed_n(const DriftSpec& d, const Grid1D& g)
{
    if (d.profile == DriftProfile::None) return std::nullopt;
    std::vector<double> n(g.nodes());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = g.x(i);
        if (d.profile == DriftProfile::Tanh)
            n[i] = d.n_left + (d.n_right - d.n_left) * 0.5 * (1 + std::tanh((x - d.center) / d.width));
        else
            n[i] = std::exp(d.slope * (x - d.center));
        if (!(n[i] > 0) || !std::isfinite(n[i])) throw std::invalid_argument("prescribed n must be positive");
    }
    return n;
}

namespace {

void add_upwind_drift(std::vector<double>& rhs, const std::vector<double>& f, const std::vector<double>& c,
                      double dt, double dx)
{
    const std::size_t m = f.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (c[i] == 0) continue;
        double diff = 0;
        if (c[i] > 0)
            diff = i + 1 < m ? f[i + 1] - f[i] : 0.0;
        else
            diff = i > 0 ? f[i] - f[i - 1] : 0.0;
        rhs[i] += dt * c[i] * diff / dx;
    }
}

void check_finite(const std::vector<double>& f, const char* name, double t)
{
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!std::isfinite(f[i])) throw NumericalAbort(std::string("non-finite ") + name, i, t);
}

}  // namespace

void step_in_place(FieldState& s, const Params& p, const Grid1D& g, const DiffusionOperator& op,
                   const std::vector<double>* velocity, StepWorkspace& ws, const StepOptions& opt)
{
    const std::size_t m = g.nodes();
    const double dt = g.dt();
    const bool evolve_n = p.variant() == Variant::Nagylaki && s.n.has_value();
    ws.ru.resize(m);
    ws.rv.resize(m);
    if (evolve_n) ws.rn.resize(m);

    for (std::size_t i = 0; i < m; ++i) {
        if (opt.null_reaction) {
            ws.ru[i] = s.u[i];
            ws.rv[i] = s.v[i];
            if (evolve_n) ws.rn[i] = (*s.n)[i];
            continue;
        }
        const ReactionValue r = reaction(p, {s.u[i], s.v[i]});
        ws.ru[i] = s.u[i] + dt * r.du;
        ws.rv[i] = s.v[i] + dt * r.dv;
        if (evolve_n) ws.rn[i] = (*s.n)[i] + dt * r.dn * (*s.n)[i];
    }

    const std::vector<double>* c = velocity;
    if (evolve_n) {
        ws.drift = drift_velocity(*s.n, g);
        c = &ws.drift;
    }
    if (c) {
        add_upwind_drift(ws.ru, s.u, *c, dt, g.dx());
        add_upwind_drift(ws.rv, s.v, *c, dt, g.dx());
    }

    op.solver.solve(ws.ru, s.u);
    op.solver.solve(ws.rv, s.v);
    if (evolve_n) op.solver.solve(ws.rn, *s.n);
    s.t += dt;

    check_finite(s.u, "u", s.t);
    check_finite(s.v, "v", s.t);
    if (evolve_n) {
        check_finite(*s.n, "n", s.t);
        for (std::size_t i = 0; i < m; ++i)
            if (!((*s.n)[i] > 0)) throw NumericalAbort("non-positive n", i, s.t);
    }
}

FieldState step(const FieldState& s, const Params& p, const Grid1D& g, const DiffusionOperator& op,
                const std::vector<double>* velocity, const StepOptions& opt)
{
    FieldState out = s;
    StepWorkspace ws;
    step_in_place(out, p, g, op, velocity, ws, opt);
    return out;
}

double max_reaction_slope(const Params& p, int lattice_n)
{
    if (lattice_n < 2) throw std::invalid_argument("lattice_n must be at least 2");
    double best = 0;
    for (int i = 0; i < lattice_n; ++i) {
        for (int j = 0; i + j < lattice_n; ++j) {
            // stay off the edges so the central differences remain inside T
            const double u = (i + 0.5) / (lattice_n + 1.0), v = (j + 0.5) / (lattice_n + 1.0);
            const auto J = reaction_jacobian(p, {u, v});
            best = std::max({best, std::abs(J.j11) + std::abs(J.j12), std::abs(J.j21) + std::abs(J.j22)});
        }
    }
    return best;
}

bool stability_advisory(const Params& p, const Grid1D& g) { return g.dt() * max_reaction_slope(p) > 0.5; }

double triangle_overshoot(const FieldState& s)
{
    double worst = 0;
    for (std::size_t i = 0; i < s.u.size(); ++i)
        worst = std::max({worst, -s.u[i], -s.v[i], s.u[i] + s.v[i] - 1});
    return worst;
}

namespace {

RunResult run_impl(const Params& p, const Grid1D& g, const InitialCondition& ic,
                   const std::optional<std::vector<double>>& n_field, std::optional<std::vector<double>> n0,
                   const RunOptions& opt)
{
    const auto t_start = std::chrono::steady_clock::now();
    const std::size_t m = g.nodes();
    const double dt = g.dt();
    for (const auto& b : ic.blocks) {
        if (!(b.level >= 0 && b.level <= 1)) throw std::invalid_argument("block level must lie in [0,1]");
        if (b.release_time < 0 || b.release_time > g.T_end)
            throw std::invalid_argument("block release time outside [0, T]");
    }

    FieldState s{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), std::move(n0), 0.0};
    if (s.n) {
        if (s.n->size() != m) throw std::invalid_argument("n0 size does not match the grid");
        for (std::size_t i = 0; i < m; ++i)
            if (!((*s.n)[i] > 0) || !std::isfinite((*s.n)[i])) throw NumericalAbort("non-positive n0", i, 0.0);
    }
    std::optional<std::vector<double>> velocity;
    if (n_field) {
        if (n_field->size() != m) throw std::invalid_argument("n field size does not match the grid");
        for (std::size_t i = 0; i < m; ++i)
            if (!((*n_field)[i] > 0) || !std::isfinite((*n_field)[i]))
                throw std::invalid_argument("prescribed n must be positive and finite");
        velocity = drift_velocity(*n_field, g);
    }

    const DiffusionOperator op = build_diffusion_operator(g);
    StepWorkspace ws;
    RunResult res;

    auto step_index = [&](double t) { return long(std::llround(t / dt)); };
    std::vector<std::pair<long, const Block*>> releases;
    for (const auto& b : ic.blocks) releases.emplace_back(step_index(b.release_time), &b);
    std::stable_sort(releases.begin(), releases.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<long, double>> snaps;
    for (double t : opt.snapshot_times)
        if (t >= 0 && t <= g.T_end) snaps.emplace_back(step_index(t), t);
    std::sort(snaps.begin(), snaps.end());

    const long raster_every = std::max(1L, step_index(opt.raster_interval));
    std::size_t stride = opt.raster_stride;
    if (stride == 0) stride = std::max<std::size_t>(1, (m + 3999) / 4000);
    Raster& R = res.raster;
    for (std::size_t i = 0; i < m; i += stride) R.x.push_back(g.x(i));

    auto record_row = [&] {
        R.times.push_back(s.t);
        for (std::size_t i = 0; i < m; i += stride) {
            R.u.push_back(s.u[i]);
            R.v.push_back(s.v[i]);
        }
        R.sup_u.push_back(*std::max_element(s.u.begin(), s.u.end()));
        R.sup_v.push_back(*std::max_element(s.v.begin(), s.v.end()));
        if (s.n) R.log_mean_n.push_back(std::log(std::accumulate(s.n->begin(), s.n->end(), 0.0) / double(m)));
    };
    std::size_t next_release = 0, next_snap = 0;
    auto at_step = [&](long k) {
        while (next_release < releases.size() && releases[next_release].first == k) {
            apply_block(s, g, *releases[next_release].second);
            ++next_release;
        }
        res.max_overshoot = std::max(res.max_overshoot, triangle_overshoot(s));
        while (next_snap < snaps.size() && snaps[next_snap].first == k) {
            Snapshot sn{snaps[next_snap].second, {}, s.u, s.v, s.n};
            sn.x.resize(m);
            for (std::size_t i = 0; i < m; ++i) sn.x[i] = g.x(i);
            res.snapshots.push_back(std::move(sn));
            ++next_snap;
        }
        if (k % raster_every == 0 || k == g.M) record_row();
    };

    at_step(0);
    const std::vector<double>* c = velocity ? &*velocity : nullptr;
    for (long k = 1; k <= g.M; ++k) {
        step_in_place(s, p, g, op, c, ws, opt.step);
        s.t = double(k) * dt;
        at_step(k);
    }
    res.final = std::move(s);
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

}  // namespace

RunResult run(const Params& p, const Grid1D& g, const InitialCondition& ic,
              const std::optional<std::vector<double>>& n_field, const RunOptions& opt)
{
    if (p.variant() == Variant::Nagylaki) throw std::invalid_argument("use run_nagylaki for the Nagylaki variant");
    return run_impl(p, g, ic, n_field, std::nullopt, opt);
}

RunResult run_nagylaki(const Params& p, const Grid1D& g, const InitialCondition& ic, std::vector<double> n0,
                       const RunOptions& opt)
{
    if (p.variant() != Variant::Nagylaki) throw std::invalid_argument("run_nagylaki requires the Nagylaki variant");
    return run_impl(p, g, ic, std::nullopt, std::move(n0), opt);
}

std::optional<double> rightmost_crossing(std::span<const double> x, std::span<const double> f, double level)
{
    for (std::size_t i = f.size(); i-- > 0;) {
        if (f[i] < level) continue;
        if (i + 1 == f.size() || f[i] == level) return x[i];
        const double frac = (f[i] - level) / (f[i] - f[i + 1]);
        return x[i] + frac * (x[i + 1] - x[i]);
    }
    return std::nullopt;
}

std::optional<double> least_squares_slope(std::span<const double> t, std::span<const std::optional<double>> y,
                                          double t_lo, double t_hi)
{
    double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi || !y[i]) continue;
        n += 1;
        st += t[i];
        sy += *y[i];
        stt += t[i] * t[i];
        sty += t[i] * *y[i];
    }
    if (n < 2) return std::nullopt;
    const double den = n * stt - st * st;
    if (den == 0) return std::nullopt;
    return (n * sty - st * sy) / den;
}

FrontTrack track_fronts(const Raster& r, double level_u, double level_v, double fit_t_lo, double fit_t_hi)
{
    if (r.rows() == 0) throw std::invalid_argument("empty raster");
    FrontTrack ft;
    ft.times = r.times;
    for (std::size_t k = 0; k < r.rows(); ++k) {
        ft.x_u.push_back(rightmost_crossing(r.x, r.u_row(k), level_u));
        ft.x_v.push_back(rightmost_crossing(r.x, r.v_row(k), level_v));
    }
    ft.speed_u = least_squares_slope(ft.times, ft.x_u, fit_t_lo, fit_t_hi);
    ft.speed_v = least_squares_slope(ft.times, ft.x_v, fit_t_lo, fit_t_hi);
    return ft;
}

}  // namespace drivebrake
