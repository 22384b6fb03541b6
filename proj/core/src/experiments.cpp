#include "drivebrake/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "drivebrake/analysis.hpp"
#include "drivebrake/io.hpp"

namespace drivebrake {

std::string to_string(Outcome o)
{
    switch (o) {
    case Outcome::Coextinction: return "Coextinction";
    case Outcome::JointInvasion: return "JointInvasion";
    case Outcome::DrivePersistsBrakeDies: return "DrivePersistsBrakeDies";
    case Outcome::Undecided: return "Undecided";
    }
    return "?";
}

namespace {

// No resurgence: nothing in the window tops its opening value, and the last
// sample is the window minimum. Plateau wiggles in between are allowed.
bool non_increasing_from(const std::vector<double>& times, const std::vector<double>& sup, double t_from)
{
    const auto k0 = std::size_t(std::lower_bound(times.begin(), times.end(), t_from) - times.begin());
    if (k0 >= sup.size()) return true;
    const double opening = sup[k0], last = sup.back();
    for (std::size_t k = k0; k < sup.size(); ++k) {
        if (sup[k] > opening + 1e-12) return false;
        if (last > sup[k] + 1e-12) return false;
    }
    return true;
}

}  // namespace

OutcomeRecord classify_run(const Params& p, const Grid1D& g, const RunResult& run, const Thresholds& th)
{
    OutcomeRecord rec;
    rec.params = p;
    rec.grid = g;
    rec.runtime_s = run.runtime_s;
    rec.max_overshoot = run.max_overshoot;
    const auto& u = run.final.u;
    const auto& v = run.final.v;
    rec.sup_u_final = u.empty() ? 0.0 : *std::max_element(u.begin(), u.end());
    rec.sup_v_final = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());

    const Raster& R = run.raster;
    const double t_end = R.times.empty() ? 0.0 : R.times.back();
    const double t_half = R.times.empty() ? 0.0 : R.times.front() + 0.5 * (t_end - R.times.front());
    if (R.rows() > 0) {
        const FrontTrack ft = track_fronts(R, th.level_u, th.level_v, t_half, t_end);
        rec.u_speed = ft.speed_u;
        rec.v_speed = ft.speed_v;

        const double t_quarter = R.times.front() + 0.75 * (t_end - R.times.front());
        if (rec.sup_u_final < th.eps_ext && rec.sup_v_final < th.eps_ext &&
            non_increasing_from(R.times, R.sup_u, t_quarter) && non_increasing_from(R.times, R.sup_v, t_quarter)) {
            rec.outcome = Outcome::Coextinction;
            return rec;
        }

        // Joint invasion: u-front present and advancing over the last half,
        // with v above persist_v somewhere in the window behind it.
        const double jitter = 2.0 * (R.cols() > 1 ? R.x[1] - R.x[0] : g.dx());
        bool advancing = true;
        std::optional<double> first_x, prev_x;
        for (std::size_t k = 0; k < R.rows(); ++k) {
            if (R.times[k] < t_half) continue;
            const auto& xf = ft.x_u[k];
            if (!xf) {
                advancing = false;
                break;
            }
            if (!first_x) first_x = xf;
            if (prev_x && *xf < *prev_x - jitter) advancing = false;
            prev_x = xf;
        }
        advancing = advancing && first_x && prev_x && *prev_x > *first_x;
        if (advancing) {
            const auto& xf = *ft.x_u.back();
            const auto vrow = R.v_row(R.rows() - 1);
            double vmax = 0;
            for (std::size_t i = 0; i < R.cols(); ++i)
                if (R.x[i] >= xf - th.trailing_window && R.x[i] <= xf) vmax = std::max(vmax, vrow[i]);
            if (vmax > th.persist_v) {
                rec.outcome = Outcome::JointInvasion;
                return rec;
            }
        }
    } else if (rec.sup_u_final < th.eps_ext && rec.sup_v_final < th.eps_ext) {
        rec.outcome = Outcome::Coextinction;
        return rec;
    }

    if (rec.sup_v_final < th.eps_ext && rec.sup_u_final > 0.5) {
        rec.outcome = Outcome::DrivePersistsBrakeDies;
        return rec;
    }
    rec.outcome = Outcome::Undecided;
    return rec;
}

Scenario figure_scenario(const Params& p, const Grid1D& g)
{
    Scenario s;
    s.params = p;
    s.grid = g;
    s.ic = InitialCondition::figure_protocol(g);
    s.run.raster_interval = 1.0;
    return s;
}

ScenarioRun run_scenario(const Scenario& s)
{
    ScenarioRun out;
    if (s.params.variant() == Variant::Nagylaki) {
        std::vector<double> n0(s.grid.nodes(), s.n0_level.value_or(1.0));
        out.run = run_nagylaki(s.params, s.grid, s.ic, std::move(n0), s.run);
    } else {
        out.run = run(s.params, s.grid, s.ic, s.n_field, s.run);
    }
    out.record = classify_run(s.params, s.grid, out.run, s.thresholds);
    const auto& R = out.run.raster;
    out.fronts = track_fronts(R, s.thresholds.level_u, s.thresholds.level_v, 0.5 * s.grid.T_end, s.grid.T_end);
    return out;
}

namespace {

SpeedMeasurement measure_front(const Params& p, const Grid1D& g, const InitialCondition& ic, Field f,
                               double predicted)
{
    RunOptions opt;
    opt.raster_interval = 1.0;
    const auto r = run(p, g, ic, std::nullopt, opt);
    const auto ft = track_fronts(r.raster, 0.5, 0.5, 0.5 * g.T_end, g.T_end);
    return {f == Field::U ? ft.speed_u : ft.speed_v, predicted, r.runtime_s};
}

}  // namespace

SpeedMeasurement measure_drive_speed(double a, const Grid1D& g)
{
    const auto c = c_drive_kpp(a);
    if (!c) throw std::invalid_argument("measure_drive_speed needs a <= 1/4");
    InitialCondition ic;
    ic.blocks.push_back({Field::U, 0.4 * g.L, 0.55 * g.L, 0.99, 0.0});
    return measure_front(Params(a, 0.5, 0.5), g, ic, Field::U, *c);
}

SpeedMeasurement measure_brake_speed(double a, double b, const Grid1D& g)
{
    const auto c = c_brake_into_drive(a, b);
    if (!c) throw std::invalid_argument("measure_brake_speed needs 1 + a - 2b > 0");
    InitialCondition ic;
    ic.blocks.push_back({Field::U, 0.0, g.L, 0.99, 0.0});
    ic.blocks.push_back({Field::V, 0.0, 64.0, 0.01, 0.0});
    return measure_front(Params(a, b, 0.5), g, ic, Field::V, *c);
}

SweepResult sweep(const std::vector<double>& a_grid, const std::vector<double>& b_grid, double h,
                  const Scenario& templ, int jobs)
{
    for (double a : a_grid)
        if (!(a > 0 && a < 1)) throw std::invalid_argument("sweep a values must lie in (0,1)");
    for (double b : b_grid)
        if (!(b > 0 && b < 1)) throw std::invalid_argument("sweep b values must lie in (0,1)");

    SweepResult res{a_grid, b_grid, {}, {}};
    const std::size_t n = a_grid.size() * b_grid.size();
    res.records.resize(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            const double a = a_grid[i / b_grid.size()];
            const double b = b_grid[i % b_grid.size()];
            try {
                Scenario s = templ;
                s.params = Params(a, b, h, templ.params.variant(), templ.params.w_oo());
                res.records[i] = run_scenario(s).record;
            } catch (const std::exception& e) {
                OutcomeRecord r;
                r.params = Params(a, b, h, templ.params.variant(), templ.params.w_oo());
                r.grid = templ.grid;
                r.error = e.what();
                res.records[i] = r;
            }
        }
    };
    const int k = std::max(1, std::min<int>(jobs, int(n)));
    {
        std::vector<std::jthread> pool;
        for (int i = 1; i < k; ++i) pool.emplace_back(worker);
        worker();
    }

    std::vector<std::size_t> order(b_grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return b_grid[x] < b_grid[y]; });
    for (std::size_t ia = 0; ia < a_grid.size(); ++ia) {
        std::optional<double> boundary;
        if (a_grid[ia] > 0.5) {
            for (std::size_t ib : order) {
                const auto& r = res.at(ia, ib);
                if (!r.error.empty() || r.outcome != Outcome::Coextinction) break;
                boundary = b_grid[ib];
            }
        }
        res.coextinction_boundary.push_back(boundary);
    }
    return res;
}

std::string sweep_csv(const SweepResult& s)
{
    std::string out =
        "# outcome codes: 0=Coextinction 1=JointInvasion 2=DrivePersistsBrakeDies 3=Undecided 9=Failed\n"
        "a,b,outcome_code,sup_u_final,sup_v_final,u_speed,v_speed\n";
    for (const auto& r : s.records) {
        out += format_double(r.params.a()) + ',' + format_double(r.params.b()) + ',' +
               std::to_string(r.outcome_code()) + ',' + format_double(r.sup_u_final) + ',' +
               format_double(r.sup_v_final) + ',' + format_optional(r.u_speed) + ',' + format_optional(r.v_speed) +
               '\n';
    }
    return out;
}

std::string sweep_matrix_csv(const SweepResult& s)
{
    std::string out = "# rows: a, columns: b, cells: outcome codes as in sweep.csv\na\\b";
    for (double b : s.b_grid) out += ',' + format_double(b);
    out += '\n';
    for (std::size_t ia = 0; ia < s.a_grid.size(); ++ia) {
        out += format_double(s.a_grid[ia]);
        for (std::size_t ib = 0; ib < s.b_grid.size(); ++ib) out += ',' + std::to_string(s.at(ia, ib).outcome_code());
        out += '\n';
    }
    out += "# coextinction boundary in b per a>1/2 row:";
    for (std::size_t ia = 0; ia < s.a_grid.size(); ++ia)
        if (s.a_grid[ia] > 0.5)
            out += ' ' + format_double(s.a_grid[ia]) + ':' + format_optional(s.coextinction_boundary[ia], "none");
    out += '\n';
    return out;
}

std::string outcome_record_text(const OutcomeRecord& r)
{
    std::ostringstream os;
    os << "a=" << format_double(r.params.a()) << '\n'
       << "b=" << format_double(r.params.b()) << '\n'
       << "h=" << format_double(r.params.h()) << '\n'
       << "variant=" << to_string(r.params.variant()) << '\n'
       << "outcome=" << (r.error.empty() ? to_string(r.outcome) : "Failed") << '\n'
       << "sup_u_final=" << format_double(r.sup_u_final) << '\n'
       << "sup_v_final=" << format_double(r.sup_v_final) << '\n'
       << "u_speed=" << format_optional(r.u_speed, "none") << '\n'
       << "v_speed=" << format_optional(r.v_speed, "none") << '\n'
       << "max_overshoot=" << format_double(r.max_overshoot) << '\n'
       << "grid=L:" << format_double(r.grid.L) << " N:" << r.grid.N << " T:" << format_double(r.grid.T_end)
       << " M:" << r.grid.M << '\n'
       << "runtime_s=" << format_double(r.runtime_s) << '\n';
    if (!r.error.empty()) os << "error=" << r.error << '\n';
    return os.str();
}

std::string to_string(FigureId f)
{
    switch (f) {
    case FigureId::Fig4A: return "Fig4A";
    case FigureId::Fig4B: return "Fig4B";
    case FigureId::Fig5: return "Fig5";
    case FigureId::Fig6: return "Fig6";
    case FigureId::Fig3A: return "Fig3A";
    case FigureId::Fig3B: return "Fig3B";
    case FigureId::Fig7A: return "Fig7A";
    case FigureId::Fig7B: return "Fig7B";
    }
    return "?";
}

std::optional<FigureId> parse_figure_id(const std::string& s)
{
    for (auto f : {FigureId::Fig4A, FigureId::Fig4B, FigureId::Fig5, FigureId::Fig6, FigureId::Fig3A, FigureId::Fig3B,
                   FigureId::Fig7A, FigureId::Fig7B})
        if (to_string(f) == s) return f;
    return std::nullopt;
}

PhaseSummary run_phase(const Params& p, const PhaseOptions& opt, std::vector<Trajectory>* keep)
{
    PhaseSummary s;
    s.params = p;
    s.seed = opt.seed;
    s.t_end = opt.t_end;
    s.tail_fraction = opt.tail_fraction;
    s.starts = random_interior_starts(opt.n_starts, opt.seed);
    s.equilibria = all_equilibria(p);
    OdeOptions ode = opt.ode;
    ode.sample_interval = opt.sample_interval;
    auto trajs = integrate_many(p, s.starts, opt.t_end, ode, opt.jobs);
    for (auto& t : trajs) {
        t.classification = classify_trajectory(t, s.equilibria, opt.tail_fraction);
        s.classes.push_back(t.classification);
    }
    if (keep) *keep = std::move(trajs);
    return s;
}

std::string phase_summary_text(const PhaseSummary& s)
{
    std::ostringstream os;
    os << "a=" << format_double(s.params.a()) << '\n'
       << "b=" << format_double(s.params.b()) << '\n'
       << "h=" << format_double(s.params.h()) << '\n'
       << "seed=" << s.seed << '\n'
       << "t_end=" << format_double(s.t_end) << '\n'
       << "tail_fraction=" << format_double(s.tail_fraction) << '\n';
    for (const auto& e : s.equilibria)
        os << "equilibrium=" << to_string(e.kind) << ' ' << format_double(e.location.u) << ' '
           << format_double(e.location.v) << ' ' << to_string(e.stability) << '\n';
    for (std::size_t i = 0; i < s.starts.size(); ++i)
        os << "start_" << i << '=' << format_double(s.starts[i].u) << ' ' << format_double(s.starts[i].v) << ' '
           << to_string(s.classes[i]) << '\n';
    return os.str();
}

std::string ReproductionSummary::outcome_line() const
{
    return to_string(figure) + ": expected " + expected + ", observed " + observed + " -> " +
           (pass ? "PASS" : "FAIL");
}

std::vector<std::filesystem::path> write_run_files(const std::filesystem::path& dir, const ScenarioRun& r, bool pgm)
{
    std::vector<std::filesystem::path> files;
    auto put = [&](const std::string& name, const std::string& body) {
        const auto path = dir / name;
        write_file_atomic(path, body);
        files.push_back(path);
    };
    for (const auto& s : r.run.snapshots) put(snapshot_filename(s.t), snapshot_csv(s));
    put("raster_u.csv", raster_csv(r.run.raster, Field::U));
    put("raster_v.csv", raster_csv(r.run.raster, Field::V));
    if (pgm) {
        put("raster_u.pgm", raster_pgm(r.run.raster, Field::U));
        put("raster_v.pgm", raster_pgm(r.run.raster, Field::V));
    }
    put("fronts.csv", fronts_csv(r.fronts));
    put("outcome.txt", outcome_record_text(r.record));
    return files;
}

namespace {

struct PdeFigure {
    double a, b, h;
    std::vector<double> snapshots;
    std::string expected;
};

struct OdeFigure {
    double a, b, h;
    int n_starts;
    double t_end;
    TrajectoryClass::Kind expected;
};

ReproductionSummary reproduce_pde(FigureId f, const PdeFigure& fig, const ReproduceOptions& opt)
{
    Scenario s = figure_scenario(Params(fig.a, fig.b, fig.h), opt.grid);
    s.run.snapshot_times = fig.snapshots;
    const ScenarioRun r = run_scenario(s);

    ReproductionSummary out;
    out.figure = f;
    out.expected = fig.expected;
    out.observed = to_string(r.record.outcome);
    out.pde_record = r.record;
    out.max_overshoot = r.run.max_overshoot;
    if (f == FigureId::Fig3B)
        out.pass = r.record.outcome != Outcome::Coextinction;
    else
        out.pass = out.observed == fig.expected;
    if (!opt.out_dir.empty()) {
        out.files = write_run_files(opt.out_dir, r);
        const auto path = opt.out_dir / "summary.txt";
        write_file_atomic(path, "outcome: " + out.observed + "\n" + out.outcome_line() + "\n");
        out.files.push_back(path);
    }
    return out;
}

ReproductionSummary reproduce_ode(FigureId f, const OdeFigure& fig, const ReproduceOptions& opt)
{
    const Params p(fig.a, fig.b, fig.h);
    PhaseOptions po;
    po.n_starts = fig.n_starts;
    po.t_end = fig.t_end;
    po.seed = opt.seed;
    po.jobs = opt.jobs;
    std::vector<Trajectory> trajs;
    const PhaseSummary ps = run_phase(p, po, &trajs);

    int hits = 0;
    for (const auto& c : ps.classes) {
        if (c.kind != fig.expected) continue;
        if (c.kind == TrajectoryClass::Kind::ConvergesTo) {
            // Only interior limits count for the damped-spiral figure.
            if (c.point->u > 0 && c.point->v > 0) ++hits;
        } else {
            ++hits;
        }
    }
    ReproductionSummary out;
    out.figure = f;
    switch (fig.expected) {
    case TrajectoryClass::Kind::ConvergesTo: out.expected = "ConvergesTo(interior)"; break;
    case TrajectoryClass::Kind::SustainedOscillation: out.expected = "SustainedOscillation"; break;
    case TrajectoryClass::Kind::CornerExtinction: out.expected = "CornerExtinction"; break;
    case TrajectoryClass::Kind::Undecided: out.expected = "Undecided"; break;
    }
    const int need = (8 * fig.n_starts + 9) / 10;
    out.pass = hits >= need;
    out.observed = out.expected + " in " + std::to_string(hits) + "/" + std::to_string(fig.n_starts) + " starts";
    out.phase = ps;
    if (!opt.out_dir.empty()) {
        for (std::size_t i = 0; i < trajs.size(); ++i) {
            std::string name = "traj_" + std::string(i < 10 ? "0" : "") + std::to_string(i) + ".csv";
            const auto path = opt.out_dir / name;
            write_file_atomic(path, trajectory_csv(trajs[i]));
            out.files.push_back(path);
        }
        const auto path = opt.out_dir / "summary.txt";
        write_file_atomic(path, phase_summary_text(ps) + "outcome: " + out.observed + "\n" + out.outcome_line() + "\n");
        out.files.push_back(path);
    }
    return out;
}

}  // namespace

ReproductionSummary reproduce(FigureId f, const ReproduceOptions& opt)
{
    using K = TrajectoryClass::Kind;
    switch (f) {
    case FigureId::Fig4A: return reproduce_ode(f, {0.4, 0.1, 0.2, 10, 20000.0, K::ConvergesTo}, opt);
    case FigureId::Fig4B: return reproduce_ode(f, {0.4, 0.1, 0.8, 10, 20000.0, K::SustainedOscillation}, opt);
    case FigureId::Fig7A: return reproduce_ode(f, {0.6, 0.6, 1.0, 20, 2000.0, K::CornerExtinction}, opt);
    case FigureId::Fig7B: return reproduce_ode(f, {0.6, 0.6, 0.1, 20, 2000.0, K::CornerExtinction}, opt);
    case FigureId::Fig5:
        return reproduce_pde(f, {0.45, 0.35, 0.5, {80, 112, 144, 176, 240, 300}, "JointInvasion"}, opt);
    case FigureId::Fig6: return reproduce_pde(f, {0.55, 0.45, 0.5, {80, 100, 120, 140, 300}, "Coextinction"}, opt);
    case FigureId::Fig3A: return reproduce_pde(f, {0.55, 0.65, 0.5, {80, 150, 300}, "Coextinction"}, opt);
    case FigureId::Fig3B:
        return reproduce_pde(f, {0.55, 0.8, 0.5, {80, 150, 300}, "not Coextinction"}, opt);
    }
    throw std::invalid_argument("unknown figure");
}

}  // namespace drivebrake
