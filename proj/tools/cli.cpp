#include "cli.hpp"

#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include <drivebrake/analysis.hpp>
#include <drivebrake/experiments.hpp>
#include <drivebrake/io.hpp>

#include "config.hpp"

namespace drivebrake::cli {

namespace {

struct Flags {
    std::string config;
    std::string out;
    int jobs{0};
    bool full_res{false};
    std::optional<std::uint64_t> seed;
    std::string figure;
};

RunConfig load(const Flags& f)
{
    if (f.config.empty()) throw ConfigError("this command needs --config <path>");
    RunConfig c = parse_config(f.config);
    if (!f.out.empty()) c.out_dir = f.out;
    if (f.seed) {
        c.seed = *f.seed;
        c.phase.seed = *f.seed;
    }
    if (f.full_res) c.grid = Grid1D::full_resolution();
    return c;
}

int jobs_of(const Flags& f)
{
    if (f.jobs > 0) return f.jobs;
    return int(std::max(1u, std::thread::hardware_concurrency()));
}

int cmd_analyze(const Flags& f, std::ostream& out)
{
    const RunConfig c = load(f);
    const RegimeReport r = regime_report(c.params);
    const std::string text = to_key_value(r);
    out << text;
    write_file_atomic(c.out_dir / "report.txt", text);
    write_file_atomic(c.out_dir / "regime.csv", regime_csv_header() + "\n" + to_csv_row(r) + "\n");
    return Ok;
}

int cmd_phase(const Flags& f, std::ostream& out)
{
    const RunConfig c = load(f);
    PhaseOptions po = c.phase;
    po.jobs = jobs_of(f);
    std::vector<Trajectory> trajs;
    const PhaseSummary s = run_phase(c.params, po, &trajs);
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        const std::string name = "traj_" + std::string(i < 10 ? "0" : "") + std::to_string(i) + ".csv";
        write_file_atomic(c.out_dir / name, trajectory_csv(trajs[i]));
    }
    const std::string text = phase_summary_text(s);
    write_file_atomic(c.out_dir / "phase_summary.txt", text);
    out << text;
    return Ok;
}

int cmd_simulate(const Flags& f, std::ostream& out, std::ostream& err)
{
    const RunConfig c = load(f);
    const Scenario s = c.scenario();
    if (stability_advisory(c.params, c.grid))
        err << "warning: dt * max reaction slope exceeds 0.5; explicit reaction may be inaccurate\n";
    const ScenarioRun r = run_scenario(s);
    write_run_files(c.out_dir, r, c.write_pgm);
    out << outcome_record_text(r.record);
    return Ok;
}

int cmd_sweep(const Flags& f, std::ostream& out)
{
    const RunConfig c = load(f);
    if (c.sweep_a.empty() || c.sweep_b.empty()) throw ConfigError(f.config + ": sweep needs sweep.a and sweep.b");
    const SweepResult res = sweep(c.sweep_a, c.sweep_b, c.params.h(), c.scenario(), jobs_of(f));
    write_file_atomic(c.out_dir / "sweep.csv", sweep_csv(res));
    write_file_atomic(c.out_dir / "sweep_matrix.csv", sweep_matrix_csv(res));
    int failed = 0;
    for (const auto& r : res.records) failed += r.error.empty() ? 0 : 1;
    for (std::size_t ia = 0; ia < res.a_grid.size(); ++ia)
        out << "a=" << format_double(res.a_grid[ia])
            << " coextinction_boundary_b=" << format_optional(res.coextinction_boundary[ia], "none") << '\n';
    out << "cells=" << res.records.size() << " failed=" << failed << '\n';
    return Ok;
}

int cmd_reproduce(const Flags& f, std::ostream& out)
{
    const auto id = parse_figure_id(f.figure);
    if (!id) throw ConfigError("unknown figure id '" + f.figure + "'");
    ReproduceOptions o;
    o.out_dir = f.out.empty() ? std::filesystem::path("out") / f.figure : std::filesystem::path(f.out);
    o.grid = f.full_res ? Grid1D::full_resolution() : Grid1D::desk();
    if (f.seed) o.seed = *f.seed;
    o.jobs = jobs_of(f);
    const ReproductionSummary s = reproduce(*id, o);
    out << "outcome: " << s.observed << '\n' << s.outcome_line() << '\n';
    return Ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"drive/brake reaction-diffusion toolkit"};
    app.require_subcommand(1);
    Flags f;
    std::uint64_t seed = 0;
    app.add_option("--config", f.config, "key = value config file");
    app.add_option("--out", f.out, "output directory");
    app.add_option("--jobs", f.jobs, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
    app.add_flag("--full-res", f.full_res, "L=1280, N=16000, T=300, M=160000");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed for phase starts");

    auto* analyze = app.add_subcommand("analyze", "thresholds, speeds and lemma constants");
    auto* phase = app.add_subcommand("phase", "phase-plane trajectories from random starts");
    auto* simulate = app.add_subcommand("simulate", "one PDE run");
    auto* sweep_cmd = app.add_subcommand("sweep", "outcome matrix over (a,b)");
    auto* repro = app.add_subcommand("reproduce", "canonical figure scenario");
    repro->add_option("figure", f.figure, "Fig3A Fig3B Fig4A Fig4B Fig5 Fig6 Fig7A Fig7B")->required();
    for (auto* sc : {analyze, phase, simulate, sweep_cmd, repro}) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return ConfigFailure;
    }
    if (seed_opt->count()) f.seed = seed;

    try {
        if (analyze->parsed()) return cmd_analyze(f, out);
        if (phase->parsed()) return cmd_phase(f, out);
        if (simulate->parsed()) return cmd_simulate(f, out, err);
        if (sweep_cmd->parsed()) return cmd_sweep(f, out);
        if (repro->parsed()) return cmd_reproduce(f, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return ConfigFailure;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return NumericalFailure;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return ConfigFailure;
    }
    return ConfigFailure;
}

}  // namespace drivebrake::cli
