#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include <drivebrake/pde.hpp>

#include "generators.hpp"

using namespace drivebrake;

namespace {

FieldState fields(const Grid1D& g, const InitialCondition& ic)
{
    FieldState s{std::vector<double>(g.nodes(), 0.0), std::vector<double>(g.nodes(), 0.0), std::nullopt, 0.0};
    for (const auto& b : ic.blocks) apply_block(s, g, b);
    return s;
}

// Gaussian elimination with partial pivoting on a band with one sub- and one
// super-diagonal (two after fill-in), written out independently of ThomasSolver.
std::vector<double> band_solve(std::vector<double> lo, std::vector<double> di, std::vector<double> up,
                               std::vector<double> rhs)
{
    const std::size_t n = di.size();
    std::vector<double> up2(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (std::abs(lo[k + 1]) > std::abs(di[k])) {
            std::swap(di[k], lo[k + 1]);
            std::swap(up[k], di[k + 1]);
            if (k + 2 < n) std::swap(up2[k], up[k + 1]);
            std::swap(rhs[k], rhs[k + 1]);
        }
        const double m = lo[k + 1] / di[k];
        di[k + 1] -= m * up[k];
        if (k + 2 < n) up[k + 1] -= m * up2[k];
        rhs[k + 1] -= m * rhs[k];
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double r = rhs[k];
        if (k + 1 < n) r -= up[k] * x[k + 1];
        if (k + 2 < n) r -= up2[k] * x[k + 2];
        x[k] = r / di[k];
    }
    return x;
}

Raster synthetic_raster(double speed, double x0)
{
    Raster r;
    for (int i = 0; i <= 400; ++i) r.x.push_back(0.5 * i);
    for (int k = 0; k <= 50; ++k) {
        const double t = k;
        r.times.push_back(t);
        for (double x : r.x) {
            r.u.push_back(0.5 * (1 - std::tanh(x - x0 - speed * t)));
            r.v.push_back(0.0);
        }
    }
    return r;
}

}  // namespace

// --- linear algebra ---------------------------------------------------------

TEST(Laplacian, NeumannRowsSumToZero)
{
    const auto A = neumann_laplacian(11);
    for (std::size_t i = 0; i < 11; ++i) {
        double s = A.diag[i];
        if (i > 0) s += A.lower[i];
        if (i + 1 < 11) s += A.upper[i];
        EXPECT_EQ(s, 0.0);
    }
    EXPECT_EQ(A.diag[0], -1.0);
    EXPECT_EQ(A.diag[5], -2.0);
    const std::vector<double> ones(11, 3.5);
    for (double y : A.apply(ones)) EXPECT_EQ(y, 0.0);
}

TEST(Laplacian, ThomasMatchesBandEliminationProperty)
{
    gen::Draw d(41);
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = std::size_t(d.integer(2, 300));
        TridiagonalMatrix M{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
        for (std::size_t i = 0; i < n; ++i) {
            M.lower[i] = i ? d.uniform(-1, 1) : 0.0;
            M.upper[i] = i + 1 < n ? d.uniform(-1, 1) : 0.0;
            M.diag[i] = 2.5 + d.uniform(0, 1);  // diagonally dominant
        }
        std::vector<double> rhs(n);
        for (auto& r : rhs) r = d.uniform(-1, 1);
        std::vector<double> got(n);
        ThomasSolver(M).solve(rhs, got);
        const auto want = band_solve(M.lower, M.diag, M.upper, rhs);
        for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(got[i], want[i], 1e-12) << "n=" << n;
        const auto back = M.apply(got);
        for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(back[i], rhs[i], 1e-12);
    }
}

// --- scheme -----------------------------------------------------------------

TEST(Step, ReferenceScriptSingleStep)
{
    const Grid1D g = Grid1D::full_resolution();
    const int N = g.N;
    const double a = 0.6, b = 0.1, h = 0.5;
    const double dt = 300.0 / 160000, dx = 1280.0 / 16000;

    std::vector<double> U(N + 1, 0.0), V(N + 1, 0.0);
    for (int i = 8 * N / 20 + 1; i <= 11 * N / 20; ++i) U[i] = 0.99;
    for (int i = 9 * N / 20 + 1; i <= 10 * N / 20; ++i) V[i] = 0.001;

    const FieldState s0 = fields(g, InitialCondition::appendix(g));
    ASSERT_EQ(s0.u, U);
    ASSERT_EQ(s0.v, V);

    std::vector<double> ru(N + 1), rv(N + 1);
    for (int i = 0; i <= N; ++i) {
        const double u = U[i], v = V[i], o = 1 - u - v;
        const double w = 1 - (a * u * u + b * v * v + 2 * b * u * v) - 2 * o * (a * u + h * b * v);
        ru[i] = u + dt * u * (((1 - a) * u + 2 * (1 - a) * o) / w - 1);
        rv[i] = v + dt * v * (((1 - b) * v + 2 * (1 - b) * u + (1 - h * b) * o) / w - 1);
    }
    const double r = dt / (dx * dx);
    std::vector<double> lo(N + 1, -r), di(N + 1, 1 + 2 * r), up(N + 1, -r);
    di[0] = di[N] = 1 + r;
    const auto u1 = band_solve(lo, di, up, ru);
    const auto v1 = band_solve(lo, di, up, rv);

    const auto op = build_diffusion_operator(g);
    const FieldState s1 = step(s0, Params(a, b, h), g, op);
    double eu = 0, ev = 0;
    for (int i = 0; i <= N; ++i) {
        eu = std::max(eu, std::abs(s1.u[i] - u1[i]));
        ev = std::max(ev, std::abs(s1.v[i] - v1[i]));
    }
    EXPECT_LE(eu, 1e-12);
    EXPECT_LE(ev, 1e-12);
    EXPECT_DOUBLE_EQ(s1.t, dt);
}

TEST(Step, ConstantEquilibriaArePreserved)
{
    const Grid1D g(100.0, 200, 10.0, 1000);
    const auto op = build_diffusion_operator(g);
    const Params p(0.6, 0.2, 0.5);
    for (FrequencyPair c : {FrequencyPair{0, 0}, FrequencyPair{1, 0}, FrequencyPair{0, 1}, FrequencyPair{1.0 / 3, 0}}) {
        FieldState s{std::vector<double>(g.nodes(), c.u), std::vector<double>(g.nodes(), c.v), std::nullopt, 0};
        StepWorkspace ws;
        for (int k = 0; k < 100; ++k) step_in_place(s, p, g, op, nullptr, ws);
        for (std::size_t i = 0; i < g.nodes(); ++i) {
            ASSERT_NEAR(s.u[i], c.u, 1e-13);
            ASSERT_NEAR(s.v[i], c.v, 1e-13);
        }
    }
}

TEST(Step, ZeroDataStaysZero)
{
    const Grid1D g(200.0, 400, 20.0, 2000);
    const auto res = run(Params(0.55, 0.45, 0.5), g, InitialCondition{});
    EXPECT_EQ(*std::max_element(res.final.u.begin(), res.final.u.end()), 0.0);
    EXPECT_EQ(*std::max_element(res.final.v.begin(), res.final.v.end()), 0.0);
    EXPECT_EQ(res.max_overshoot, 0.0);
}

TEST(Step, MassConservedWithoutReaction)
{
    const Grid1D g(300.0, 600, 30.0, 3000);
    RunOptions o;
    o.step.null_reaction = true;
    const auto ic = InitialCondition::figure_protocol(g);
    const FieldState s0 = fields(g, InitialCondition{{ic.blocks[0]}});
    const double m0 = std::accumulate(s0.u.begin(), s0.u.end(), 0.0);
    const auto res = run(Params(0.6, 0.1, 0.5), g, InitialCondition{{ic.blocks[0]}}, std::nullopt, o);
    EXPECT_NEAR(std::accumulate(res.final.u.begin(), res.final.u.end(), 0.0), m0, 1e-10 * m0);
    // diffusion spreads the block
    EXPECT_LT(*std::max_element(res.final.u.begin(), res.final.u.end()), 0.99);
}

TEST(Step, OvershootStaysTinyOnRegressionRun)
{
    const Grid1D g(400.0, 1000, 120.0, 12000);
    const auto res = run(Params(0.45, 0.35, 0.5), g, InitialCondition::figure_protocol(g));
    EXPECT_LE(res.max_overshoot, 1e-8);
}

// --- drift ------------------------------------------------------------------

TEST(Drift, HomogeneousDensityHasNoDrift)
{
    const Grid1D g(100.0, 100, 1.0, 10);
    for (double c : drift_velocity(std::vector<double>(g.nodes(), 3.0), g)) EXPECT_EQ(c, 0.0);
    DriftSpec flat{DriftProfile::Tanh, 2.0, 2.0, 50.0, 10.0, 0.0};
    const auto n = prescribed_n(flat, g);
    ASSERT_TRUE(n.has_value());
    for (double c : drift_velocity(*n, g)) EXPECT_NEAR(c, 0.0, 1e-15);
    EXPECT_FALSE(prescribed_n(DriftSpec{}, g).has_value());
}

TEST(Drift, ExponentialProfileGivesConstantVelocity)
{
    const Grid1D g(100.0, 200, 1.0, 10);
    std::vector<double> n(g.nodes());
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = std::exp(0.03 * g.x(i));
    const auto c = drift_velocity(n, g);
    for (std::size_t i = 1; i + 1 < c.size(); ++i) EXPECT_NEAR(c[i], 2 * 0.03, 1e-12);
    EXPECT_EQ(c.front(), 0.0);
    EXPECT_EQ(c.back(), 0.0);
}

TEST(Nagylaki, UnitWildtypeFitnessKeepsDensity)
{
    const Grid1D g(100.0, 200, 20.0, 2000);
    const Params p(0.6, 0.1, 0.5, Variant::Nagylaki, 1.0);
    const auto res = run_nagylaki(p, g, InitialCondition{}, std::vector<double>(g.nodes(), 1.0));
    for (double n : *res.final.n) ASSERT_NEAR(n, 1.0, 1e-14);
}

TEST(Nagylaki, WildtypeGrowthRate)
{
    const Grid1D g(100.0, 200, 50.0, 5000);
    const Params p(0.6, 0.1, 0.5, Variant::Nagylaki, 1.02);
    const auto res = run_nagylaki(p, g, InitialCondition{}, std::vector<double>(g.nodes(), 1.0));
    const auto& R = res.raster;
    ASSERT_EQ(R.log_mean_n.size(), R.rows());
    const double slope = (R.log_mean_n.back() - R.log_mean_n.front()) / (R.times.back() - R.times.front());
    EXPECT_NEAR(slope, 0.02, 0.002);
}

TEST(Nagylaki, VariantsAreRoutedCorrectly)
{
    const Grid1D g(10.0, 10, 1.0, 10);
    EXPECT_THROW(run(Params(0.6, 0.1, 0.5, Variant::Nagylaki, 1.0), g, InitialCondition{}), std::invalid_argument);
    EXPECT_THROW(run_nagylaki(Params(0.6, 0.1, 0.5), g, InitialCondition{}, std::vector<double>(11, 1.0)),
                 std::invalid_argument);
    EXPECT_THROW(run_nagylaki(Params(0.6, 0.1, 0.5, Variant::Nagylaki, 1.0), g, InitialCondition{},
                              std::vector<double>(11, -1.0)),
                 NumericalAbort);
}

// --- fronts -----------------------------------------------------------------

TEST(Fronts, SyntheticTranslatingFront)
{
    const auto r = synthetic_raster(1.5, 20.0);
    const auto f = track_fronts(r, 0.5, 0.5, 25, 50);
    ASSERT_TRUE(f.speed_u.has_value());
    EXPECT_NEAR(*f.speed_u, 1.5, 1e-3);
    EXPECT_FALSE(f.speed_v.has_value());
    EXPECT_NEAR(*f.x_u[10], 35.0, 1e-2);
}

TEST(Fronts, RightmostCrossingInterpolates)
{
    const std::vector<double> x{0, 1, 2, 3}, f{1, 0.8, 0.2, 0};
    EXPECT_NEAR(*rightmost_crossing(x, f, 0.5), 1.5, 1e-15);
    EXPECT_FALSE(rightmost_crossing(x, f, 1.5).has_value());
    const std::vector<double> t{0, 1, 2, 3};
    const std::vector<std::optional<double>> y{1.0, 3.0, std::nullopt, 7.0};
    EXPECT_NEAR(*least_squares_slope(t, y, 0, 3), 2.0, 1e-14);
    EXPECT_FALSE(least_squares_slope(t, y, 2, 2).has_value());
}

TEST(Fronts, RefinementMovesFrontLessThanTwoCoarseNodes)
{
    const Params p(0.2, 0.1, 0.5);
    const Grid1D coarse(320.0, 800, 40.0, 4000), fine(320.0, 1600, 40.0, 16000);
    auto front = [&](const Grid1D& g) {
        const InitialCondition ic{{{Field::U, 0.0, 20.0, 0.99, 0.0}}};
        const auto res = run(p, g, ic);
        std::vector<double> x(g.nodes());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = g.x(i);
        return *rightmost_crossing(x, res.final.u, 0.5);
    };
    const double xc = front(coarse), xf = front(fine);
    EXPECT_GT(xc, 60.0);  // it did travel
    EXPECT_LT(std::abs(xc - xf), 2 * coarse.dx());
}

// --- initial data -----------------------------------------------------------

TEST(Blocks, ReleasedFieldWinsConflicts)
{
    const Grid1D g(10.0, 10, 1.0, 10);
    FieldState s{std::vector<double>(11, 0.0), std::vector<double>(11, 0.0), std::nullopt, 0};
    apply_block(s, g, {Field::U, 2.0, 6.0, 0.99, 0.0});
    apply_block(s, g, {Field::V, 4.0, 8.0, 0.5, 0.0});
    EXPECT_EQ(s.u[3], 0.99);
    EXPECT_EQ(s.v[3], 0.0);
    EXPECT_EQ(s.v[5], 0.5);
    EXPECT_EQ(s.u[5], 0.5);
    EXPECT_EQ(s.v[8], 0.5);
    EXPECT_EQ(s.u[8], 0.0);
    for (std::size_t i = 0; i < 11; ++i) EXPECT_LE(s.u[i] + s.v[i], 1.0);
    EXPECT_THROW(apply_block(s, g, {Field::U, 0, 1, 1.5, 0}), std::invalid_argument);
}

TEST(Blocks, FigureProtocolReleasesBrakeLater)
{
    const Grid1D g = Grid1D::desk();
    const auto ic = InitialCondition::figure_protocol(g);
    ASSERT_EQ(ic.blocks.size(), 2u);
    EXPECT_EQ(ic.blocks[0].release_time, 0.0);
    EXPECT_EQ(ic.blocks[1].release_time, 80.0);
    EXPECT_EQ(ic.blocks[1].field, Field::V);
}

TEST(Blocks, ReleaseOutsideRunIsRejected)
{
    const Grid1D g(10.0, 10, 1.0, 10);
    EXPECT_THROW(run(Params(0.6, 0.1, 0.5), g, InitialCondition{{{Field::V, 0, 1, 0.1, 5.0}}}), std::invalid_argument);
}

// --- advisory ---------------------------------------------------------------

TEST(Advisory, SlopeThreshold)
{
    const Params p(0.6, 0.1, 0.5);
    const double s = max_reaction_slope(p);
    EXPECT_GT(s, 0.0);
    EXPECT_FALSE(stability_advisory(p, Grid1D::desk()));
    EXPECT_TRUE(stability_advisory(p, Grid1D(1280.0, 3200, 300.0, long(300.0 * s))));
}

// --- output formats ---------------------------------------------------------

TEST(Output, PgmAndCsvLayouts)
{
    const auto r = synthetic_raster(1.0, 20.0);
    const auto pgm = raster_pgm(r, Field::U);
    const std::string header = "P5\n401 51\n255\n";
    ASSERT_EQ(pgm.rfind(header, 0), 0u);
    EXPECT_EQ(pgm.size(), header.size() + 401 * 51);
    EXPECT_EQ(static_cast<unsigned char>(pgm[header.size()]), 255);

    const auto csv = raster_csv(r, Field::V);
    EXPECT_EQ(csv.rfind("t,0,0.5,", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 52);

    Snapshot sn{80.0, {0, 1}, {0.5, 0.25}, {0, 0.125}, std::nullopt};
    EXPECT_EQ(snapshot_csv(sn), "x,u,v\n0,0.5,0\n1,0.25,0.125\n");
    EXPECT_EQ(snapshot_filename(80.0), "snap_t80.csv");

    const auto f = track_fronts(r, 0.5, 0.5, 0, 50);
    EXPECT_EQ(fronts_csv(f).rfind("t,x_front_u,x_front_v\n", 0), 0u);
}
