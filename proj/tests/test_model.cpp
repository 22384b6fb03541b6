#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include <drivebrake/model.hpp>

#include "generators.hpp"

using namespace drivebrake;

namespace {

// Hardy-Weinberg zygotes, germline conversion DO -> DD and DB -> BB,
// genotype fitnesses DD 1-a, BB and DB 1-b, BO 1-hb, OO 1.
struct GenotypeModel {
    double w, u_next, v_next;
};

GenotypeModel genotype_oracle(double a, double b, double h, double u, double v)
{
    const double o = 1 - u - v;
    const double DD = u * u + 2 * u * o;  // after conversion
    const double BB = v * v + 2 * u * v;
    const double BO = 2 * v * o;
    const double OO = o * o;
    const double w = DD * (1 - a) + BB * (1 - b) + BO * (1 - h * b) + OO;
    const double drive = DD * (1 - a);
    const double brake = BB * (1 - b) + 0.5 * BO * (1 - h * b);
    return {w, drive / w, brake / w};
}

}  // namespace

TEST(Params, RejectsOutOfDomain)
{
    EXPECT_THROW(Params(0.0, 0.1, 0.5), std::invalid_argument);
    EXPECT_THROW(Params(1.0, 0.1, 0.5), std::invalid_argument);
    EXPECT_THROW(Params(0.5, 1.2, 0.5), std::invalid_argument);
    EXPECT_THROW(Params(0.5, 0.2, -0.1), std::invalid_argument);
    EXPECT_THROW(Params(0.5, 0.2, 0.5, Variant::Nagylaki, 0.0), std::invalid_argument);
    EXPECT_NO_THROW(Params(0.55, 0.8, 0.5));
}

TEST(Params, ThetaAndCostFlag)
{
    EXPECT_FALSE(Params(0.4, 0.1, 0.5).theta().has_value());
    EXPECT_FALSE(Params(0.5, 0.1, 0.5).theta().has_value());
    EXPECT_NEAR(*Params(0.55, 0.1, 0.5).theta(), 2.0 / 11.0, 1e-15);
    EXPECT_TRUE(Params(0.55, 0.65, 0.5).brake_costlier());
    EXPECT_FALSE(Params(0.55, 0.45, 0.5).brake_costlier());
}

TEST(MeanFitness, CornerValues)
{
    const Params p(0.6, 0.3, 0.5);
    EXPECT_DOUBLE_EQ(mean_fitness(p, {0, 0}), 1.0);
    EXPECT_NEAR(mean_fitness(p, {1, 0}), 0.4, 1e-15);
    EXPECT_NEAR(mean_fitness(p, {0, 1}), 0.7, 1e-15);
}

TEST(MeanFitness, BoundsOnTriangleProperty)
{
    gen::Draw d(11);
    for (int k = 0; k < 300; ++k) {
        const Params p = d.params();
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; i + j <= 40; ++j) {
                const double w = mean_fitness(p, {i / 40.0, j / 40.0});
                // 1-a under b <= a; a costlier brake moves the minimum to (0,1).
                ASSERT_GE(w, 1 - std::max(p.a(), p.b()) - 1e-12);
                ASSERT_LE(w, 1 + 1e-12);
            }
    }
}

TEST(Reaction, MatchesGenotypeOracle)
{
    gen::Draw d(12);
    for (int k = 0; k < 2000; ++k) {
        const Params p = d.params();
        const auto s = d.point();
        const auto g = genotype_oracle(p.a(), p.b(), p.h(), s.u, s.v);
        ASSERT_NEAR(mean_fitness(p, s), g.w, 1e-13);
        const auto r = reaction(p, s);
        ASSERT_NEAR(r.du, g.u_next - s.u, 1e-13);
        ASSERT_NEAR(r.dv, g.v_next - s.v, 1e-13);
        ASSERT_EQ(r.dn, 0.0);
    }
}

TEST(Reaction, GameteBalance)
{
    gen::Draw d(13);
    for (int k = 0; k < 1000; ++k) {
        const Params p = d.params();
        const auto s = d.point();
        const Vec2 g = gametes(p, s);
        const double o = 1 - s.u - s.v;
        ASSERT_NEAR(s.u * g.x + s.v * g.y + o * wildtype_gametes(p, s), mean_fitness(p, s), 1e-14);
    }
}

TEST(Reaction, CornersAreEquilibria)
{
    gen::Draw d(14);
    for (int k = 0; k < 200; ++k) {
        const Params p = d.params();
        for (FrequencyPair c : {FrequencyPair{0, 0}, FrequencyPair{1, 0}, FrequencyPair{0, 1}}) {
            const auto r = reaction(p, c);
            ASSERT_EQ(r.du, 0.0);
            ASSERT_EQ(r.dv, 0.0);
        }
    }
}

TEST(Reaction, NagylakiIsTanakaTimesFitness)
{
    gen::Draw d(15);
    for (int k = 0; k < 1000; ++k) {
        const Params t = d.params();
        const double w_oo = d.uniform(0.5, 1.5);
        const Params n(t.a(), t.b(), t.h(), Variant::Nagylaki, w_oo);
        const auto s = d.point();
        const double w = mean_fitness(t, s);
        const auto rt = reaction(t, s);
        const auto rn = reaction(n, s);
        ASSERT_NEAR(rn.du, w_oo * w * rt.du, 1e-14);
        ASSERT_NEAR(rn.dv, w_oo * w * rt.dv, 1e-14);
        ASSERT_NEAR(rn.dn, w_oo * w - 1, 1e-15);
    }
}

TEST(Reaction, NagylakiUnitFitnessSharesZeros)
{
    const Params t(0.4, 0.1, 0.2);
    const Params n(0.4, 0.1, 0.2, Variant::Nagylaki, 1.0);
    for (int i = 0; i <= 50; ++i)
        for (int j = 0; i + j <= 50; ++j) {
            const FrequencyPair s{i / 50.0, j / 50.0};
            const auto rt = reaction(t, s);
            const auto rn = reaction(n, s);
            EXPECT_EQ(rt.du == 0.0, rn.du == 0.0);
            EXPECT_EQ(std::signbit(rt.du), std::signbit(rn.du));
            EXPECT_EQ(std::signbit(rt.dv), std::signbit(rn.dv));
        }
}

TEST(Reductions, DriveOnlyClosedForm)
{
    // a = 0.6, b = 0: a u (1-u)(u - 1/3) / (1 - a + a (1-u)^2), evaluated independently.
    const Params p(0.6, 0.0, 0.3);
    for (int i = 0; i < 100; ++i) {
        const double u = i / 99.0;
        const double oracle = 0.6 * u * (1 - u) * (u - 1.0 / 3.0) / (0.4 + 0.6 * (1 - u) * (1 - u));
        EXPECT_NEAR(reaction(p, {u, 0}).du, oracle, 1e-14);
    }
}

TEST(Reductions, DriveOnlyZeros)
{
    const Params p(0.55, 0.2, 0.5);
    EXPECT_NEAR(drive_only_rhs(p, *p.theta()), 0.0, 1e-17);
    EXPECT_EQ(drive_only_rhs(p, 0.0), 0.0);
    EXPECT_EQ(drive_only_rhs(p, 1.0), 0.0);
}

TEST(Reductions, DriveOnlySlopeAtZero)
{
    const Params p(0.25, 0.1, 0.5);
    const double eps = 1e-7;
    const double slope = (drive_only_rhs(p, eps) - drive_only_rhs(p, -eps)) / (2 * eps);
    EXPECT_NEAR(slope, 0.5, 1e-8);
}

TEST(Reductions, EdgeReductionsAgreeWithReactionProperty)
{
    gen::Draw d(16);
    for (int k = 0; k < 500; ++k) {
        const Params p = d.params();
        const double x = d.uniform(0, 1);
        ASSERT_NEAR(drive_only_rhs(p, x), reaction(p, {x, 0}).du, 1e-12);
        ASSERT_NEAR(brake_only_rhs(p, x), reaction(p, {0, x}).dv, 1e-12);
        ASSERT_NEAR(edge_rhs(p, x), reaction(p, {x, 1 - x}).du, 1e-12);
    }
}

TEST(Reductions, BrakeOnly)
{
    const Params p(0.5, 0.3, 0.5);
    EXPECT_EQ(brake_only_rhs(p, 0.0), 0.0);
    EXPECT_EQ(brake_only_rhs(p, 1.0), 0.0);
    EXPECT_LT(brake_only_rhs(p, 0.5), 0.0);
    const Params free(0.5, 0.0, 0.7);
    for (double v : {0.1, 0.4, 0.9}) EXPECT_EQ(brake_only_rhs(free, v), 0.0);
}

TEST(Reductions, EdgeAtEqualCosts)
{
    for (double a : {0.2, 0.6, 0.9})
        for (double h : {0.0, 0.5, 1.0}) {
            const Params p(a, a, h);
            for (int i = 0; i <= 50; ++i) {
                const double u = i / 50.0;
                EXPECT_NEAR(edge_rhs(p, u), -u * (1 - u), 1e-14);
            }
        }
    EXPECT_LT(edge_rhs(Params(0.6, 0.2, 0.5), 0.5), 0.0);
}

TEST(Decomposition, ReconstructionOnGrid)
{
    for (const Params& p : {Params(0.6, 0.3, 0.5), Params(0.3, 0.7, 0.0), Params(0.9, 0.05, 1.0)}) {
        double worst = 0;
        for (int i = 0; i < 200; ++i)
            for (int j = 0; i + j < 200; ++j) {
                const FrequencyPair s{i / 199.0, j / 199.0};
                const auto d = decomposition_terms(p, s);
                const double wb = mean_fitness(p, s);
                const auto r = reaction(p, s);
                const double k = d.w0 / wb;
                const double bv = p.b() * s.v / d.w0;
                worst = std::max(worst, std::abs(r.du - k * (s.u * d.f0.x + bv * d.r.x)));
                worst = std::max(worst, std::abs(r.dv - k * (s.v * d.f0.y + bv * d.r.y)));
            }
        EXPECT_LE(worst, 1e-12);
    }
}

TEST(Decomposition, SignRemarks)
{
    const Params p(0.7, 0.2, 0.4);
    EXPECT_EQ(decomposition_terms(p, {0.0, 0.3}).r.x, 0.0);
    EXPECT_EQ(decomposition_terms(p, {0.0, 1.0}).r.y, 0.0);
    gen::Draw d(17);
    for (int k = 0; k < 500; ++k) {
        const auto s = d.point();
        const auto dec = decomposition_terms(d.params(), s);
        ASSERT_GE(dec.r.x, 0.0);
        ASSERT_LE(dec.r.y, 1e-15);
    }
}

TEST(Decomposition, CostFreeBrakeIsExact)
{
    gen::Draw d(18);
    for (int k = 0; k < 500; ++k) {
        const Params p(d.uniform(0.01, 0.99), 0.0, d.uniform(0, 1));
        const auto s = d.point();
        const auto dec = decomposition_terms(p, s);
        const auto r = reaction(p, s);
        ASSERT_NEAR(r.du, s.u * dec.f0.x, 1e-14);
        ASSERT_NEAR(r.dv, s.v * dec.f0.y, 1e-14);
    }
}

TEST(Triangle, Membership)
{
    EXPECT_TRUE(in_triangle({0.5, 0.5}));
    EXPECT_FALSE(in_triangle({0.5, 0.5 + 1e-9}));
    EXPECT_TRUE(in_triangle({0.5, 0.5 + 1e-9}, 1e-8));
    EXPECT_FALSE(in_triangle({-1e-12, 0.2}));
}
