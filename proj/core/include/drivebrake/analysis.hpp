#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drivebrake/model.hpp"

namespace drivebrake {

enum class EquilibriumKind { Corner00, Corner10, Corner01, ThetaNode, Interior };
enum class Stability { StableNode, Saddle, UnstableNode, UnstableSpiral, StableSpiral, Undetermined };

std::string to_string(EquilibriumKind k);
std::string to_string(Stability s);

struct Equilibrium {
    FrequencyPair location;
    EquilibriumKind kind;
    Stability stability;
};

// True for equilibria that cannot attract an open set of trajectories.
bool is_repelling(Stability s);

struct Jacobian {
    double j11, j12, j21, j22;
};

// Central-difference Jacobian of (du, dv).
Jacobian reaction_jacobian(const Params& p, FrequencyPair s, double step = 1e-6);
Stability classify_jacobian(const Jacobian& j, double eps = 1e-9);

// --- drive-only reduction ---------------------------------------------------

double bistable_integral(double a);
double bistable_integral_quadrature(double a);
double find_a0();

// --- equilibria -------------------------------------------------------------

std::vector<Equilibrium> boundary_equilibria(const Params& p);
std::vector<Equilibrium> interior_equilibria(const Params& p);
std::vector<Equilibrium> all_equilibria(const Params& p);

std::optional<FrequencyPair> w_critical_point(const Params& p);

// --- predator-prey structure ----------------------------------------------

struct PredatorPreyMargin {
    double max_dv_f1;  // must be < 0
    double min_du_f2;  // must be > 0
    bool holds() const { return max_dv_f1 < 0.0 && min_du_f2 > 0.0; }
};

PredatorPreyMargin predator_prey_margin(const Params& p, int grid_n);

// Closed-form bounds valid at b = 0.
struct PredatorPreyBounds {
    double dv_f1_upper;
    double du_f2_lower;
};
PredatorPreyBounds predator_prey_bounds_b0(double a);

double estimate_b_bar1(double a, double h, double tol = 1e-6, int grid_n = 101);

// --- invariant-set lemmas (a > 1/2) ----------------------------------------

struct Lemma1Result {
    double sup;
    double b_bar2;
    double u_at_sup;
    double mu_at_sup;
};

// Ratio (mu r1 - r2) / (u (1 + a + 2 a mu)) evaluated at v = mu (u - theta).
double lemma1_ratio(double a, double h, double u, double mu);
Lemma1Result lemma1_sup_and_b_bar2(double a, double h);

// Dot product reaction(u, mu(u-theta)) . (mu, -1); must be <= 0 on the Lemma-1 set.
double lemma1_dot(const Params& p, double u, double mu);

double lemma2_b_bar3(double a, double h);

double lemma3_check(const Params& p, int samples);

// Intersection of v = mu (u - theta) with v = min(1, mu/2) (u - theta + eta).
double lemma4_intersection_u(double theta, double eta, double mu);
double lemma4_eta_bar(const Params& p);
// Upper end of the eta search: min((1-theta)/4, theta).
double lemma4_eta_limit(double a);

// --- flux checker -----------------------------------------------------------

struct ConvexRegion {
    std::vector<FrequencyPair> vertices;  // counterclockwise
    std::vector<std::string> labels;      // optional, one per edge
};

ConvexRegion triangle_region();
ConvexRegion c_mu_region(double a, double eta, double mu);
bool is_convex_ccw(const ConvexRegion& r, double tol = 1e-12);

double weinberger_flux_check(const ConvexRegion& region, const Params& p, int samples_per_edge);

// --- speeds -----------------------------------------------------------------

std::optional<double> c_brake_into_drive(double a, double b);
std::optional<double> c_drive_kpp(double a);
std::optional<double> drive_alpha(double a);
std::optional<double> c_drive_upper(double a);
// sqrt(2(1-sqrt a)/sqrt a) without the 1/4 <= a < 1/2 gate; the speed equality uses it on all of (0,1/2).
double upper_bound_formula(double a);
std::optional<double> evasion_threshold(double b);
double evasion_threshold_equal_costs();

// --- a = b, h = 1 -----------------------------------------------------------

double cooperative_boundary(double a, double u);

// --- report -----------------------------------------------------------------

enum class A0Side { Below, AtRoot, Above };
std::string to_string(A0Side s);

struct RegimeReport {
    Params params{0.5, 0.0, 0.0};
    std::optional<double> theta;
    bool kpp_flag{false};
    std::optional<double> bistable_integral;
    A0Side a0_side{A0Side::Below};
    std::optional<double> c_drive_kpp;
    std::optional<double> alpha;
    std::optional<double> c_drive_upper;
    std::optional<double> c_brake_into_drive;
    std::optional<double> a1b;
    std::optional<double> predator_prey_b_bar1;
    std::optional<double> lemma1_sup;
    std::optional<double> lemma_b_bar2;
    std::optional<double> lemma_b_bar3;
    std::optional<double> eta_bar;
    std::vector<std::string> notes;
};

RegimeReport speed_report(const Params& p);
RegimeReport regime_report(const Params& p);

std::string to_key_value(const RegimeReport& r);
std::string regime_csv_header();
std::string to_csv_row(const RegimeReport& r);

}  // namespace drivebrake
