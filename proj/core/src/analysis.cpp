#include "drivebrake/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "drivebrake/io.hpp"

namespace drivebrake {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double theta_of(double a) { return (2 * a - 1) / a; }

template <class F>
double bisect_root(F f, double lo, double hi, double tol)
{
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Largest x in (0, hi] with pred(x) true, assuming pred is monotone decreasing.
template <class P>
double bisect_largest(P pred, double hi, double tol)
{
    if (pred(hi)) return hi;
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace

std::string to_string(EquilibriumKind k)
{
    switch (k) {
    case EquilibriumKind::Corner00: return "corner00";
    case EquilibriumKind::Corner10: return "corner10";
    case EquilibriumKind::Corner01: return "corner01";
    case EquilibriumKind::ThetaNode: return "theta_node";
    case EquilibriumKind::Interior: return "interior";
    }
    return "?";
}

std::string to_string(Stability s)
{
    switch (s) {
    case Stability::StableNode: return "StableNode";
    case Stability::Saddle: return "Saddle";
    case Stability::UnstableNode: return "UnstableNode";
    case Stability::UnstableSpiral: return "UnstableSpiral";
    case Stability::StableSpiral: return "StableSpiral";
    case Stability::Undetermined: return "Undetermined";
    }
    return "?";
}

std::string to_string(A0Side s)
{
    switch (s) {
    case A0Side::Below: return "below";
    case A0Side::AtRoot: return "at_root";
    case A0Side::Above: return "above";
    }
    return "?";
}

bool is_repelling(Stability s)
{
    return s == Stability::Saddle || s == Stability::UnstableNode || s == Stability::UnstableSpiral;
}

Jacobian reaction_jacobian(const Params& p, FrequencyPair s, double step)
{
    const auto rp_u = reaction(p, {s.u + step, s.v});
    const auto rm_u = reaction(p, {s.u - step, s.v});
    const auto rp_v = reaction(p, {s.u, s.v + step});
    const auto rm_v = reaction(p, {s.u, s.v - step});
    const double k = 0.5 / step;
    return {(rp_u.du - rm_u.du) * k, (rp_v.du - rm_v.du) * k, (rp_u.dv - rm_u.dv) * k,
            (rp_v.dv - rm_v.dv) * k};
}

Stability classify_jacobian(const Jacobian& j, double eps)
{
    const double tr = j.j11 + j.j22;
    const double det = j.j11 * j.j22 - j.j12 * j.j21;
    const double disc = tr * tr - 4 * det;
    if (disc < 0) {
        if (std::abs(tr) < eps) return Stability::Undetermined;
        return tr < 0 ? Stability::StableSpiral : Stability::UnstableSpiral;
    }
    const double sq = std::sqrt(disc);
    const double l1 = 0.5 * (tr - sq);
    const double l2 = 0.5 * (tr + sq);
    if (std::abs(l1) < eps || std::abs(l2) < eps) return Stability::Undetermined;
    if (l2 < 0) return Stability::StableNode;
    if (l1 > 0) return Stability::UnstableNode;
    return Stability::Saddle;
}

double bistable_integral(double a)
{
    if (!(a > 0.5 && a <= 1.0)) throw std::domain_error("bistable_integral requires 1/2 < a <= 1");
    if (a == 1.0) return -0.5;
    return std::sqrt(1 - a) / std::pow(a, 1.5) * std::atan(std::sqrt(a / (1 - a))) - 0.5 - (1 - a) / a;
}

double bistable_integral_quadrature(double a)
{
    if (!(a > 0.5 && a <= 1.0)) throw std::domain_error("bistable_integral requires 1/2 < a <= 1");
    using boost::math::quadrature::gauss_kronrod;
    if (a == 1.0) {
        return gauss_kronrod<double, 15>::integrate([](double u) { return -u; }, 0.0, 1.0, 15, 1e-14);
    }
    const Params p(a, 0.0, 0.0);
    return gauss_kronrod<double, 15>::integrate([&](double u) { return drive_only_rhs(p, u); }, 0.0, 1.0,
                                                15, 1e-14);
}

double find_a0()
{
    // Evaluate the closed form directly so the left bracket can sit at a = 1/2.
    auto f = [](double a) {
        return std::sqrt(1 - a) / std::pow(a, 1.5) * std::atan(std::sqrt(a / (1 - a))) - 0.5 - (1 - a) / a;
    };
    return bisect_root(f, 0.5, 1.0 - 1e-12, 1e-12);
}

std::vector<Equilibrium> boundary_equilibria(const Params& p)
{
    const double a = p.a(), b = p.b(), h = p.h();
    auto sign_class = [](double transverse, Stability pos, Stability neg) {
        if (transverse > 0) return pos;
        if (transverse < 0) return neg;
        return Stability::Undetermined;
    };

    std::vector<Equilibrium> out;
    Stability s00 = a > 0.5 ? Stability::StableNode : (a < 0.5 ? Stability::Saddle : Stability::Undetermined);
    out.push_back({{0, 0}, EquilibriumKind::Corner00, s00});

    // Eigenvalues at (1,0) are -1 and f2(1,0) = (1+a-2b)/(1-a).
    out.push_back({{1, 0}, EquilibriumKind::Corner10,
                   sign_class(1 + a - 2 * b, Stability::Saddle, Stability::StableNode)});

    // Eigenvalues at (0,1) are -1 and b(1-h)/(1-b).
    Stability s01 = b < 1 ? sign_class(b * (1 - h), Stability::Saddle, Stability::StableNode)
                          : Stability::Undetermined;
    out.push_back({{0, 1}, EquilibriumKind::Corner01, s01});

    if (a > 0.5) {
        const double th = theta_of(a);
        // Eigenvalues at (theta,0) are d/du(u f1) = 2a-1 > 0 and f2(theta,0).
        const double f2 = growth(p, {th, 0}).y;
        out.push_back({{th, 0}, EquilibriumKind::ThetaNode,
                       sign_class(f2, Stability::UnstableNode, Stability::Saddle)});
    }
    return out;
}

std::vector<Equilibrium> interior_equilibria(const Params& p)
{
    auto line = [&](double u, double v) {
        const Vec2 g = gametes(p, {u, v});
        return g.x - g.y;
    };
    auto conic = [&](double u, double v) { return gametes(p, {u, v}).x - mean_fitness(p, {u, v}); };

    const double c0 = line(0, 0);
    const double cu = line(1, 0) - c0;
    const double cv = line(0, 1) - c0;
    if (cu == 0 && cv == 0) return {};

    const bool by_u = std::abs(cv) >= std::abs(cu);
    auto point = [&](double t) -> FrequencyPair {
        if (by_u) return {t, -(c0 + cu * t) / cv};
        return {-(c0 + cv * t) / cu, t};
    };
    auto q = [&](double t) {
        const auto s = point(t);
        return conic(s.u, s.v);
    };
    // Exact quadratic through t = -1, 0, 1.
    const double qm = q(-1), q0 = q(0), qp = q(1);
    const double A = 0.5 * (qp + qm) - q0;
    const double B = 0.5 * (qp - qm);
    const double C = q0;

    std::vector<double> roots;
    const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
    if (std::abs(A) <= 1e-14 * scale) {
        if (B != 0) roots.push_back(-C / B);
    } else {
        const double disc = B * B - 4 * A * C;
        if (disc >= 0) {
            const double sq = std::sqrt(disc);
            const double qq = -0.5 * (B + std::copysign(sq, B));
            if (qq != 0) roots.push_back(qq / A);
            if (qq != 0) roots.push_back(C / qq);
            else roots.push_back(0.0);
        }
    }

    std::vector<Equilibrium> out;
    for (double t : roots) {
        FrequencyPair s = point(t);
        // Newton polish on (g1 - g2, g1 - w).
        for (int it = 0; it < 8; ++it) {
            const double F1 = line(s.u, s.v), F2 = conic(s.u, s.v);
            const double e = 1e-7;
            const double a11 = (line(s.u + e, s.v) - line(s.u - e, s.v)) / (2 * e);
            const double a12 = (line(s.u, s.v + e) - line(s.u, s.v - e)) / (2 * e);
            const double a21 = (conic(s.u + e, s.v) - conic(s.u - e, s.v)) / (2 * e);
            const double a22 = (conic(s.u, s.v + e) - conic(s.u, s.v - e)) / (2 * e);
            const double det = a11 * a22 - a12 * a21;
            if (det == 0) break;
            s.u -= (a22 * F1 - a12 * F2) / det;
            s.v -= (-a21 * F1 + a11 * F2) / det;
        }
        constexpr double tol = 1e-12;
        if (!(s.u > tol && s.v > tol && s.u + s.v < 1 - tol)) continue;
        bool dup = false;
        for (const auto& e : out)
            if (std::hypot(e.location.u - s.u, e.location.v - s.v) < 1e-9) dup = true;
        if (dup) continue;
        out.push_back({s, EquilibriumKind::Interior, classify_jacobian(reaction_jacobian(p, s))});
    }
    return out;
}

std::vector<Equilibrium> all_equilibria(const Params& p)
{
    auto eqs = boundary_equilibria(p);
    auto in = interior_equilibria(p);
    eqs.insert(eqs.end(), in.begin(), in.end());
    return eqs;
}

std::optional<FrequencyPair> w_critical_point(const Params& p)
{
    const double a = p.a(), b = p.b(), h = p.h();
    const double det = a * (a - b) + (1 - h) * (1 - h) * b * b;
    if (std::abs(det) < 1e-14) return std::nullopt;
    const FrequencyPair s{b * (1 - h) * (a - h * b) / det, a * (a - b) / det};
    if (a >= b && s.u > 0 && s.v > 0 && s.u + s.v < 1)
        throw std::logic_error("critical point of w interior to T with a >= b");
    return s;
}

PredatorPreyMargin predator_prey_margin(const Params& p, int grid_n)
{
    if (grid_n < 2) throw std::invalid_argument("grid_n must be >= 2");
    constexpr double e = 1e-6;
    double max_dv = -kInf;
    double min_du = kInf;
    bool finite = true;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; i + j < grid_n; ++j) {
            const double u = double(i) / (grid_n - 1);
            const double v = double(j) / (grid_n - 1);
            const double dv = (growth(p, {u, v + e}).x - growth(p, {u, v - e}).x) / (2 * e);
            const double du = (growth(p, {u + e, v}).y - growth(p, {u - e, v}).y) / (2 * e);
            if (!std::isfinite(dv) || !std::isfinite(du)) {
                finite = false;
                continue;
            }
            max_dv = std::max(max_dv, dv);
            min_du = std::min(min_du, du);
        }
    }
    if (!finite) return {kInf, -kInf};
    return {max_dv, min_du};
}

PredatorPreyBounds predator_prey_bounds_b0(double a)
{
    return {-2 * std::min(1 - a, 4 * a * a - 3 * a + 1), 1 - a};
}

double estimate_b_bar1(double a, double h, double tol, int grid_n)
{
    auto holds = [&](double b) { return predator_prey_margin(Params(a, b, h), grid_n).holds(); };
    return bisect_largest(holds, 1.0, tol);
}

double lemma1_ratio(double a, double h, double u, double mu)
{
    const double th = theta_of(a);
    const Params p(a, 0.0, h);
    const Vec2 r = decomposition_terms(p, {u, mu * (u - th)}).r;
    return (mu * r.x - r.y) / (u * (1 + a + 2 * a * mu));
}

double lemma1_dot(const Params& p, double u, double mu)
{
    const double th = theta_of(p.a());
    const auto R = reaction(p, {u, mu * (u - th)});
    return mu * R.du - R.dv;
}

Lemma1Result lemma1_sup_and_b_bar2(double a, double h)
{
    if (!(a > 0.5)) throw std::domain_error("lemma1 requires a > 1/2");
    const double th = theta_of(a);
    constexpr double s_cap = 1.0 - 1e-9;

    // Coordinates (x, s): u = theta + (1-theta) x, mu = tan(pi s / 2), s <= s_max(u).
    auto u_of = [&](double x) { return th + (1 - th) * x; };
    auto s_max = [&](double u) {
        if (u <= th) return s_cap;
        return std::min(s_cap, 2.0 / std::numbers::pi * std::atan((1 - u) / (u - th)));
    };
    auto value = [&](double x, double s) {
        const double u = u_of(x);
        return lemma1_ratio(a, h, u, std::tan(0.5 * std::numbers::pi * s));
    };

    constexpr int nx = 400, ns = 400;
    double best = -kInf, bx = 0, bs = 0;
    for (int i = 0; i < nx; ++i) {
        const double t = double(i) / (nx - 1);
        const double x = t * t;
        const double sm = s_max(u_of(x));
        for (int k = 0; k < ns; ++k) {
            const double s = sm * double(k) / (ns - 1);
            const double val = value(x, s);
            if (!std::isfinite(val)) throw std::runtime_error("lemma1: non-finite ratio");
            if (val > best) {
                best = val;
                bx = x;
                bs = s;
            }
        }
    }

    // Compass search around the best sample, clamped to the feasible set.
    double hx = 1.0 / nx, hs = 1.0 / ns;
    while (hx > 1e-12 || hs > 1e-12) {
        bool moved = false;
        const double cand[4][2] = {{bx + hx, bs}, {bx - hx, bs}, {bx, bs + hs}, {bx, bs - hs}};
        for (const auto& c : cand) {
            const double x = std::clamp(c[0], 0.0, 1.0);
            const double s = std::clamp(c[1], 0.0, s_max(u_of(x)));
            const double val = value(x, s);
            if (val > best) {
                best = val;
                bx = x;
                bs = s;
                moved = true;
            }
        }
        if (!moved) {
            hx *= 0.5;
            hs *= 0.5;
        }
    }
    if (!std::isfinite(best)) throw std::runtime_error("lemma1: non-finite supremum");
    const double b2 = best > 0 ? std::min(1.0, 1.0 / best) : 1.0;
    return {best, b2, u_of(bx), std::tan(0.5 * std::numbers::pi * bs)};
}

double lemma2_b_bar3(double a, double h)
{
    if (!(a > 0.5)) throw std::domain_error("lemma2 requires a > 1/2");
    const double th = theta_of(a);
    constexpr int nv = 2001;
    std::vector<double> vs;
    for (int k = 1; k < nv; ++k) vs.push_back((1 - th) * double(k) / (nv - 1));
    // The binding direction can sit at v -> 0, where du itself is below any slack.
    for (int k = 1; k <= 200; ++k) vs.push_back((1 - th) * std::pow(10.0, -0.03 * k));
    auto holds = [&](double b) {
        const Params p(a, b, h);
        for (double v : vs)
            if (reaction(p, {th, v}).du / v > 1e-12) return false;
        return true;
    };
    return bisect_largest(holds, 1.0, 1e-10);
}

double lemma3_check(const Params& p, int samples)
{
    const double a = p.a();
    if (!(a > 0.5)) throw std::domain_error("lemma3 requires a > 1/2");
    const double th = theta_of(a);
    const double mu_lo = (1 + a) / (2 * a);
    const int nu = std::max(2, int(std::sqrt(double(samples))));
    const int nm = std::max(2, samples / nu);

    // Segment endpoint on the axis: v = 0 at u = theta.
    const auto R0 = reaction(p, {th, 0.0});
    double min_dot = -mu_lo * R0.du - R0.dv;
    for (int i = 0; i < nu; ++i) {
        const double u = th * double(i) / nu;
        const double mu_hi = (1 - u) / (th - u);
        if (mu_hi < mu_lo) continue;
        for (int k = 0; k < nm; ++k) {
            const double m = mu_lo + (mu_hi - mu_lo) * double(k) / (nm - 1);
            // mu = -m; v = -mu (theta - u), clipped onto u + v = 1 at the far end.
            const double v = k == nm - 1 ? 1 - u : m * (th - u);
            const auto R = reaction(p, {u, v});
            min_dot = std::min(min_dot, -m * R.du - R.dv);
        }
    }
    return min_dot;
}

double lemma4_intersection_u(double theta, double eta, double mu)
{
    return mu <= 2 ? theta + eta : theta + eta / (mu - 1);
}

double lemma4_eta_limit(double a)
{
    const double th = theta_of(a);
    return std::min((1 - th) / 4, th);
}

double lemma4_eta_bar(const Params& p)
{
    const double a = p.a();
    if (!(a > 0.5)) throw std::domain_error("lemma4 requires a > 1/2");
    const double th = theta_of(a);
    constexpr int nu = 201, nmu = 200;

    std::vector<double> mus(nmu);
    for (int k = 0; k < nmu; ++k) mus[k] = std::pow(10.0, -4.0 + 8.0 * k / (nmu - 1));

    auto holds = [&](double eta) {
        for (double mu : mus) {
            const double m = std::min(1.0, mu / 2);
            const double ui = lemma4_intersection_u(th, eta, mu);
            if (std::abs(mu * (ui - th) - m * (ui - th + eta)) > 1e-12)
                throw std::logic_error("lemma4: intersection formula mismatch");
            for (int i = 0; i < nu; ++i) {
                const double u = th - eta + 2 * eta * double(i) / (nu - 1);
                const auto R = reaction(p, {u, m * (u - th + eta)});
                if (m * R.du - R.dv > 1e-13) return false;
            }
        }
        return true;
    };
    const double hi = lemma4_eta_limit(a) * (1 - 1e-9);
    return bisect_largest(holds, hi, 1e-10 * hi);
}

ConvexRegion triangle_region()
{
    return {{{0, 0}, {1, 0}, {0, 1}}, {"v=0", "u+v=1", "u=0"}};
}

ConvexRegion c_mu_region(double a, double eta, double mu)
{
    const double th = theta_of(a);
    const double up = lemma4_intersection_u(th, eta, mu);
    const double uq = (1 + mu * th) / (1 + mu);
    return {{{0, 0}, {th - eta, 0}, {up, mu * (up - th)}, {uq, 1 - uq}, {0, 1}},
            {"v=0", "lower", "S_mu", "u+v=1", "u=0"}};
}

bool is_convex_ccw(const ConvexRegion& r, double tol)
{
    const auto& V = r.vertices;
    const std::size_t n = V.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& A = V[i];
        const auto& B = V[(i + 1) % n];
        const auto& C = V[(i + 2) % n];
        const double cross = (B.u - A.u) * (C.v - B.v) - (B.v - A.v) * (C.u - B.u);
        if (cross < -tol) return false;
    }
    return true;
}

double weinberger_flux_check(const ConvexRegion& region, const Params& p, int samples_per_edge)
{
    if (samples_per_edge < 2) throw std::invalid_argument("samples_per_edge must be >= 2");
    const auto& V = region.vertices;
    double worst = -kInf;
    for (std::size_t i = 0; i < V.size(); ++i) {
        const auto A = V[i];
        const auto B = V[(i + 1) % V.size()];
        const double dx = B.u - A.u, dy = B.v - A.v;
        const double len = std::hypot(dx, dy);
        if (len == 0) continue;
        const Vec2 n{dy / len, -dx / len};
        const bool on_v0 = A.v == 0 && B.v == 0;
        const bool on_u0 = A.u == 0 && B.u == 0;
        const bool on_hyp = A.u + A.v == 1 && B.u + B.v == 1;
        for (int k = 0; k < samples_per_edge; ++k) {
            const double t = double(k) / (samples_per_edge - 1);
            FrequencyPair s{A.u + t * dx, A.v + t * dy};
            // Keep samples exactly on the sides of T they belong to.
            if (on_v0) s.v = 0;
            if (on_u0) s.u = 0;
            if (on_hyp) s.v = 1 - s.u;
            const auto R = reaction(p, s);
            worst = std::max(worst, dot(n, {R.du, R.dv}));
        }
    }
    return worst;
}

std::optional<double> c_brake_into_drive(double a, double b)
{
    const double x = (1 + a - 2 * b) / (1 - a);
    if (!(x > 0)) return std::nullopt;
    return 2 * std::sqrt(x);
}

std::optional<double> c_drive_kpp(double a)
{
    if (!(a > 0 && a <= 0.25)) return std::nullopt;
    return 2 * std::sqrt(1 - 2 * a);
}

std::optional<double> drive_alpha(double a)
{
    if (!(a >= 0.25 && a < 0.5)) return std::nullopt;
    return (1 - std::sqrt(a)) / (2 * std::sqrt(a));
}

double upper_bound_formula(double a)
{
    if (!(a > 0 && a < 1)) throw std::domain_error("upper_bound_formula: a outside (0,1)");
    return std::sqrt(2 * (1 - std::sqrt(a)) / std::sqrt(a));
}

std::optional<double> c_drive_upper(double a)
{
    if (a > 0 && a < 0.25) return c_drive_kpp(a);
    if (a >= 0.25 && a < 0.5) return upper_bound_formula(a);
    return std::nullopt;
}

std::optional<double> evasion_threshold(double b)
{
    auto diff = [&](double a) {
        const auto c = c_brake_into_drive(a, b);
        return (c ? *c : 0.0) - upper_bound_formula(a);
    };
    const double lo = 1e-6, hi = 0.5 - 1e-6;
    if (diff(lo) >= 0 || diff(hi) <= 0) return std::nullopt;
    return bisect_root(diff, lo, hi, 1e-14);
}

double evasion_threshold_equal_costs()
{
    auto diff = [](double a) { return *c_brake_into_drive(a, a) - upper_bound_formula(a); };
    return bisect_root(diff, 1e-6, 0.5 - 1e-6, 1e-15);
}

double cooperative_boundary(double a, double u)
{
    const double th = theta_of(a);
    const double disc = (2 - u) * (2 - u) + 4 * (u - th);
    if (disc < 0) throw std::domain_error("cooperative_boundary: negative discriminant");
    return 0.5 * (2 - u - std::sqrt(disc));
}

RegimeReport speed_report(const Params& p)
{
    const double a = p.a(), b = p.b();
    RegimeReport r;
    r.params = p;
    r.theta = p.theta();
    r.kpp_flag = a <= 0.25;
    r.c_drive_kpp = c_drive_kpp(a);
    r.alpha = drive_alpha(a);
    r.c_drive_upper = c_drive_upper(a);
    r.c_brake_into_drive = c_brake_into_drive(a, b);
    if (!r.c_brake_into_drive) r.notes.push_back("c_brake_into_drive: 1+a-2b <= 0");
    if (!r.c_drive_upper) r.notes.push_back("c_drive_upper: drive is bistable (a >= 1/2)");
    r.a1b = evasion_threshold(b);
    if (!r.a1b) r.notes.push_back("a1b: no root of the speed equality in (0,1/2)");
    return r;
}

RegimeReport regime_report(const Params& p)
{
    RegimeReport r = speed_report(p);
    const double a = p.a(), h = p.h();
    const double a0 = find_a0();
    r.a0_side = std::abs(a - a0) < 1e-9 ? A0Side::AtRoot : (a < a0 ? A0Side::Below : A0Side::Above);
    if (a > 0.5) r.bistable_integral = bistable_integral(a);
    r.predator_prey_b_bar1 = estimate_b_bar1(a, h);
    if (a > 0.5) {
        const auto l1 = lemma1_sup_and_b_bar2(a, h);
        r.lemma1_sup = l1.sup;
        r.lemma_b_bar2 = l1.b_bar2;
        r.lemma_b_bar3 = lemma2_b_bar3(a, h);
        r.eta_bar = lemma4_eta_bar(p);
    } else {
        r.notes.push_back("lemma thresholds: defined only for a > 1/2");
    }
    if (p.brake_costlier()) r.notes.push_back("b > a: outside the main regime");
    return r;
}

namespace {

struct Field {
    const char* name;
    std::string value;
};

std::vector<Field> report_fields(const RegimeReport& r)
{
    const std::string undef = "undefined";
    auto opt = [&](const std::optional<double>& x) { return format_optional(x, undef); };
    return {
        {"a", format_double(r.params.a())},
        {"b", format_double(r.params.b())},
        {"h", format_double(r.params.h())},
        {"variant", to_string(r.params.variant())},
        {"theta", opt(r.theta)},
        {"kpp_flag", r.kpp_flag ? "true" : "false"},
        {"bistable_integral", opt(r.bistable_integral)},
        {"a0_side", to_string(r.a0_side)},
        {"c_drive_kpp", opt(r.c_drive_kpp)},
        {"alpha", opt(r.alpha)},
        {"c_drive_upper", opt(r.c_drive_upper)},
        {"c_brake_into_drive", opt(r.c_brake_into_drive)},
        {"a1b", opt(r.a1b)},
        {"predator_prey_b_bar1", opt(r.predator_prey_b_bar1)},
        {"lemma1_sup", opt(r.lemma1_sup)},
        {"lemma_b_bar2", opt(r.lemma_b_bar2)},
        {"lemma_b_bar3", opt(r.lemma_b_bar3)},
        {"eta_bar", opt(r.eta_bar)},
    };
}

}  // namespace

std::string to_key_value(const RegimeReport& r)
{
    std::ostringstream os;
    for (const auto& f : report_fields(r)) os << f.name << '=' << f.value << '\n';
    for (const auto& n : r.notes) os << "note=" << n << '\n';
    return os.str();
}

std::string regime_csv_header()
{
    RegimeReport dummy;
    std::string out;
    for (const auto& f : report_fields(dummy)) {
        if (!out.empty()) out += ',';
        out += f.name;
    }
    return out;
}

std::string to_csv_row(const RegimeReport& r)
{
    std::string out;
    bool first = true;
    for (const auto& f : report_fields(r)) {
        if (!first) out += ',';
        first = false;
        out += f.value == "undefined" ? std::string() : f.value;
    }
    return out;
}

}  // namespace drivebrake
