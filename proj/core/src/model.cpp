#include "drivebrake/model.hpp"

#include <cmath>
#include <stdexcept>

namespace drivebrake {

std::string to_string(Variant v)
{
    return v == Variant::Tanaka ? "tanaka" : "nagylaki";
}

Params::Params(double a, double b, double h, Variant variant, double w_oo)
    : a_(a), b_(b), h_(h), variant_(variant), w_oo_(w_oo)
{
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("a must lie in (0,1)");
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("b must lie in [0,1]");
    if (!(h >= 0.0 && h <= 1.0)) throw std::invalid_argument("h must lie in [0,1]");
    if (!(w_oo > 0.0) || !std::isfinite(w_oo)) throw std::invalid_argument("w_OO must be positive");
}

std::optional<double> Params::theta() const
{
    if (a_ <= 0.5) return std::nullopt;
    return (2.0 * a_ - 1.0) / a_;
}

bool in_triangle(FrequencyPair s, double tol)
{
    return s.u >= -tol && s.v >= -tol && s.u + s.v <= 1.0 + tol;
}

// The expression order follows the printed formulas term by term.
double mean_fitness(const Params& p, FrequencyPair s)
{
    const double a = p.a(), b = p.b(), h = p.h();
    const double u = s.u, v = s.v;
    return 1 - (a * (u * u) + b * (v * v) + 2 * b * u * v) - 2 * (1 - u - v) * (a * u + h * b * v);
}

Vec2 gametes(const Params& p, FrequencyPair s)
{
    const double a = p.a(), b = p.b(), h = p.h();
    const double u = s.u, v = s.v;
    return {(1 - a) * u + 2 * (1 - a) * (1 - u - v),
            (1 - b) * v + 2 * (1 - b) * u + (1 - h * b) * (1 - u - v)};
}

double wildtype_gametes(const Params& p, FrequencyPair s)
{
    return (1 - s.u - s.v) + (1 - p.h() * p.b()) * s.v;
}

Vec2 growth(const Params& p, FrequencyPair s)
{
    const double w = mean_fitness(p, s);
    const Vec2 g = gametes(p, s);
    return {g.x / w - 1, g.y / w - 1};
}

ReactionValue reaction(const Params& p, FrequencyPair s)
{
    const double w = mean_fitness(p, s);
    const Vec2 g = gametes(p, s);
    if (p.variant() == Variant::Tanaka) {
        return {s.u * (g.x / w - 1), s.v * (g.y / w - 1), 0.0};
    }
    const double k = p.w_oo();
    return {k * s.u * (g.x - w), k * s.v * (g.y - w), k * w - 1};
}

double drive_only_rhs(const Params& p, double u)
{
    const double a = p.a();
    const double theta = (2 * a - 1) / a;
    return a * u * (1 - u) * (u - theta) / (1 - a + a * (1 - u) * (1 - u));
}

double brake_only_rhs(const Params& p, double v)
{
    const double b = p.b(), h = p.h();
    return -b * v * (1 - v) * (h * (1 - v) + v * (1 - h)) / (1 - b * v * v - 2 * h * b * v * (1 - v));
}

double edge_rhs(const Params& p, double u)
{
    const double a = p.a(), b = p.b();
    return -u * (1 - u) * (1 - b + (a - b) * u) / (1 - b - (a - b) * u * u);
}

Decomposition decomposition_terms(const Params& p, FrequencyPair s)
{
    const double a = p.a(), h = p.h();
    const double u = s.u, v = s.v;
    const double theta = (2 * a - 1) / a;
    const double w0 = 1 + a * u * u - 2 * a * u + 2 * a * u * v;
    const Vec2 f0{(a * (1 - u) * (u - theta) - 2 * v * (1 - a + a * u)) / w0,
                  u * (1 + 2 * a - a * u - 2 * a * v) / w0};
    const Vec2 r{u * (v + 2 * u + 2 * h * (1 - u - v)),
                 -(1 - v) * ((1 - 2 * h) * v + h) - u * (2 * (1 - h) * (1 - v) + h)};
    return {w0, f0, r};
}

}  // namespace drivebrake
