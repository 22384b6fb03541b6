#pragma once

#include <optional>
#include <string>

namespace drivebrake {

enum class Variant { Tanaka, Nagylaki };

std::string to_string(Variant v);

// Model parameters. a is the drive cost, b the brake cost, h the brake
// dominance over wild type. b may equal 0 or 1: the threshold searches
// evaluate those limits.
class Params {
public:
    Params(double a, double b, double h, Variant variant = Variant::Tanaka, double w_oo = 1.0);

    static Params tanaka(double a, double b, double h) { return {a, b, h}; }
    static Params nagylaki(double a, double b, double h, double w_oo)
    {
        return {a, b, h, Variant::Nagylaki, w_oo};
    }

    double a() const { return a_; }
    double b() const { return b_; }
    double h() const { return h_; }
    Variant variant() const { return variant_; }
    double w_oo() const { return w_oo_; }

    // Set when b > a. Allowed, but outside the regime of the main results.
    bool brake_costlier() const { return b_ > a_; }

    // (2a-1)/a, defined only in the bistable regime a > 1/2.
    std::optional<double> theta() const;

    Params with_b(double b) const { return {a_, b, h_, variant_, w_oo_}; }

private:
    double a_;
    double b_;
    double h_;
    Variant variant_;
    double w_oo_;
};

struct FrequencyPair {
    double u{0.0};
    double v{0.0};
};

struct Vec2 {
    double x{0.0};
    double y{0.0};
};

inline double dot(Vec2 p, Vec2 q) { return p.x * q.x + p.y * q.y; }

struct ReactionValue {
    double du{0.0};
    double dv{0.0};
    double dn{0.0};  // per-capita n growth; zero for Tanaka
};

bool in_triangle(FrequencyPair s, double tol = 0.0);

double mean_fitness(const Params& p, FrequencyPair s);

// (g1, g2): gamete production of drive and brake alleles.
Vec2 gametes(const Params& p, FrequencyPair s);

// Gamete production of the wild-type allele, so that u g1 + v g2 + o g0 = w.
double wildtype_gametes(const Params& p, FrequencyPair s);

// f = g / w - 1 (per-capita growth in the Tanaka variant).
Vec2 growth(const Params& p, FrequencyPair s);

ReactionValue reaction(const Params& p, FrequencyPair s);

double drive_only_rhs(const Params& p, double u);
double brake_only_rhs(const Params& p, double v);
double edge_rhs(const Params& p, double u);

struct Decomposition {
    double w0;
    Vec2 f0;
    Vec2 r;
};

Decomposition decomposition_terms(const Params& p, FrequencyPair s);

}  // namespace drivebrake
