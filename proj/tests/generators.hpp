#pragma once

#include <cstdint>
#include <random>

#include <drivebrake/model.hpp>

namespace gen {

// Seeded draws for property tests. Every test states its seed.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    // Point of the closed triangle, with a share of draws pinned to edges and corners.
    drivebrake::FrequencyPair point()
    {
        switch (integer(0, 9)) {
        case 0: return {0.0, uniform(0, 1)};
        case 1: return {uniform(0, 1), 0.0};
        case 2: {
            const double u = uniform(0, 1);
            return {u, 1 - u};
        }
        case 3: {
            const drivebrake::FrequencyPair c[] = {{0, 0}, {1, 0}, {0, 1}};
            return c[integer(0, 2)];
        }
        default: return interior_point();
        }
    }

    drivebrake::FrequencyPair interior_point()
    {
        for (;;) {
            const double u = uniform(0, 1), v = uniform(0, 1);
            if (u > 0 && v > 0 && u + v < 1) return {u, v};
        }
    }

    // a, b in (0,1) away from the ends; h in [0,1] with the ends drawn often.
    drivebrake::Params params()
    {
        const double a = uniform(0.01, 0.99);
        const double b = uniform(0.01, 0.99);
        const int k = integer(0, 5);
        const double h = k == 0 ? 0.0 : (k == 1 ? 1.0 : uniform(0, 1));
        return {a, b, h};
    }

    drivebrake::Params bistable_params(double b_max = 0.99)
    {
        return {uniform(0.51, 0.99), uniform(0.01, b_max), uniform(0, 1)};
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace gen
