#pragma once

#include "steklov/geometry.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace steklov
{
using Rng = std::mt19937_64;

/// Uniform double in [lo, hi) from the top 53 bits; identical on every platform, unlike
/// std::uniform_real_distribution.
inline double uniform(Rng& rng, double lo, double hi)
{
    const double u = static_cast< double >(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n)
{
    return static_cast< std::uint64_t >(uniform(rng, 0.0, static_cast< double >(n)));
}

/// Standard normal via Box-Muller on `uniform`.
inline double normal(Rng& rng)
{
    const double u1 = uniform(rng, 0.0, 1.0);
    const double u2 = uniform(rng, 0.0, 1.0);
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * M_PI * u2);
}

/// rho(theta) = exp(sum_{m=0..4} a_m cos(m theta) + sum_{m=1..4} b_m sin(m theta)),
/// theta the polar angle of the evaluation point.
struct FourierDensity
{
    std::array< double, 5 > a{};
    std::array< double, 5 > b{};   // b[0] unused

    static FourierDensity sample(Rng& rng, double amplitude = 0.5)
    {
        FourierDensity d;
        for (int m = 0; m < 5; ++m)
            d.a[m] = uniform(rng, -amplitude, amplitude);
        for (int m = 1; m < 5; ++m)
            d.b[m] = uniform(rng, -amplitude, amplitude);
        return d;
    }

    [[nodiscard]] double at_angle(double theta) const
    {
        double s = a[0];
        for (int m = 1; m < 5; ++m)
            s += a[m] * std::cos(m * theta) + b[m] * std::sin(m * theta);
        return std::exp(s);
    }

    double operator()(Vec2 p) const { return at_angle(std::atan2(p.y, p.x)); }
};

} // namespace steklov
