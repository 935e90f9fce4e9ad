#pragma once

// Test-only reference computations. Nothing here calls into the code path it
// is used to check.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "holored/kinematics.hpp"

namespace oracle {

using holored::Mat3;
using holored::Vec3;

inline Vec3 random_vec(std::mt19937_64& rng, double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(rng), u(rng), u(rng)};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
    Eigen::Quaterniond q(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    q.normalize();
    return q.toRotationMatrix();
}

/// Three positions whose triangle has every interior angle above `min_angle`.
inline holored::Positions random_triangle(std::mt19937_64& rng, double min_angle = 0.2) {
    for (;;) {
        holored::Positions x{random_vec(rng), random_vec(rng), random_vec(rng)};
        bool ok = true;
        for (int k = 0; k < 3; ++k) {
            const Vec3 a = x[(k + 1) % 3] - x[k];
            const Vec3 b = x[(k + 2) % 3] - x[k];
            if (a.norm() < 0.3 || b.norm() < 0.3) ok = false;
            else if (std::atan2(a.cross(b).norm(), a.dot(b)) < min_angle) ok = false;
        }
        if (ok) return x;
    }
}

/// Central difference of f(x + h e_i) along one coordinate.
template <std::size_t N>
double central_difference(const std::function<double(const std::array<double, N>&)>& f, std::array<double, N> x,
                          std::size_t i, double h) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    return (up - down) / (2.0 * h);
}

/// Brute-force search for the democracy angle: dense scan then golden-section refinement.
inline double scan_rotation_angle(const holored::JacobiPair& a, const holored::JacobiPair& b) {
    auto misfit = [&](double t) {
        const double c = std::cos(t), s = std::sin(t);
        return (c * a.r() - s * a.s() - b.r()).squaredNorm() + (s * a.r() + c * a.s() - b.s()).squaredNorm();
    };
    constexpr int grid = 20000;
    double best = 0.0, best_val = misfit(0.0);
    for (int k = 1; k < grid; ++k) {
        const double t = -std::numbers::pi + 2.0 * std::numbers::pi * k / grid;
        const double val = misfit(t);
        if (val < best_val) {
            best_val = val;
            best = t;
        }
    }
    const double step = 2.0 * std::numbers::pi / grid;
    double lo = best - step, hi = best + step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200; ++it) {
        const double m1 = hi - g * (hi - lo);
        const double m2 = lo + g * (hi - lo);
        if (misfit(m1) < misfit(m2)) hi = m2;
        else lo = m1;
    }
    return 0.5 * (lo + hi);
}

/// Kinetic energy 1/2(|drvec|^2 + |dsvec|^2) of the planar parametrization
/// rvec = r(cos g, sin g), svec = s(cos(g+phi), sin(g+phi)), expanded by hand.
inline double planar_kinetic_energy(double r, double s, double dr, double ds, double dphi, double dgamma) {
    const double a = dgamma;
    const double b = dgamma + dphi;
    return 0.5 * (dr * dr + r * r * a * a + ds * ds + s * s * b * b);
}

/// Simpson rule for a scalar function, used to integrate line integrals by hand.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return sum * h / 3.0;
}

}  // namespace oracle
