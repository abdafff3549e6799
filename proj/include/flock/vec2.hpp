#pragma once
/**
 * @file vec2.hpp
 * @brief Minimal 2D double-precision vector used throughout the library.
 *
 * Positions, velocities, controls and displacements are all Vec2. Trivial
 * ops are constexpr; no allocations, no dependencies beyond <cmath>.
 */

#include <cmath>

namespace flock {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }

    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    constexpr bool operator==(const Vec2& r) const { return x == r.x && y == r.y; }

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }

    /// Squared Euclidean norm; preferred where the square root is not needed.
    constexpr double norm_sq() const { return x * x + y * y; }

    double norm() const { return std::sqrt(norm_sq()); }

    bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (b - a).norm(); }

inline double distance_sq(const Vec2& a, const Vec2& b) { return (b - a).norm_sq(); }

} // namespace flock
