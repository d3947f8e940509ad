#pragma once

#include <cmath>

namespace motility {

/// Planar vector. The unit is set by context: nanometres for tracks,
/// metres and newtons inside the simulator.
struct Vec2
{
    double x = 0;
    double y = 0;

    constexpr Vec2& operator+=(Vec2 v) { x += v.x; y += v.y; return *this; }
    constexpr Vec2& operator-=(Vec2 v) { x -= v.x; y -= v.y; return *this; }
    constexpr Vec2& operator*=(double k) { x *= k; y *= k; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double k) { return {a.x * k, a.y * k}; }
    friend constexpr Vec2 operator*(double k, Vec2 a) { return {a.x * k, a.y * k}; }
    friend constexpr Vec2 operator/(Vec2 a, double k) { return {a.x / k, a.y / k}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double squared_norm(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::sqrt(dot(v, v)); }

/// Counter-clockwise quarter turn.
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

inline Vec2 rotate(Vec2 v, double angle_rad)
{
    double const c = std::cos(angle_rad);
    double const s = std::sin(angle_rad);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

} // namespace motility
