#pragma once

// Reference computations written straight from the defining formulas,
// kept deliberately naive so they share no code path with the library.

#include "motility/vec2.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace oracle {

inline double mean(std::span<double const> v)
{
    double s = 0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

// C(τ) = 1/(N−|τ|) Σ (a_t − ā)(b_{t+τ} − b̄) over one window.
inline double covariance(std::span<double const> a, std::span<double const> b, int lag)
{
    long const n = static_cast<long>(a.size());
    double const ma = mean(a);
    double const mb = mean(b);
    double s = 0;
    long count = 0;
    for (long t = 0; t < n; ++t) {
        long const u = t + lag;
        if (u < 0 || u >= n) {
            continue;
        }
        s += (a[static_cast<std::size_t>(t)] - ma) * (b[static_cast<std::size_t>(u)] - mb);
        ++count;
    }
    return s / static_cast<double>(count);
}

// Vertex of the parabola through three points, via divided differences.
inline double vertex(double x0, double y0, double x1, double y1, double x2, double y2)
{
    double const d01 = (y1 - y0) / (x1 - x0);
    double const d12 = (y2 - y1) / (x2 - x1);
    double const c2 = (d12 - d01) / (x2 - x0);
    double const c1 = d01 - c2 * (x0 + x1);
    return -c1 / (2.0 * c2);
}

struct Quadratic
{
    double a0, a1, a2;
};

// Weighted least squares I ≈ a0 + a1 x + a2 x² via 3×3 normal equations
// and Cramer's rule.
inline Quadratic weighted_quadratic(std::span<double const> x, std::span<double const> y,
                                    std::span<double const> w)
{
    double s[5] = {};
    double t[3] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
        double p = w[i];
        for (int k = 0; k < 5; ++k) {
            s[k] += p;
            if (k < 3) {
                t[k] += p * y[i];
            }
            p *= x[i];
        }
    }
    auto det3 = [](double m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    double m[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
    double const d = det3(m);
    double out[3];
    for (int c = 0; c < 3; ++c) {
        double mc[3][3];
        for (int r = 0; r < 3; ++r) {
            for (int k = 0; k < 3; ++k) {
                mc[r][k] = k == c ? t[r] : m[r][k];
            }
        }
        out[c] = det3(mc) / d;
    }
    return {out[0], out[1], out[2]};
}

// −∇U by central differences, one coordinate at a time.
inline std::vector<motility::Vec2>
negative_gradient(std::function<double(std::span<motility::Vec2 const>)> const& energy,
                  std::vector<motility::Vec2> x, double h)
{
    std::vector<motility::Vec2> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (int axis = 0; axis < 2; ++axis) {
            double& c = axis == 0 ? x[i].x : x[i].y;
            double const saved = c;
            c = saved + h;
            double const up = energy(x);
            c = saved - h;
            double const down = energy(x);
            c = saved;
            (axis == 0 ? g[i].x : g[i].y) = -(up - down) / (2.0 * h);
        }
    }
    return g;
}

inline std::uint64_t ulp_distance(double a, double b)
{
    if (a == b) {
        return 0;
    }
    auto key = [](double v) {
        std::int64_t i;
        static_assert(sizeof i == sizeof v);
        std::memcpy(&i, &v, sizeof v);
        return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
    };
    std::int64_t const ka = key(a);
    std::int64_t const kb = key(b);
    return ka > kb ? static_cast<std::uint64_t>(ka - kb) : static_cast<std::uint64_t>(kb - ka);
}

} // namespace oracle
