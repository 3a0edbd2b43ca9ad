#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's propagation, quadrature or kernel code.

#include "cansys/hamiltonian.hpp"
#include "cansys/types.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using cansys::Cell;
using cansys::Complex;
using cansys::HamiltonianField;
using cansys::Mat2c;
using cansys::Vec2c;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// T(x, z) for H = I.
inline Mat2c identity_transfer(Complex z, double x) {
    Mat2c t;
    t << std::cos(z * x), std::sin(z * x), -std::sin(z * x), std::cos(z * x);
    return t;
}

// T(x, z) for H = diag(1, 0).
inline Mat2c rank_one_transfer(Complex z, double x) {
    Mat2c t;
    t << 1.0, 0.0, -z * x, 1.0;
    return t;
}

// u' = z J^{-1} H u, J^{-1} = [[0, 1], [-1, 0]].
inline Mat2c rhs(const Cell& c, Complex z, const Mat2c& u) {
    Mat2c a;
    a << z * c.h12, z * c.h22, -z * c.h11, -z * c.h12;
    return a * u;
}

// Classical RK4 on the matrix system, fixed step <= h, restarted at every breakpoint.
inline Mat2c rk4_transfer(const HamiltonianField& field, Complex z, double x, double h = 1e-4) {
    Mat2c u = Mat2c::Identity();
    double start = 0.0;
    for (const Cell& c : field.cells()) {
        if (start >= x) {
            break;
        }
        const double end = std::min(start + c.length, x);
        const int steps = std::max(1, static_cast<int>(std::ceil((end - start) / h)));
        const double dt = (end - start) / steps;
        for (int s = 0; s < steps; ++s) {
            const Mat2c k1 = rhs(c, z, u);
            const Mat2c k2 = rhs(c, z, u + 0.5 * dt * k1);
            const Mat2c k3 = rhs(c, z, u + 0.5 * dt * k2);
            const Mat2c k4 = rhs(c, z, u + dt * k3);
            u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        start += c.length;
    }
    return u;
}

// Composite Simpson on [a, b] with `panels` (even) panels.
template <class F>
auto simpson(F f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    decltype(f(a)) sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) {
        sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    }
    return decltype(f(a))(sum * (h / 3.0));
}

// Green kernel for H = I on [0, 1], α = β = π, hand-built from the closed form:
// u = (cos zx, -sin zx), v = (sin zx, cos zx), m = tan z, f = u + m v,
// w_π = T(x)(-1, 0) / (-m) = u / m.
struct IdentityGreen {
    Complex z;

    Vec2c u(Complex s, double x) const { return Vec2c(std::cos(s * x), -std::sin(s * x)); }
    Vec2c v(Complex s, double x) const { return Vec2c(std::sin(s * x), std::cos(s * x)); }
    Complex m(Complex s) const { return std::tan(s); }
    Vec2c f(Complex s, double x) const { return u(s, x) + m(s) * v(s, x); }
    Vec2c w(Complex s, double x) const { return u(s, x) / m(s); }

    Mat2c left(double x, double t) const { return f(z, x) * w(std::conj(z), t).adjoint(); }
    Mat2c right(double x, double t) const { return w(z, x) * f(std::conj(z), t).adjoint(); }
    Mat2c operator()(double x, double t) const { return t <= x ? left(x, t) : right(x, t); }

    // y(x) = ∫_0^1 G(x, t) h dt by Simpson with `panels` panels on each side of x.
    Vec2c apply(const Vec2c& h, double x, int panels) const {
        Vec2c y = Vec2c::Zero();
        if (x > 0.0) {
            y += simpson([&](double t) -> Vec2c { return left(x, t) * h; }, 0.0, x, panels);
        }
        if (x < 1.0) {
            y += simpson([&](double t) -> Vec2c { return right(x, t) * h; }, x, 1.0, panels);
        }
        return y;
    }
};

// Random PSD cell with trace in (0, max_trace].
inline Cell random_cell(std::mt19937_64& rng, double length, double max_trace) {
    const double a = uniform(rng, -1, 1), b = uniform(rng, -1, 1);
    const double c = uniform(rng, -1, 1), d = uniform(rng, -1, 1);
    double h11 = a * a + b * b, h12 = a * c + b * d, h22 = c * c + d * d;
    const int kind = static_cast<int>(rng() % 8);
    if (kind == 0) {  // rank one
        h11 = a * a;
        h12 = a * c;
        h22 = c * c;
    } else if (kind == 1) {  // zero cell
        h11 = h12 = h22 = 0.0;
    }
    const double tr = h11 + h22;
    if (tr > 0.0) {
        const double scale = uniform(rng, 0.05, max_trace) / tr;
        h11 *= scale;
        h12 *= scale;
        h22 *= scale;
    }
    return Cell{length, h11, h12, h22};
}

// At most `max_cells` cells, total length at most `max_length`, per-cell trace <= max_trace.
inline HamiltonianField random_field(std::mt19937_64& rng, int max_cells, double max_length,
                                     double max_trace) {
    const int count = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_cells));
    std::vector<double> lengths(count);
    double total = 0.0;
    for (double& l : lengths) {
        l = uniform(rng, 0.1, 1.0);
        total += l;
    }
    const double target = uniform(rng, 0.2, max_length);
    std::vector<Cell> cells;
    for (double l : lengths) {
        cells.push_back(random_cell(rng, l * target / total, max_trace));
    }
    if (cells.front().is_zero()) {
        cells.front() = Cell{cells.front().length, max_trace / 2, 0.0, max_trace / 2};
    }
    return HamiltonianField(cells);
}

inline Complex random_z(std::mt19937_64& rng, double radius) {
    const double r = radius * std::sqrt(uniform(rng, 0, 1));
    const double phi = uniform(rng, 0, 2 * M_PI);
    return std::polar(r, phi);
}

} // namespace oracle
