#include "cansys/transfer.hpp"

#include <algorithm>
#include <cmath>

namespace cansys {

Mat2c cell_generator(const Cell& cell, Complex z) {
    Mat2c a;
    a << z * cell.h12, z * cell.h22, -z * cell.h11, -z * cell.h12;
    return a;
}

Mat2c cell_exponential(const Mat2c& generator, double delta) {
    const Mat2c b = generator * delta;
    const double scale = b.cwiseAbs().maxCoeff();
    if (std::abs(b.trace()) > 1e-14 * std::max(scale, 1.0)) {
        throw std::invalid_argument("cell_exponential requires a trace-free generator");
    }
    // For trace-free B, B^2 = s^2 I with s^2 = -det B = b00^2 + b01 b10.
    const Complex s2 = b(0, 0) * b(0, 0) + b(0, 1) * b(1, 0);
    const Complex s = std::sqrt(s2);
    Complex cosh_s;
    Complex sinhc_s;
    if (std::abs(s) < 1e-4) {
        sinhc_s = 1.0 + s2 / 6.0 + s2 * s2 / 120.0 + s2 * s2 * s2 / 5040.0;
        cosh_s = 1.0 + s2 / 2.0 + s2 * s2 / 24.0 + s2 * s2 * s2 / 720.0;
    } else {
        sinhc_s = std::sinh(s) / s;
        cosh_s = std::cosh(s);
    }
    Mat2c result = sinhc_s * b;
    result(0, 0) += cosh_s;
    result(1, 1) += cosh_s;
    return result;
}

Propagator::Propagator(HamiltonianField field, Complex z) : field_(std::move(field)), z_(z) {
    generators_.reserve(field_.size());
    prefix_.reserve(field_.size() + 1);
    prefix_.push_back(Mat2c::Identity());
    for (const Cell& c : field_.cells()) {
        generators_.push_back(cell_generator(c, z_));
        prefix_.push_back(cell_exponential(generators_.back(), c.length) * prefix_.back());
    }
}

Mat2c Propagator::at(double x) const {
    const auto loc = field_.locate(x);
    if (loc.offset == 0.0) {
        return prefix_[loc.index];
    }
    if (loc.offset == field_.cell(loc.index).length) {
        return prefix_[loc.index + 1];
    }
    return cell_exponential(generators_[loc.index], loc.offset) * prefix_[loc.index];
}

Mat2c propagate(const HamiltonianField& field, Complex z, double x) {
    const auto loc = field.locate(x);
    Mat2c t = Mat2c::Identity();
    for (std::size_t i = 0; i < loc.index; ++i) {
        const Cell& c = field.cell(i);
        t = cell_exponential(cell_generator(c, z), c.length) * t;
    }
    if (loc.offset > 0.0) {
        t = cell_exponential(cell_generator(field.cell(loc.index), z), loc.offset) * t;
    }
    return t;
}

Trajectory::Trajectory(std::shared_ptr<const Propagator> propagator, Vec2c initial)
    : propagator_(std::move(propagator)), initial_(std::move(initial)) {}

Trajectory::Trajectory(const HamiltonianField& field, Complex z, Vec2c initial)
    : Trajectory(std::make_shared<const Propagator>(field, z), std::move(initial)) {}

VectorFunction Trajectory::as_function() const {
    return [propagator = propagator_, initial = initial_](double x) -> Vec2c {
        return propagator->at(x) * initial;
    };
}

Vec2c solution(const HamiltonianField& field, Complex z, const Vec2c& c0, double x) {
    return propagate(field, z, x) * c0;
}

namespace {

double spectral_norm(const Cell& c) {
    const double half_tr = 0.5 * c.trace();
    const double r = std::hypot(0.5 * (c.h11 - c.h22), c.h12);
    return std::max(std::abs(half_tr + r), std::abs(half_tr - r));
}

} // namespace

Complex h_inner_product(const HamiltonianField& field, const VectorFunction& f,
                        const VectorFunction& g, const QuadratureRule& quad, double upto,
                        double oscillation) {
    quad.check();
    if (!(upto >= 0.0) || upto > field.total_length()) {
        throw DomainError(DomainError::Kind::OutOfRange, "inner product range outside the field");
    }
    Complex sum = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    const auto& bp = field.breakpoints();
    for (std::size_t i = 0; i < field.size() && bp[i] < upto; ++i) {
        const Cell& c = field.cell(i);
        if (c.is_zero()) {
            continue;
        }
        const double a = bp[i];
        const double b = std::min(bp[i + 1], upto);
        const double phase = oscillation * spectral_norm(c) * (b - a);
        const int panels =
            std::max(quad.panels_per_cell, static_cast<int>(std::ceil(std::min(phase, 1e6))));
        const Mat2 h = c.matrix();
        nodes.clear();
        weights.clear();
        const double width = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double left = a + p * width;
            const double right = (p + 1 == panels) ? b : left + width;
            append_gauss_panel(left, right, quad.order, nodes, weights);
        }
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const Vec2c fx = f(nodes[k]);
            const Vec2c gx = g(nodes[k]);
            sum += weights[k] * fx.dot(h.cast<Complex>() * gx);
        }
    }
    return sum;
}

Complex h_inner_product(const Trajectory& f, const Trajectory& g, const QuadratureRule& quad,
                        double upto) {
    if (f.propagator() != g.propagator() && !(f.field() == g.field())) {
        throw std::invalid_argument("trajectories are built on different Hamiltonians");
    }
    const double oscillation = std::max(std::abs(f.z()), std::abs(g.z()));
    return h_inner_product(f.field(), f.as_function(), g.as_function(), quad, upto, oscillation);
}

double h_norm_squared(const Trajectory& f, const QuadratureRule& quad, double upto) {
    return h_inner_product(f, f, quad, upto).real();
}

} // namespace cansys
