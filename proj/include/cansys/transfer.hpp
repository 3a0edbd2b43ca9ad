#pragma once

#include "cansys/hamiltonian.hpp"
#include "cansys/quadrature.hpp"
#include "cansys/types.hpp"

#include <memory>
#include <vector>

namespace cansys {

/// Generator of u' = z J^{-1} H u on one cell: z * [[h12, h22], [-h11, -h12]].
/// Its trace vanishes identically for symmetric H.
Mat2c cell_generator(const Cell& cell, Complex z);

/// exp(A * delta) for trace-free A via cosh(s) I + sinh(s)/s (A delta),
/// s^2 = -det(A delta). Throws std::invalid_argument if tr A != 0.
Mat2c cell_exponential(const Mat2c& generator, double delta);

/// Transfer matrices T(x, z) of one field at one spectral parameter.
/// Matrices at the breakpoints are computed once; evaluation inside a cell
/// costs one closed-form exponential.
class Propagator {
public:
    Propagator(HamiltonianField field, Complex z);

    const HamiltonianField& field() const noexcept { return field_; }
    Complex z() const noexcept { return z_; }

    /// T(x, z); throws DomainError(OutOfRange) outside [0, total_length].
    Mat2c at(double x) const;

    /// T at breakpoint k (T at 0 is the identity).
    const Mat2c& at_breakpoint(std::size_t k) const { return prefix_.at(k); }

private:
    HamiltonianField field_;
    Complex z_;
    std::vector<Mat2c> generators_;
    std::vector<Mat2c> prefix_;
};

/// T(x, z) with T(0, z) = I.
Mat2c propagate(const HamiltonianField& field, Complex z, double x);

/// The solution x -> T(x, z) c0.
class Trajectory {
public:
    Trajectory(std::shared_ptr<const Propagator> propagator, Vec2c initial);
    Trajectory(const HamiltonianField& field, Complex z, Vec2c initial);

    Vec2c operator()(double x) const { return propagator_->at(x) * initial_; }

    Complex z() const noexcept { return propagator_->z(); }
    const Vec2c& initial() const noexcept { return initial_; }
    const HamiltonianField& field() const noexcept { return propagator_->field(); }
    const std::shared_ptr<const Propagator>& propagator() const noexcept { return propagator_; }

    VectorFunction as_function() const;

private:
    std::shared_ptr<const Propagator> propagator_;
    Vec2c initial_;
};

/// T(x, z) c0.
Vec2c solution(const HamiltonianField& field, Complex z, const Vec2c& c0, double x);

/// ⟨f, g⟩ = ∫_0^upto f(x)^* H(x) g(x) dx by composite Gauss–Legendre on each
/// cell. `oscillation` bounds |z| for the integrands; each cell is split into
/// at least ceil(oscillation * ‖H‖ * length) panels so the per-panel phase
/// stays below one.
Complex h_inner_product(const HamiltonianField& field, const VectorFunction& f,
                        const VectorFunction& g, const QuadratureRule& quad, double upto,
                        double oscillation = 0.0);

/// Inner product of two trajectories over [0, upto]. Throws
/// std::invalid_argument when they are built on different fields.
Complex h_inner_product(const Trajectory& f, const Trajectory& g, const QuadratureRule& quad,
                        double upto);

/// ⟨f, f⟩ as a real number.
double h_norm_squared(const Trajectory& f, const QuadratureRule& quad, double upto);

} // namespace cansys
