#pragma once

#include "cansys/defaults.hpp"
#include "cansys/hamiltonian.hpp"
#include "cansys/transfer.hpp"
#include "cansys/weyl.hpp"

#include <vector>

namespace cansys {

/// Self-adjoint boundary-value relation on [0, N]:
/// f1(0) sin α + f2(0) cos α = 0 and f1(N) sin β + f2(N) cos β = 0.
struct SelfAdjointBVP {
    SelfAdjointBVP(HamiltonianField field, double N, BoundaryAngle alpha, BoundaryAngle beta);
    SelfAdjointBVP(HamiltonianField field, BoundaryAngle alpha, BoundaryAngle beta);

    HamiltonianField field;  ///< already truncated to [0, N]
    double N;
    BoundaryAngle alpha;
    BoundaryAngle beta;
};

/// χ(λ) = u_α1(N, λ) sin β + u_α2(N, λ) cos β with u_α(0) = (cos α, -sin α).
/// Real for real λ. Throws DomainError(Overflow) when |λ| ∫‖H‖ exceeds the guard.
double char_function(const SelfAdjointBVP& bvp, double lambda);

struct EigenList {
    std::vector<double> values;     ///< strictly increasing
    std::vector<double> residuals;  ///< |χ(E)| / max(1, |u_α(N, E)|)
};

struct EigenSearch {
    int grid_points = defaults::scan_grid_points;
    double tol = defaults::bisection_tol;
};

/// Eigenvalues in [lo, hi]: sign changes of χ on a uniform grid refined by
/// bisection to interval width <= tol. Grid nodes where χ vanishes exactly
/// are reported as roots. Double roots without a sign change are missed.
EigenList eigenvalues_in(const SelfAdjointBVP& bvp, double lo, double hi,
                         const EigenSearch& search = {});

/// Relative boundary residual used by EigenList and eigenfunction().
double boundary_residual(const SelfAdjointBVP& bvp, double lambda);

/// The solution with initial data (cos α, -sin α) at λ. Throws
/// DomainError(NotAnEigenvalue) if the boundary residual exceeds `tol`.
Trajectory eigenfunction(const SelfAdjointBVP& bvp, double lambda,
                         double tol = defaults::eigen_residual_tol);

} // namespace cansys
