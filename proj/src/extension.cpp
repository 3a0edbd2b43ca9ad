#include "cansys/extension.hpp"

#include <cmath>
#include <sstream>

namespace cansys {

SelfAdjointBVP::SelfAdjointBVP(HamiltonianField field_in, double N_in, BoundaryAngle alpha_in,
                               BoundaryAngle beta_in)
    : field(N_in == field_in.total_length() ? std::move(field_in) : truncate(field_in, N_in)),
      N(N_in), alpha(alpha_in), beta(beta_in) {
    if (!(N > 0.0)) {
        throw DomainError(DomainError::Kind::OutOfRange, "interval length must be positive");
    }
}

SelfAdjointBVP::SelfAdjointBVP(HamiltonianField field_in, BoundaryAngle alpha_in,
                               BoundaryAngle beta_in)
    : SelfAdjointBVP(field_in, field_in.total_length(), alpha_in, beta_in) {}

namespace {

void guard_phase(const SelfAdjointBVP& bvp, double lambda) {
    const double phase = std::abs(lambda) * bvp.field.integrated_norm(bvp.N);
    if (!std::isfinite(lambda) || phase > defaults::max_phase) {
        std::ostringstream msg;
        msg << "|lambda| * integral of |H| = " << phase << " exceeds the numerically safe bound "
            << defaults::max_phase;
        throw DomainError(DomainError::Kind::Overflow, msg.str());
    }
}

Vec2c endpoint_solution(const SelfAdjointBVP& bvp, double lambda) {
    return propagate(bvp.field, Complex(lambda), bvp.N) * bvp.alpha.initial_vector();
}

} // namespace

double char_function(const SelfAdjointBVP& bvp, double lambda) {
    guard_phase(bvp, lambda);
    return bvp.beta.condition(endpoint_solution(bvp, lambda)).real();
}

double boundary_residual(const SelfAdjointBVP& bvp, double lambda) {
    guard_phase(bvp, lambda);
    const Vec2c end = endpoint_solution(bvp, lambda);
    return std::abs(bvp.beta.condition(end)) / std::max(1.0, end.norm());
}

EigenList eigenvalues_in(const SelfAdjointBVP& bvp, double lo, double hi,
                         const EigenSearch& search) {
    if (!(lo < hi)) {
        throw std::invalid_argument("eigenvalue window must satisfy lo < hi");
    }
    if (search.grid_points < 2) {
        throw std::invalid_argument("eigenvalue scan needs at least 2 grid points");
    }
    if (!(search.tol > 0.0)) {
        throw std::invalid_argument("bisection tolerance must be positive");
    }
    guard_phase(bvp, lo);
    guard_phase(bvp, hi);

    const int n = search.grid_points;
    std::vector<double> grid(n);
    std::vector<double> chi(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = (i + 1 == n) ? hi : lo + (hi - lo) * i / (n - 1);
        chi[i] = char_function(bvp, grid[i]);
    }

    EigenList out;
    auto push = [&](double root) {
        out.values.push_back(root);
        out.residuals.push_back(boundary_residual(bvp, root));
    };
    for (int i = 0; i < n; ++i) {
        if (chi[i] == 0.0) {
            push(grid[i]);
            continue;
        }
        if (i + 1 < n && chi[i + 1] != 0.0 && std::signbit(chi[i]) != std::signbit(chi[i + 1])) {
            double a = grid[i];
            double b = grid[i + 1];
            double fa = chi[i];
            while (b - a > search.tol) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) {
                    break;
                }
                const double fm = char_function(bvp, mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(fa)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            push(0.5 * (a + b));
        }
    }
    return out;
}

Trajectory eigenfunction(const SelfAdjointBVP& bvp, double lambda, double tol) {
    const double residual = boundary_residual(bvp, lambda);
    if (residual > tol) {
        std::ostringstream msg;
        msg << "lambda = " << lambda << " is not an eigenvalue (boundary residual " << residual
            << ")";
        throw DomainError(DomainError::Kind::NotAnEigenvalue, msg.str());
    }
    return Trajectory(bvp.field, Complex(lambda), bvp.alpha.initial_vector());
}

} // namespace cansys
