#pragma once

#include <Eigen/Dense>

namespace cansys {

struct HermitianEigen {
    Eigen::VectorXd values;     ///< unsorted, in diagonal order after the last sweep
    Eigen::MatrixXcd vectors;   ///< columns
    int sweeps = 0;
    double off_diagonal = 0.0;  ///< final off-diagonal Frobenius norm
};

/// Cyclic Jacobi rotations for a Hermitian matrix. Sweeps until the
/// off-diagonal Frobenius norm is <= tol * ‖A‖_F or max_sweeps is reached.
/// Only the upper triangle's Hermitian part is used.
HermitianEigen jacobi_eigen(const Eigen::MatrixXcd& a, double tol = 1e-12, int max_sweeps = 100);

} // namespace cansys
