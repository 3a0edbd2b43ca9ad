#include "cansys/jacobi.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cansys {

namespace {

double off_diagonal_norm(const Eigen::MatrixXcd& a) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j) {
                sum += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(sum);
}

} // namespace

HermitianEigen jacobi_eigen(const Eigen::MatrixXcd& input, double tol, int max_sweeps) {
    if (input.rows() != input.cols()) {
        throw std::invalid_argument("jacobi_eigen requires a square matrix");
    }
    using C = std::complex<double>;
    const Eigen::Index n = input.rows();
    Eigen::MatrixXcd a = 0.5 * (input + input.adjoint());
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
    const double scale = std::max(a.norm(), 1e-300);

    HermitianEigen out;
    out.off_diagonal = off_diagonal_norm(a);
    while (out.off_diagonal > tol * scale && out.sweeps < max_sweeps) {
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const C apq = a(p, q);
                const double g = std::abs(apq);
                if (g == 0.0) {
                    continue;
                }
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Phase e makes the (p, q) entry real; then a real rotation
                // annihilates it.
                const C e = apq / g;
                const double theta = (aqq - app) / (2.0 * g);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // U = diag(1, conj(e)) * [[c, s], [-s, c]]
                const C u00 = c;
                const C u01 = s;
                const C u10 = -s * std::conj(e);
                const C u11 = c * std::conj(e);
                for (Eigen::Index k = 0; k < n; ++k) {
                    const C akp = a(k, p);
                    const C akq = a(k, q);
                    a(k, p) = akp * u00 + akq * u10;
                    a(k, q) = akp * u01 + akq * u11;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const C apk = a(p, k);
                    const C aqk = a(q, k);
                    a(p, k) = std::conj(u00) * apk + std::conj(u10) * aqk;
                    a(q, k) = std::conj(u01) * apk + std::conj(u11) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (Eigen::Index k = 0; k < n; ++k) {
                    const C vkp = v(k, p);
                    const C vkq = v(k, q);
                    v(k, p) = vkp * u00 + vkq * u10;
                    v(k, q) = vkp * u01 + vkq * u11;
                }
            }
        }
        ++out.sweeps;
        out.off_diagonal = off_diagonal_norm(a);
    }
    out.values = a.diagonal().real();
    out.vectors = std::move(v);
    return out;
}

} // namespace cansys
