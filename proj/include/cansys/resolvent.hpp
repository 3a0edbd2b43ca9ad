#pragma once

#include "cansys/defaults.hpp"
#include "cansys/extension.hpp"
#include "cansys/quadrature.hpp"
#include "cansys/transfer.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace cansys {

/// Unique PSD square root of a real PSD 2x2 matrix:
/// (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)). Throws
/// std::invalid_argument for indefinite input (beyond tol relative to tr M).
Mat2 psd_sqrt(const Mat2& m, double tol = defaults::psd_tolerance);

/// w_α(x, z) = T(x, z) (cos α, -sin α) / (sin α + m cos α).
/// Throws DomainError(NormalizationZero) when the normalization vanishes.
Vec2c w_alpha(const HamiltonianField& field, Complex z, const BoundaryAngle& alpha, Complex m,
              double x);

/// Which branch of the kernel is used for t <= x.
enum class KernelForm {
    Standard,  ///< f(x,z) w_α(t,z̄)^* for t <= x, w_α(x,z) f(t,z̄)^* for t > x
    Swapped,   ///< branches exchanged (negative control only)
};

/// Green kernel of the boundary-value relation at a point z of its resolvent
/// set, built from f = u + m v (β-condition at N) and w_α (α-condition at 0).
///
/// For the standard form, y(x) = ∫_0^N G(x,t) H(t) h(t) dt solves
/// J y' = z H y - H h with both boundary conditions, and
/// G(x, x⁻) - G(x, x⁺) = J.
class GreenKernel {
public:
    /// Throws DomainError(InResolventSpectrum) when z is an eigenvalue.
    GreenKernel(const SelfAdjointBVP& bvp, Complex z, KernelForm form = KernelForm::Standard);

    const SelfAdjointBVP& bvp() const noexcept { return bvp_; }
    Complex z() const noexcept { return z_; }
    Complex m() const noexcept { return m_; }
    Complex m_conj_point() const noexcept { return m_bar_; }
    KernelForm form() const noexcept { return form_; }

    Vec2c f(double x) const;      ///< f(x, z)
    Vec2c w(double x) const;      ///< w_α(x, z)
    Vec2c f_bar(double x) const;  ///< f(x, z̄)
    Vec2c w_bar(double x) const;  ///< w_α(x, z̄)

    /// G(x, t, z) as a 2x2 matrix.
    Mat2c operator()(double x, double t) const;

    /// G(x, x⁻) - G(x, x⁺); equals J for the standard form.
    Mat2c jump(double x) const;

private:
    SelfAdjointBVP bvp_;
    Complex z_;
    KernelForm form_;
    Complex m_;
    Complex m_bar_;
    Vec2c a_;      ///< initial data of w_α(·, z)
    Vec2c a_bar_;  ///< initial data of w_α(·, z̄)
    std::shared_ptr<const Propagator> prop_;
    std::shared_ptr<const Propagator> prop_bar_;
};

/// y(x) = ∫_0^N G(x,t) H(t) h(t) dt, evaluated by per-cell Gauss–Legendre
/// quadrature split at t = x. Whole-cell integrals are precomputed so each
/// evaluation costs one partial cell.
class GreenIntegral {
public:
    GreenIntegral(std::shared_ptr<const GreenKernel> kernel, VectorFunction h,
                  QuadratureRule quad = {});

    Vec2c operator()(double x) const;
    VectorFunction as_function() const;
    const GreenKernel& kernel() const noexcept { return *kernel_; }

private:
    struct Split {
        Complex left;   ///< ∫ over [cell start, x]
        Complex right;  ///< ∫ over [x, cell end]
    };
    Split partial(std::size_t cell, double a, double x, double b) const;
    int panels(std::size_t cell) const;

    std::shared_ptr<const GreenKernel> kernel_;
    VectorFunction h_;
    QuadratureRule quad_;
    std::vector<Complex> before_;  ///< Σ over cells < k of ∫ Q* H h   (left factor)
    std::vector<Complex> after_;   ///< Σ over cells > k of ∫ S* H h   (right factor)
};

/// The Green integral of h. For an eigenfunction φ at E this returns φ/(z - E):
/// the integral solves J y' = z H y - H h, i.e. it is (z - T)^{-1} h.
GreenIntegral apply_resolvent(std::shared_ptr<const GreenKernel> kernel, VectorFunction h,
                              const QuadratureRule& quad = {});

/// max over panel midpoints of ‖J y' - z H y + H h‖ (y' by centered
/// differences over each of `mesh_panels` panels per cell), together with
/// the boundary residuals |α-condition(y(0))| and |β-condition(y(N))|.
double resolvent_residual(const GreenKernel& kernel, const VectorFunction& h,
                          const VectorFunction& y, int mesh_panels = defaults::residual_mesh_panels);

/// Nyström discretization of the resolvent (T - z)^{-1} carried to L²(I) by
/// H^{1/2}: entries -H^{1/2}(x_i) G(x_i, x_j) H^{1/2}(x_j) sqrt(w_i w_j), with
/// the kernel averaged over its two branches on coincident nodes.
struct HSMatrix {
    std::vector<double> nodes;
    std::vector<double> weights;
    Eigen::MatrixXcd matrix;           ///< 2n x 2n, symmetrized
    double hermitian_deviation = 0.0;  ///< max |M - M^*| before symmetrization
};

struct HSOptions {
    QuadratureRule quad{defaults::quadrature_order, defaults::hs_panels_per_cell};
    double hermitian_tol = defaults::hermitian_tol;
};

/// Requires real z outside the spectrum; std::invalid_argument for non-real z,
/// DomainError(InResolventSpectrum) at an eigenvalue, DomainError(PreconditionFailed)
/// when the Hermitian deviation exceeds hermitian_tol.
HSMatrix hs_matrix(const SelfAdjointBVP& bvp, double z, const HSOptions& options = {});

struct EigenPair {
    double mu;   ///< HS eigenvalue
    double E;    ///< shooting eigenvalue
    double gap;  ///< |mu - 1/(E - z)|
};

struct HSComparison {
    std::vector<EigenPair> pairs;  ///< ordered by |E - z|
    std::size_t shooting_count = 0;
    std::size_t hs_count = 0;      ///< HS eigenvalues above the magnitude floor
    double magnitude_floor = 0.0;
    bool count_match = true;
    double hermitian_deviation = 0.0;
    int jacobi_sweeps = 0;
};

/// Pairs the k shooting eigenvalues nearest z with HS eigenvalues through
/// mu <-> 1/(E - z). The HS count is taken above the midpoint between
/// 1/|E_k - z| and 1/|E_{k+1} - z|; a mismatch signals a missed root.
HSComparison hs_eigen_compare(const SelfAdjointBVP& bvp, double z, int k,
                              const HSOptions& options = {}, const EigenSearch& search = {});

} // namespace cansys
