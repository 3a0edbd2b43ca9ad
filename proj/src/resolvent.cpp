#include "cansys/resolvent.hpp"

#include "cansys/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cansys {

Mat2 psd_sqrt(const Mat2& m, double tol) {
    const double tr = m.trace();
    const double det = m.determinant();
    const double scale = std::max(std::abs(tr), 1e-300);
    if (std::abs(m(0, 1) - m(1, 0)) > tol * scale || m(0, 0) < -tol * scale ||
        m(1, 1) < -tol * scale || det < -tol * scale * scale) {
        throw std::invalid_argument("psd_sqrt: matrix is not symmetric positive semi-definite");
    }
    if (tr <= 0.0) {
        return Mat2::Zero();
    }
    const double root_det = std::sqrt(std::max(det, 0.0));
    Mat2 s = m;
    s(0, 0) += root_det;
    s(1, 1) += root_det;
    return s / std::sqrt(tr + 2.0 * root_det);
}

namespace {

Complex alpha_normalization(const BoundaryAngle& alpha, Complex m) {
    return alpha.sin() + m * alpha.cos();
}

bool normalization_vanishes(Complex d, Complex m) {
    return std::abs(d) <= 1e-12 * std::max(1.0, std::abs(m));
}

int oscillation_panels(const Cell& c, double z_abs, int base) {
    const double half_tr = 0.5 * c.trace();
    const double r = std::hypot(0.5 * (c.h11 - c.h22), c.h12);
    const double norm = std::max(std::abs(half_tr + r), std::abs(half_tr - r));
    const double phase = z_abs * norm * c.length;
    return std::max(base, static_cast<int>(std::ceil(std::min(phase, 1e6))));
}

} // namespace

Vec2c w_alpha(const HamiltonianField& field, Complex z, const BoundaryAngle& alpha, Complex m,
              double x) {
    const Complex d = alpha_normalization(alpha, m);
    if (normalization_vanishes(d, m)) {
        throw DomainError(DomainError::Kind::NormalizationZero, "sin(alpha) + m cos(alpha) = 0");
    }
    return propagate(field, z, x) * (alpha.initial_vector() / d);
}

GreenKernel::GreenKernel(const SelfAdjointBVP& bvp, Complex z, KernelForm form)
    : bvp_(bvp), z_(z), form_(form) {
    const Complex zb = std::conj(z);
    try {
        m_ = m_function(bvp_.field, z, bvp_.beta, bvp_.N);
        m_bar_ = (zb == z) ? m_ : m_function(bvp_.field, zb, bvp_.beta, bvp_.N);
    } catch (const DomainError& e) {
        throw DomainError(DomainError::Kind::InResolventSpectrum,
                          std::string("Green kernel undefined: ") + e.what());
    }
    const Complex d = alpha_normalization(bvp_.alpha, m_);
    const Complex d_bar = alpha_normalization(bvp_.alpha, m_bar_);
    if (normalization_vanishes(d, m_) || normalization_vanishes(d_bar, m_bar_)) {
        throw DomainError(DomainError::Kind::InResolventSpectrum,
                          "z is an eigenvalue of the boundary-value relation");
    }
    a_ = bvp_.alpha.initial_vector() / d;
    a_bar_ = bvp_.alpha.initial_vector() / d_bar;
    prop_ = std::make_shared<const Propagator>(bvp_.field, z);
    prop_bar_ = (zb == z) ? prop_ : std::make_shared<const Propagator>(bvp_.field, zb);
}

Vec2c GreenKernel::f(double x) const { return prop_->at(x) * Vec2c(1.0, m_); }
Vec2c GreenKernel::w(double x) const { return prop_->at(x) * a_; }
Vec2c GreenKernel::f_bar(double x) const { return prop_bar_->at(x) * Vec2c(1.0, m_bar_); }
Vec2c GreenKernel::w_bar(double x) const { return prop_bar_->at(x) * a_bar_; }

Mat2c GreenKernel::operator()(double x, double t) const {
    const bool lower = t <= x;
    const bool first_branch = (form_ == KernelForm::Standard) ? lower : !lower;
    if (first_branch) {
        return f(x) * w_bar(t).adjoint();
    }
    return w(x) * f_bar(t).adjoint();
}

Mat2c GreenKernel::jump(double x) const {
    const Mat2c first = f(x) * w_bar(x).adjoint();
    const Mat2c second = w(x) * f_bar(x).adjoint();
    return form_ == KernelForm::Standard ? Mat2c(first - second) : Mat2c(second - first);
}

GreenIntegral::GreenIntegral(std::shared_ptr<const GreenKernel> kernel, VectorFunction h,
                             QuadratureRule quad)
    : kernel_(std::move(kernel)), h_(std::move(h)), quad_(quad) {
    quad_.check();
    const auto& field = kernel_->bvp().field;
    const auto& bp = field.breakpoints();
    const std::size_t n = field.size();
    std::vector<Complex> left(n);
    std::vector<Complex> right(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Split s = partial(k, bp[k], bp[k + 1], bp[k + 1]);
        left[k] = s.left;
        right[k] = partial(k, bp[k], bp[k], bp[k + 1]).right;
    }
    before_.assign(n, 0.0);
    after_.assign(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        before_[k] = before_[k - 1] + left[k - 1];
    }
    for (std::size_t k = n - 1; k-- > 0;) {
        after_[k] = after_[k + 1] + right[k + 1];
    }
}

int GreenIntegral::panels(std::size_t cell) const {
    return oscillation_panels(kernel_->bvp().field.cell(cell), std::abs(kernel_->z()),
                              quad_.panels_per_cell);
}

GreenIntegral::Split GreenIntegral::partial(std::size_t cell, double a, double x, double b) const {
    const GreenKernel& g = *kernel_;
    const Mat2c h = g.bvp().field.cell(cell).matrix().cast<Complex>();
    const bool standard = g.form() == KernelForm::Standard;
    Split out{0.0, 0.0};
    if (h.isZero(0.0)) {
        return out;
    }
    std::vector<double> nodes;
    std::vector<double> weights;
    const int p = panels(cell);
    auto integrate = [&](double lo, double hi, bool left_side) {
        if (!(hi > lo)) {
            return Complex(0.0);
        }
        nodes.clear();
        weights.clear();
        const double width = (hi - lo) / p;
        for (int i = 0; i < p; ++i) {
            const double l = lo + i * width;
            append_gauss_panel(l, (i + 1 == p) ? hi : l + width, quad_.order, nodes, weights);
        }
        Complex sum = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const double t = nodes[k];
            // Left integrand pairs with the t <= x branch.
            const Vec2c inner = left_side ? (standard ? g.w_bar(t) : g.f_bar(t))
                                          : (standard ? g.f_bar(t) : g.w_bar(t));
            sum += weights[k] * inner.dot(h * h_(t));
        }
        return sum;
    };
    out.left = integrate(a, x, true);
    out.right = integrate(x, b, false);
    return out;
}

Vec2c GreenIntegral::operator()(double x) const {
    const GreenKernel& g = *kernel_;
    const auto& field = g.bvp().field;
    const auto loc = field.locate(x);
    const auto& bp = field.breakpoints();
    const Split s = partial(loc.index, bp[loc.index], x, bp[loc.index + 1]);
    const Complex left = before_[loc.index] + s.left;
    const Complex right = after_[loc.index] + s.right;
    if (g.form() == KernelForm::Standard) {
        return g.f(x) * left + g.w(x) * right;
    }
    return g.w(x) * left + g.f(x) * right;
}

VectorFunction GreenIntegral::as_function() const {
    auto self = std::make_shared<const GreenIntegral>(*this);
    return [self](double x) { return (*self)(x); };
}

GreenIntegral apply_resolvent(std::shared_ptr<const GreenKernel> kernel, VectorFunction h,
                              const QuadratureRule& quad) {
    return GreenIntegral(std::move(kernel), std::move(h), quad);
}

double resolvent_residual(const GreenKernel& kernel, const VectorFunction& h,
                          const VectorFunction& y, int mesh_panels) {
    if (mesh_panels < 1) {
        throw std::invalid_argument("residual mesh needs at least one panel per cell");
    }
    const auto& field = kernel.bvp().field;
    const auto& bp = field.breakpoints();
    const Mat2c j = symplectic_j();
    const Complex z = kernel.z();
    double worst = 0.0;
    for (std::size_t c = 0; c < field.size(); ++c) {
        const Mat2c hm = field.cell(c).matrix().cast<Complex>();
        const double width = (bp[c + 1] - bp[c]) / mesh_panels;
        Vec2c y_left = y(bp[c]);
        for (int p = 0; p < mesh_panels; ++p) {
            const double xl = bp[c] + p * width;
            const double xr = (p + 1 == mesh_panels) ? bp[c + 1] : xl + width;
            const double xm = 0.5 * (xl + xr);
            const Vec2c y_right = y(xr);
            const Vec2c dy = (y_right - y_left) / (xr - xl);
            const Vec2c r = j * dy - z * (hm * y(xm)) + hm * h(xm);
            worst = std::max(worst, r.norm());
            y_left = y_right;
        }
    }
    worst = std::max(worst, std::abs(kernel.bvp().alpha.condition(y(0.0))));
    worst = std::max(worst, std::abs(kernel.bvp().beta.condition(y(kernel.bvp().N))));
    return worst;
}

HSMatrix hs_matrix(const SelfAdjointBVP& bvp, double z, const HSOptions& options) {
    if (!std::isfinite(z)) {
        throw std::invalid_argument("HS matrix requires a finite real z");
    }
    options.quad.check();
    const GreenKernel kernel(bvp, Complex(z));

    HSMatrix out;
    std::vector<std::size_t> cell_of;
    const auto& field = bvp.field;
    const auto& bp = field.breakpoints();
    for (std::size_t c = 0; c < field.size(); ++c) {
        const int p = options.quad.panels_per_cell;
        const double width = (bp[c + 1] - bp[c]) / p;
        for (int i = 0; i < p; ++i) {
            const double l = bp[c] + i * width;
            append_gauss_panel(l, (i + 1 == p) ? bp[c + 1] : l + width, options.quad.order,
                               out.nodes, out.weights);
            cell_of.resize(out.nodes.size(), c);
        }
    }
    const std::size_t n = out.nodes.size();
    std::vector<Vec2c> f(n), w(n), fb(n), wb(n);
    std::vector<Mat2c> root(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = out.nodes[i];
        f[i] = kernel.f(x);
        w[i] = kernel.w(x);
        fb[i] = kernel.f_bar(x);
        wb[i] = kernel.w_bar(x);
        root[i] = psd_sqrt(field.cell(cell_of[i]).matrix()).cast<Complex>();
    }
    Eigen::MatrixXcd m(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Mat2c g;
            if (i == j) {
                g = 0.5 * (f[i] * wb[i].adjoint() + w[i] * fb[i].adjoint());
            } else if (out.nodes[j] <= out.nodes[i]) {
                g = f[i] * wb[j].adjoint();
            } else {
                g = w[i] * fb[j].adjoint();
            }
            const double sw = std::sqrt(out.weights[i] * out.weights[j]);
            m.block<2, 2>(2 * i, 2 * j) = -sw * (root[i] * g * root[j]);
        }
    }
    out.hermitian_deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (out.hermitian_deviation > options.hermitian_tol) {
        std::ostringstream msg;
        msg << "HS matrix Hermitian deviation " << out.hermitian_deviation << " exceeds "
            << options.hermitian_tol;
        throw DomainError(DomainError::Kind::PreconditionFailed, msg.str());
    }
    out.matrix = 0.5 * (m + m.adjoint());
    return out;
}

HSComparison hs_eigen_compare(const SelfAdjointBVP& bvp, double z, int k,
                              const HSOptions& options, const EigenSearch& search) {
    if (k < 0) {
        throw std::invalid_argument("eigenvalue count must be non-negative");
    }
    HSComparison out;
    if (k == 0) {
        return out;
    }

    // Widen a window around z until it holds k + 1 shooting eigenvalues or
    // reaches the overflow guard.
    const double norm_integral = bvp.field.integrated_norm(bvp.N);
    const double max_radius = defaults::max_phase / std::max(norm_integral, 1e-300) - std::abs(z);
    double radius = std::min(4.0 * std::numbers::pi / std::max(norm_integral, 1e-300), max_radius);
    std::vector<double> shooting;
    while (true) {
        const auto list = eigenvalues_in(bvp, z - radius, z + radius, search);
        shooting = list.values;
        if (static_cast<int>(shooting.size()) > k || radius >= max_radius) {
            break;
        }
        radius = std::min(2.0 * radius, max_radius);
    }
    std::sort(shooting.begin(), shooting.end(),
              [z](double a, double b) { return std::abs(a - z) < std::abs(b - z); });
    if (static_cast<int>(shooting.size()) < k) {
        throw DomainError(DomainError::Kind::SearchExhausted,
                          "fewer than k shooting eigenvalues below the overflow guard");
    }
    out.shooting_count = static_cast<std::size_t>(k);
    const double inv_k = 1.0 / std::abs(shooting[k - 1] - z);
    const double inv_next =
        static_cast<int>(shooting.size()) > k ? 1.0 / std::abs(shooting[k] - z) : 0.0;
    out.magnitude_floor = 0.5 * (inv_k + inv_next);

    const HSMatrix hs = hs_matrix(bvp, z, options);
    out.hermitian_deviation = hs.hermitian_deviation;
    const HermitianEigen eig = jacobi_eigen(hs.matrix, defaults::jacobi_offdiag_tol);
    out.jacobi_sweeps = eig.sweeps;
    std::vector<double> mus(eig.values.data(), eig.values.data() + eig.values.size());
    out.hs_count = static_cast<std::size_t>(std::count_if(
        mus.begin(), mus.end(), [&](double mu) { return std::abs(mu) > out.magnitude_floor; }));
    out.count_match = out.hs_count == out.shooting_count;

    std::vector<bool> used(mus.size(), false);
    for (int i = 0; i < k; ++i) {
        const double predicted = 1.0 / (shooting[i] - z);
        std::size_t best = mus.size();
        double best_gap = 0.0;
        for (std::size_t j = 0; j < mus.size(); ++j) {
            if (used[j]) {
                continue;
            }
            const double gap = std::abs(mus[j] - predicted);
            if (best == mus.size() || gap < best_gap) {
                best = j;
                best_gap = gap;
            }
        }
        used[best] = true;
        out.pairs.push_back({mus[best], shooting[i], best_gap});
    }
    return out;
}

} // namespace cansys
