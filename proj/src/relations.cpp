#include "cansys/relations.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cansys::relations {

namespace {

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Matrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = Complex(2.0 * unit_uniform(rng) - 1.0, 2.0 * unit_uniform(rng) - 1.0);
        }
    }
    return m;
}

Matrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
    if (n == 0) {
        return Matrix(0, 0);
    }
    Eigen::HouseholderQR<Matrix> qr(random_complex(n, n, rng));
    return qr.householderQ() * Matrix::Identity(n, n);
}

// Orthonormal basis of the column span, threshold relative to max(σ_max, floor).
Matrix orthonormal_span(const Matrix& m, double floor = 0.0) {
    if (m.cols() == 0 || m.rows() == 0) {
        return Matrix(m.rows(), 0);
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double top = std::max(sv.size() > 0 ? sv(0) : 0.0, floor);
    Eigen::Index rank = 0;
    while (rank < sv.size() && top > 0.0 && sv(rank) > defaults::rank_rel_threshold * top) {
        ++rank;
    }
    return svd.matrixU().leftCols(rank);
}

// Orthonormal basis of the orthogonal complement of the column span.
Matrix orthogonal_complement(const Matrix& m) {
    const Eigen::Index rows = m.rows();
    if (m.cols() == 0) {
        return Matrix::Identity(rows, rows);
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && top > 0.0 && sv(rank) > defaults::rank_rel_threshold * top) {
        ++rank;
    }
    return svd.matrixU().rightCols(rows - rank);
}

// zF - G built from an orthonormal basis has norm of order max(1, |z|).
double pencil_scale(Complex z) { return std::max(1.0, std::abs(z)); }

} // namespace

LinearRelation::LinearRelation(Eigen::Index n, const Matrix& spanning)
    : n_(n), basis_(orthonormal_span(spanning)) {
    if (n < 1 || spanning.rows() != 2 * n) {
        throw std::invalid_argument("spanning set must have 2n rows with n >= 1");
    }
}

LinearRelation LinearRelation::from_pairs(const Matrix& f, const Matrix& g) {
    if (f.rows() != g.rows() || f.cols() != g.cols()) {
        throw std::invalid_argument("f and g parts must have the same shape");
    }
    Matrix stacked(2 * f.rows(), f.cols());
    stacked << f, g;
    return LinearRelation(f.rows(), stacked);
}

LinearRelation LinearRelation::graph(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("graph requires a square matrix");
    }
    return from_pairs(Matrix::Identity(a.rows(), a.rows()), a);
}

LinearRelation LinearRelation::multivalued(Eigen::Index n) {
    return from_pairs(Matrix::Zero(n, n), Matrix::Identity(n, n));
}

bool LinearRelation::same_as(const LinearRelation& other, double tol) const {
    if (n_ != other.n_ || dim() != other.dim()) {
        return false;
    }
    return (projector() - other.projector()).cwiseAbs().maxCoeff() <= tol;
}

bool LinearRelation::contained_in(const LinearRelation& other, double tol) const {
    if (n_ != other.n_) {
        return false;
    }
    if (dim() == 0) {
        return true;
    }
    const Matrix residual = basis_ - other.projector() * basis_;
    return residual.cwiseAbs().maxCoeff() <= tol;
}

LinearRelation LinearRelation::operator+(const LinearRelation& other) const {
    if (n_ != other.n_) {
        throw std::invalid_argument("relations live on different spaces");
    }
    Matrix stacked(2 * n_, dim() + other.dim());
    stacked << basis_, other.basis_;
    return LinearRelation(n_, stacked);
}

Eigen::Index numerical_rank(const Matrix& m, double scale) {
    if (m.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double top = std::max(sv(0), scale);
    Eigen::Index rank = 0;
    while (rank < sv.size() && top > 0.0 && sv(rank) > defaults::rank_rel_threshold * top) {
        ++rank;
    }
    return rank;
}

Matrix null_space(const Matrix& m, double scale) {
    const Eigen::Index cols = m.cols();
    if (m.rows() == 0 || cols == 0) {
        return Matrix::Identity(cols, cols);
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = std::max(sv(0), scale);
    Eigen::Index rank = 0;
    while (rank < sv.size() && top > 0.0 && sv(rank) > defaults::rank_rel_threshold * top) {
        ++rank;
    }
    return svd.matrixV().rightCols(cols - rank);
}

LinearRelation adjoint(const LinearRelation& r) {
    const Eigen::Index n = r.ambient_dim();
    Matrix turned(2 * n, r.dim());
    turned << r.g_part(), -r.f_part();
    return LinearRelation(n, orthogonal_complement(turned));
}

bool is_symmetric(const LinearRelation& r) { return r.contained_in(adjoint(r)); }

bool is_selfadjoint(const LinearRelation& r) { return r.same_as(adjoint(r)); }

int defect_index(const LinearRelation& r, Complex z) {
    const Matrix range = z * r.f_part() - r.g_part();
    return static_cast<int>(r.ambient_dim() - numerical_rank(range, pencil_scale(z)));
}

bool in_regularity_domain(const LinearRelation& r, Complex z) {
    if (r.dim() == 0) {
        return true;
    }
    const Matrix kernel = null_space(r.g_part() - z * r.f_part(), pencil_scale(z));
    if (kernel.cols() == 0) {
        return true;
    }
    return (r.f_part() * kernel).cwiseAbs().maxCoeff() <= defaults::rank_rel_threshold;
}

bool in_resolvent_set(const LinearRelation& r, Complex z) {
    const Eigen::Index n = r.ambient_dim();
    const Matrix k = z * r.f_part() - r.g_part();
    if (numerical_rank(k, pencil_scale(z)) != n) {
        return false;
    }
    const Matrix kernel = null_space(k, pencil_scale(z));
    if (kernel.cols() == 0) {
        return true;
    }
    return (r.f_part() * kernel).cwiseAbs().maxCoeff() <= defaults::rank_rel_threshold;
}

Matrix resolvent_operator(const LinearRelation& r, Complex z) {
    if (!in_resolvent_set(r, z)) {
        throw DomainError(DomainError::Kind::InResolventSpectrum,
                          "z is not in the resolvent set of the relation");
    }
    // (z - R)^{-1} maps z f - g to f.
    const Matrix k = z * r.f_part() - r.g_part();
    return r.f_part() * k.completeOrthogonalDecomposition().pseudoInverse();
}

namespace {

void require_selfadjoint(const LinearRelation& r) {
    if (!is_selfadjoint(r)) {
        throw DomainError(DomainError::Kind::NotSelfAdjoint, "relation is not self-adjoint");
    }
}

} // namespace

std::vector<double> spectral_kernel(const LinearRelation& r) {
    require_selfadjoint(r);
    const Matrix f = r.f_part();
    // Basis columns have unit norm, so the f part is judged on that scale.
    const Matrix dom = orthonormal_span(f, 1.0);
    std::vector<double> out;
    if (dom.cols() == 0) {
        return out;
    }
    // Operator part: f ↦ P_dom g, with g recovered through the minimal-norm
    // coefficients of f; the multivalued part is orthogonal to dom.
    const Matrix coeff = f.completeOrthogonalDecomposition().pseudoInverse();
    const Matrix op = dom.adjoint() * r.g_part() * coeff * dom;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (op + op.adjoint()));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        out.push_back(es.eigenvalues()(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> spectrum_selfadjoint(const LinearRelation& r) {
    require_selfadjoint(r);
    const Complex z0(0.0, 1.0);
    const Matrix resolvent = resolvent_operator(r, z0);
    Eigen::ComplexEigenSolver<Matrix> es(resolvent);
    double largest = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        largest = std::max(largest, std::abs(es.eigenvalues()(i)));
    }
    std::vector<double> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex nu = es.eigenvalues()(i);
        if (std::abs(nu) <= defaults::rank_rel_threshold * std::max(1.0, largest)) {
            continue;  // multivalued part
        }
        const Complex lambda = z0 - 1.0 / nu;
        if (!in_resolvent_set(r, Complex(lambda.real(), 0.0))) {
            out.push_back(lambda.real());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool same_points(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol * std::max(1.0, std::abs(a[i]))) {
            return false;
        }
    }
    return true;
}

RelationReport describe(const LinearRelation& r) {
    RelationReport report;
    report.symmetric = is_symmetric(r);
    report.selfadjoint = report.symmetric && is_selfadjoint(r);
    report.defect_upper = defect_index(r, Complex(0.0, 1.0));
    report.defect_lower = defect_index(r, Complex(0.0, -1.0));
    if (report.selfadjoint) {
        report.spectrum = spectrum_selfadjoint(r);
        report.spectral_kernel = spectral_kernel(r);
    }
    return report;
}

ExtensionCheck extension_dimension_check(const LinearRelation& s, int trials, std::uint64_t seed) {
    if (trials < 1) {
        throw std::invalid_argument("extension search needs at least one trial");
    }
    if (!is_symmetric(s)) {
        throw DomainError(DomainError::Kind::PreconditionFailed, "relation is not symmetric");
    }
    const int d_plus = defect_index(s, Complex(0.0, 1.0));
    const int d_minus = defect_index(s, Complex(0.0, -1.0));
    if (d_plus != d_minus) {
        throw DomainError(DomainError::Kind::PreconditionFailed,
                          "defect indices at +i and -i differ; no self-adjoint extension exists");
    }
    ExtensionCheck check;
    check.defect = d_plus;
    check.trials = trials;

    const Eigen::Index n = s.ambient_dim();
    const LinearRelation s_star = adjoint(s);
    // Boundary space S* ⊖ S and the Hermitian form i(⟨x_g, y_f⟩ - ⟨x_f, y_g⟩) on it.
    const Matrix boundary =
        orthonormal_span(s_star.basis() - s.projector() * s_star.basis());
    const Matrix bf = boundary.topRows(n);
    const Matrix bg = boundary.bottomRows(n);
    const Complex i(0.0, 1.0);
    const Matrix form = i * (bg.adjoint() * bf - bf.adjoint() * bg);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (form + form.adjoint()));
    std::vector<Eigen::VectorXcd> positive;
    std::vector<Eigen::VectorXcd> negative;
    const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lambda = es.eigenvalues()(k);
        if (std::abs(lambda) <= defaults::rank_rel_threshold * scale) {
            continue;
        }
        const Eigen::VectorXcd v = boundary * es.eigenvectors().col(k) / std::sqrt(std::abs(lambda));
        (lambda > 0.0 ? positive : negative).push_back(v);
    }
    const Eigen::Index d = std::min<Eigen::Index>(
        {static_cast<Eigen::Index>(positive.size()), static_cast<Eigen::Index>(negative.size()),
         check.defect});

    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const Eigen::Index k =
            d == 0 ? 0 : static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(d + 1));
        const Matrix u = random_unitary(d, rng);
        Matrix lagrangian(2 * n, k);
        for (Eigen::Index j = 0; j < k; ++j) {
            Eigen::VectorXcd v = positive[j];
            for (Eigen::Index m = 0; m < d; ++m) {
                v += u(m, j) * negative[m];
            }
            lagrangian.col(j) = v;
        }
        const LinearRelation candidate = k == 0 ? s : s + LinearRelation(n, lagrangian);
        if (!is_symmetric(candidate)) {
            continue;
        }
        ++check.symmetric_found;
        const int added = static_cast<int>(candidate.dim() - s.dim());
        const bool selfadjoint = is_selfadjoint(candidate);
        if (selfadjoint) {
            ++check.selfadjoint_found;
            check.selfadjoint_dims.push_back(added);
            if (added != check.defect) {
                ++check.violations;
            }
        } else if (added == check.defect) {
            ++check.violations;
        }
    }
    check.existence = check.selfadjoint_found > 0;
    if (!check.existence) {
        throw DomainError(DomainError::Kind::SearchExhausted,
                          "no self-adjoint extension found within the trial budget");
    }
    return check;
}

LinearRelation random_selfadjoint(Eigen::Index n, Eigen::Index operator_rank, std::uint64_t seed) {
    if (n < 1 || operator_rank < 0 || operator_rank > n) {
        throw std::invalid_argument("random_selfadjoint: need 0 <= rank <= n, n >= 1");
    }
    std::mt19937_64 rng(seed);
    const Matrix q = random_unitary(n, rng);
    const Matrix dom = q.leftCols(operator_rank);
    const Matrix mul = q.rightCols(n - operator_rank);
    Matrix a = random_complex(operator_rank, operator_rank, rng);
    a = (1.5 * (a + a.adjoint())).eval();
    Matrix f(n, n);
    Matrix g(n, n);
    f << dom, Matrix::Zero(n, n - operator_rank);
    g << dom * a, mul;
    return LinearRelation::from_pairs(f, g);
}

LinearRelation random_symmetric(Eigen::Index n, Eigen::Index dim, std::uint64_t seed) {
    if (dim < 0 || dim > n) {
        throw std::invalid_argument("random_symmetric: need 0 <= dim <= n");
    }
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const Eigen::Index rank = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n + 1));
    const LinearRelation t = random_selfadjoint(n, rank, rng());
    const Matrix coeffs = random_complex(t.dim(), dim, rng);
    return LinearRelation(n, t.basis() * coeffs);
}

} // namespace cansys::relations
