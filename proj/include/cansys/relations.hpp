#pragma once

#include "cansys/defaults.hpp"
#include "cansys/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace cansys::relations {

using Matrix = Eigen::MatrixXcd;

/// Subspace of C^n ⊕ C^n stored by an orthonormal basis (columns of a
/// 2n x d matrix; the first n rows are the f-parts, the last n the g-parts).
/// The basis is the left singular vectors of the spanning set above the
/// relative rank threshold, so two relations are equal iff their projectors are.
class LinearRelation {
public:
    /// Span of the columns of `spanning` (2n rows).
    LinearRelation(Eigen::Index n, const Matrix& spanning);

    /// Span of the pairs (f_i, g_i), the columns of `f` and `g` (n x m each).
    static LinearRelation from_pairs(const Matrix& f, const Matrix& g);
    /// Graph {(x, A x)} of a square matrix.
    static LinearRelation graph(const Matrix& a);
    /// {0} ⊕ C^n.
    static LinearRelation multivalued(Eigen::Index n);

    Eigen::Index ambient_dim() const noexcept { return n_; }
    Eigen::Index dim() const noexcept { return basis_.cols(); }
    const Matrix& basis() const noexcept { return basis_; }
    Matrix f_part() const { return basis_.topRows(n_); }
    Matrix g_part() const { return basis_.bottomRows(n_); }
    Matrix projector() const { return basis_ * basis_.adjoint(); }

    /// True if the projectors agree within `tol` (max-abs).
    bool same_as(const LinearRelation& other, double tol = defaults::projector_tol) const;
    /// True if this ⊂ other within `tol`.
    bool contained_in(const LinearRelation& other, double tol = defaults::projector_tol) const;

    /// Sum of two relations on the same space.
    LinearRelation operator+(const LinearRelation& other) const;

private:
    Eigen::Index n_;
    Matrix basis_;
};

/// Numerical rank with threshold rank_rel_threshold * max(σ_max, scale).
/// Pass the known scale of m when σ_max alone could be rounding noise.
Eigen::Index numerical_rank(const Matrix& m, double scale = 0.0);
/// Orthonormal basis of the null space of m (columns), same threshold.
Matrix null_space(const Matrix& m, double scale = 0.0);

/// R* = {(h, k) : ⟨g, h⟩ = ⟨f, k⟩ for all (f, g) ∈ R}: the orthogonal
/// complement of {(g, -f)}. dim R* = 2n - dim R.
LinearRelation adjoint(const LinearRelation& r);

bool is_symmetric(const LinearRelation& r);
bool is_selfadjoint(const LinearRelation& r);

/// n - rank{z f - g}.
int defect_index(const LinearRelation& r, Complex z);

/// True iff no non-zero f has (f, z f) ∈ R.
bool in_regularity_domain(const LinearRelation& r, Complex z);

/// True iff {(z f - g, f)} is the graph of an everywhere defined operator,
/// i.e. (z - R)^{-1} exists in B(C^n).
bool in_resolvent_set(const LinearRelation& r, Complex z);

/// Eigenvalues of the operator part (complement of the regularity domain).
/// Throws DomainError(NotSelfAdjoint) unless r is self-adjoint.
std::vector<double> spectral_kernel(const LinearRelation& r);

/// Spectrum from the resolvent at z0 = i: λ = z0 - 1/ν over the non-zero
/// eigenvalues ν of (z0 - R)^{-1}, each confirmed by in_resolvent_set(λ) == false.
std::vector<double> spectrum_selfadjoint(const LinearRelation& r);

/// Bounded operator (z - R)^{-1} as an n x n matrix (z must be in the resolvent set).
Matrix resolvent_operator(const LinearRelation& r, Complex z);

/// Set equality of two sorted real lists within tol.
bool same_points(const std::vector<double>& a, const std::vector<double>& b, double tol = 1e-8);

struct RelationReport {
    bool symmetric = false;
    bool selfadjoint = false;
    int defect_upper = 0;   ///< at z = i
    int defect_lower = 0;   ///< at z = -i
    std::vector<double> spectrum;
    std::vector<double> spectral_kernel;
};

RelationReport describe(const LinearRelation& r);

struct ExtensionCheck {
    int defect = 0;                   ///< d = β(S, ±i)
    int trials = 0;
    int symmetric_found = 0;
    int selfadjoint_found = 0;
    int violations = 0;               ///< self-adjoint with dim ≠ dim S + d, or the converse
    std::vector<int> selfadjoint_dims;  ///< dim R' - dim S for each self-adjoint R' found
    bool existence = false;           ///< at least one self-adjoint extension found
};

/// Random symmetric enlargements S + L with L neutral for the boundary form
/// on S* ⊖ S, of random dimension 0..d. Each is checked for symmetry and
/// self-adjointness; the dimension of every self-adjoint one must be d.
/// Requires S symmetric with equal defect indices at ±i (DomainError(PreconditionFailed)).
/// Throws DomainError(SearchExhausted) when no self-adjoint extension turns up.
ExtensionCheck extension_dimension_check(const LinearRelation& s, int trials, std::uint64_t seed);

/// Random self-adjoint relation on C^n: a Hermitian operator on a random
/// subspace of dimension `operator_rank` plus the orthogonal multivalued part.
LinearRelation random_selfadjoint(Eigen::Index n, Eigen::Index operator_rank, std::uint64_t seed);

/// Random symmetric relation: a random subspace of dimension `dim` of a
/// random self-adjoint relation.
LinearRelation random_symmetric(Eigen::Index n, Eigen::Index dim, std::uint64_t seed);

} // namespace cansys::relations
