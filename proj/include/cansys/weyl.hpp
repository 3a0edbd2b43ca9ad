#pragma once

#include "cansys/defaults.hpp"
#include "cansys/hamiltonian.hpp"
#include "cansys/quadrature.hpp"
#include "cansys/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cansys {

/// Boundary angle in (0, π]. The condition it encodes at an endpoint is
/// f1 sin(angle) + f2 cos(angle) = 0, and (cos angle, -sin angle) spans the
/// vectors satisfying it. π and π/2 produce exact sines and cosines.
class BoundaryAngle {
public:
    explicit BoundaryAngle(double angle);

    double value() const noexcept { return angle_; }
    double sin() const noexcept { return sin_; }
    double cos() const noexcept { return cos_; }

    /// (cos α, -sin α)
    Vec2c initial_vector() const;

    /// f1 sin α + f2 cos α
    Complex condition(const Vec2c& f) const { return f(0) * sin_ + f(1) * cos_; }

private:
    double angle_;
    double sin_;
    double cos_;
};

/// m(z) with f = u + m v satisfying the β-condition at N, where u, v are the
/// columns of T(N, z). Throws DomainError(DenominatorZero) when v itself
/// satisfies the condition.
Complex m_function(const HamiltonianField& field, Complex z, const BoundaryAngle& beta, double N);

/// Produces the Hamiltonian on [0, N] (total_length >= N) for a truncation length N.
using FieldExtender = std::function<HamiltonianField(double)>;

/// Extender that truncates a fixed field; throws DomainError(OutOfRange) beyond it.
FieldExtender truncating_extender(HamiltonianField field);

enum class Verdict { LimitPoint, LimitCircle, Undetermined };
const char* to_string(Verdict verdict);

struct ClassificationReport {
    Verdict verdict = Verdict::Undetermined;
    Complex z;
    std::vector<double> schedule;
    std::vector<double> norms_u;     ///< ‖u‖² on [0, N]
    std::vector<double> norms_v;     ///< ‖v‖² on [0, N]
    std::vector<double> form_min;    ///< smallest value of the Gram form on the unit sphere
    std::vector<double> form_max;    ///< largest value of the Gram form on the unit sphere
    int defect_estimate = 0;
    bool zero_norm_class = false;    ///< a solution class with vanishing H-norm was seen
};

struct ClassifyOptions {
    double rel_tol = defaults::classify_rel_tol;
    QuadratureRule quad{};
};

/// Limit-point / limit-circle classification from norms over a truncation
/// schedule. A sequence counts as convergent when its relative increment over
/// the last step is below rel_tol and, over the last three steps, no
/// increment above rel_tol exceeds the one before it. A sequence diverges
/// when it grows by at least a factor 2 from the largest schedule point
/// N_j <= N_last / 2 to N_last. LimitCircle needs ‖u‖² and ‖v‖² convergent;
/// LimitPoint needs one of them divergent.
///
/// defect_estimate counts convergent extremal values of the Gram form
/// c ↦ ∫_0^N |T c|²_H on unit vectors c (2, 1 or 0).
ClassificationReport classify(const FieldExtender& extender, Complex z,
                              const std::vector<double>& schedule,
                              const ClassifyOptions& options = {});

struct DefectEntry {
    Complex z;
    int defect_estimate;
    Verdict verdict;
};

struct DefectScan {
    std::vector<DefectEntry> entries;
    bool constant = true;  ///< every entry has the same defect estimate
};

DefectScan defect_constancy_scan(const FieldExtender& extender, const std::vector<Complex>& zs,
                                 const std::vector<double>& schedule,
                                 const ClassifyOptions& options = {});

struct DeBrangesReport {
    std::vector<double> schedule;
    std::vector<double> integrated_trace;      ///< ∫_0^N tr H
    std::vector<double> constant_norm_sum;     ///< ‖u‖² + ‖v‖² at z = 0
    double max_trace_error = 0.0;              ///< max |∫ tr H - N| / N
    double max_norm_error = 0.0;               ///< max |norm sum - ∫ tr H| / ∫ tr H
    bool trace_check = false;
    bool norm_check = false;
    ClassificationReport classification;       ///< at z = i
    bool limit_point = false;
    bool passed() const { return trace_check && norm_check && limit_point; }
};

/// Requires tr H ≡ 1 per cell (within 1e-12), else DomainError(NotTraceNormalized).
DeBrangesReport debranges_check(const HamiltonianField& field, const std::vector<double>& schedule,
                                const ClassifyOptions& options = {});

} // namespace cansys
