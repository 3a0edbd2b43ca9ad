#include "cansys/weyl.hpp"

#include "cansys/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cansys {

BoundaryAngle::BoundaryAngle(double angle) : angle_(angle) {
    if (!(angle > 0.0) || angle > std::numbers::pi) {
        throw std::invalid_argument("boundary angle must lie in (0, pi]");
    }
    if (angle == std::numbers::pi) {
        sin_ = 0.0;
        cos_ = -1.0;
    } else if (angle == 0.5 * std::numbers::pi) {
        sin_ = 1.0;
        cos_ = 0.0;
    } else {
        sin_ = std::sin(angle);
        cos_ = std::cos(angle);
    }
}

Vec2c BoundaryAngle::initial_vector() const { return Vec2c(cos_, -sin_); }

Complex m_function(const HamiltonianField& field, Complex z, const BoundaryAngle& beta, double N) {
    if (!(N > 0.0) || N > field.total_length()) {
        throw DomainError(DomainError::Kind::OutOfRange, "m-function endpoint outside the field");
    }
    const Mat2c t = propagate(field, z, N);
    const Complex numerator = beta.condition(t.col(0));
    const Complex denominator = beta.condition(t.col(1));
    const double scale = t.col(1).cwiseAbs().maxCoeff();
    if (std::abs(denominator) <= 1e-14 * scale) {
        throw DomainError(DomainError::Kind::DenominatorZero,
                          "v satisfies the boundary condition at N: z is an eigenvalue of the "
                          "Dirichlet-side problem");
    }
    return -numerator / denominator;
}

FieldExtender truncating_extender(HamiltonianField field) {
    return [field = std::move(field)](double N) {
        if (N > field.total_length()) {
            throw DomainError(DomainError::Kind::OutOfRange,
                              "schedule exceeds available data (field length " +
                                  std::to_string(field.total_length()) + ")");
        }
        return N == field.total_length() ? field : truncate(field, N);
    };
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::LimitPoint: return "LimitPoint";
    case Verdict::LimitCircle: return "LimitCircle";
    case Verdict::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

namespace {

bool converges(const std::vector<double>& s, double rel_tol) {
    const std::size_t n = s.size();
    double previous = -1.0;
    for (std::size_t k = n - 3; k < n; ++k) {
        const double delta = std::abs(s[k] - s[k - 1]) / std::max(std::abs(s[k]), 1e-300);
        if (previous >= 0.0 && delta > std::max(previous, rel_tol)) {
            return false;
        }
        previous = delta;
    }
    return previous <= rel_tol;
}

bool diverges(const std::vector<double>& s, const std::vector<double>& schedule) {
    const std::size_t last = s.size() - 1;
    const double half = 0.5 * schedule[last];
    std::size_t j = last;
    for (std::size_t k = 0; k < last; ++k) {
        if (schedule[k] <= half) {
            j = k;
        }
    }
    if (j == last || !(s[j] > 0.0)) {
        return false;
    }
    // 1e-12 slack absorbs rounding for exactly linear growth.
    return s[last] >= defaults::growth_factor * (1.0 - 1e-12) * s[j];
}

struct GramExtremes {
    double min;
    double max;
};

// Extreme values of c ↦ ∫|Tc|²_H on the unit sphere. The large value comes
// from the 2x2 Gram matrix; the small one is recomputed as a Rayleigh
// quotient along the orthogonal direction, since the closed-form small
// eigenvalue cancels catastrophically once the solutions grow.
GramExtremes gram_extremes(const std::shared_ptr<const Propagator>& prop, double a, Complex b,
                           double d, const QuadratureRule& quad, double N) {
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(b));
    const double top = mean + radius;
    Vec2c e;
    if (a >= d) {
        e << Complex(top - d), std::conj(b);
    } else {
        e << b, Complex(top - a);
    }
    if (e.norm() == 0.0) {
        return {top, top};
    }
    e.normalize();
    const Vec2c c(-std::conj(e(1)), std::conj(e(0)));
    const Trajectory small(prop, c);
    const double bottom = std::max(0.0, h_norm_squared(small, quad, N));
    return {bottom, top};
}

} // namespace

ClassificationReport classify(const FieldExtender& extender, Complex z,
                              const std::vector<double>& schedule, const ClassifyOptions& options) {
    if (schedule.size() < 4) {
        throw std::invalid_argument("classification schedule needs at least 4 points");
    }
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (!(schedule[k] > 0.0) || (k > 0 && !(schedule[k] > schedule[k - 1]))) {
            throw std::invalid_argument("classification schedule must be positive and increasing");
        }
    }
    options.quad.check();

    ClassificationReport report;
    report.z = z;
    report.schedule = schedule;
    double trace_scale = 0.0;
    for (double N : schedule) {
        const HamiltonianField field = extender(N);
        if (field.total_length() < N) {
            throw DomainError(DomainError::Kind::OutOfRange, "schedule exceeds available data");
        }
        auto prop = std::make_shared<const Propagator>(field, z);
        const Trajectory u(prop, Vec2c(1.0, 0.0));
        const Trajectory v(prop, Vec2c(0.0, 1.0));
        const double uu = h_norm_squared(u, options.quad, N);
        const double vv = h_norm_squared(v, options.quad, N);
        const Complex uv = h_inner_product(u, v, options.quad, N);
        report.norms_u.push_back(uu);
        report.norms_v.push_back(vv);
        const auto extremes = gram_extremes(prop, uu, uv, vv, options.quad, N);
        report.form_min.push_back(extremes.min);
        report.form_max.push_back(extremes.max);
        trace_scale = field.integrated_trace(N);
    }

    const double tol = options.rel_tol;
    const bool u_conv = converges(report.norms_u, tol);
    const bool v_conv = converges(report.norms_v, tol);
    const bool u_div = diverges(report.norms_u, schedule);
    const bool v_div = diverges(report.norms_v, schedule);
    if (u_conv && v_conv) {
        report.verdict = Verdict::LimitCircle;
    } else if (u_div || v_div) {
        report.verdict = Verdict::LimitPoint;
    } else {
        report.verdict = Verdict::Undetermined;
    }

    const bool min_conv = converges(report.form_min, tol);
    const bool max_conv = converges(report.form_max, tol);
    report.defect_estimate = max_conv ? 2 : (min_conv ? 1 : 0);
    // Scale of ‖Tc‖² at z = 0; a growing partner solution must not mask a positive norm.
    report.zero_norm_class = report.form_min.back() <= 1e-12 * trace_scale;
    return report;
}

DefectScan defect_constancy_scan(const FieldExtender& extender, const std::vector<Complex>& zs,
                                 const std::vector<double>& schedule,
                                 const ClassifyOptions& options) {
    DefectScan scan;
    for (Complex z : zs) {
        const auto report = classify(extender, z, schedule, options);
        scan.entries.push_back({z, report.defect_estimate, report.verdict});
    }
    for (const auto& entry : scan.entries) {
        if (entry.defect_estimate != scan.entries.front().defect_estimate) {
            scan.constant = false;
        }
    }
    return scan;
}

DeBrangesReport debranges_check(const HamiltonianField& field, const std::vector<double>& schedule,
                                const ClassifyOptions& options) {
    if (!is_trace_normalized(field, defaults::trace_normalized_tolerance)) {
        throw DomainError(DomainError::Kind::NotTraceNormalized,
                          "de Branges check requires tr H = 1 on every cell");
    }
    DeBrangesReport report;
    report.schedule = schedule;
    const auto extender = truncating_extender(field);
    for (double N : schedule) {
        const HamiltonianField piece = extender(N);
        const double trace_integral = piece.integrated_trace();
        auto prop = std::make_shared<const Propagator>(piece, Complex(0.0));
        const double sum = h_norm_squared(Trajectory(prop, Vec2c(1.0, 0.0)), options.quad, N) +
                           h_norm_squared(Trajectory(prop, Vec2c(0.0, 1.0)), options.quad, N);
        report.integrated_trace.push_back(trace_integral);
        report.constant_norm_sum.push_back(sum);
        report.max_trace_error =
            std::max(report.max_trace_error, std::abs(trace_integral - N) / N);
        report.max_norm_error =
            std::max(report.max_norm_error, std::abs(sum - trace_integral) / trace_integral);
    }
    report.trace_check = report.max_trace_error <= 1e-12;
    report.norm_check = report.max_norm_error <= 1e-12;
    report.classification = classify(extender, Complex(0.0, 1.0), schedule, options);
    report.limit_point = report.classification.verdict == Verdict::LimitPoint;
    return report;
}

} // namespace cansys
