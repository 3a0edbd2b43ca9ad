#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cansys {

using Complex = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2d;

/// A C^2-valued function of the position x, used for resolvent inputs and outputs.
using VectorFunction = std::function<Vec2c(double)>;

/// The symplectic matrix J = [[0,-1],[1,0]].
inline Mat2c symplectic_j() {
    Mat2c j;
    j << 0.0, -1.0, 1.0, 0.0;
    return j;
}

/// Errors raised by numerical routines when the requested object does not
/// exist for the given input (as opposed to malformed input).
class DomainError : public std::runtime_error {
public:
    enum class Kind {
        DenominatorZero,
        NormalizationZero,
        NotTraceNormalized,
        NotAnEigenvalue,
        InResolventSpectrum,
        Overflow,
        OutOfRange,
        InvalidField,
        NotSelfAdjoint,
        SearchExhausted,
        PreconditionFailed,
    };

    DomainError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline const char* to_string(DomainError::Kind kind) {
    switch (kind) {
    case DomainError::Kind::DenominatorZero: return "DenominatorZero";
    case DomainError::Kind::NormalizationZero: return "NormalizationZero";
    case DomainError::Kind::NotTraceNormalized: return "NotTraceNormalized";
    case DomainError::Kind::NotAnEigenvalue: return "NotAnEigenvalue";
    case DomainError::Kind::InResolventSpectrum: return "InResolventSpectrum";
    case DomainError::Kind::Overflow: return "Overflow";
    case DomainError::Kind::OutOfRange: return "OutOfRange";
    case DomainError::Kind::InvalidField: return "InvalidField";
    case DomainError::Kind::NotSelfAdjoint: return "NotSelfAdjoint";
    case DomainError::Kind::SearchExhausted: return "SearchExhausted";
    case DomainError::Kind::PreconditionFailed: return "PreconditionFailed";
    }
    return "Unknown";
}

} // namespace cansys
