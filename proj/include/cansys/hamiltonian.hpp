#pragma once

#include "cansys/types.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cansys {

/// One piece of a piecewise-constant Hamiltonian: H(x) = [[h11, h12], [h12, h22]]
/// on an interval of the given length.
struct Cell {
    double length = 1.0;
    double h11 = 0.0;
    double h12 = 0.0;
    double h22 = 0.0;

    Mat2 matrix() const {
        Mat2 m;
        m << h11, h12, h12, h22;
        return m;
    }
    double trace() const { return h11 + h22; }
    double det() const { return h11 * h22 - h12 * h12; }
    bool is_zero() const { return h11 == 0.0 && h12 == 0.0 && h22 == 0.0; }

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Position of a point x inside a field: the cell index and the offset from the
/// left breakpoint of that cell.
struct CellLocation {
    std::size_t index;
    double offset;
};

/// Piecewise-constant real symmetric Hamiltonian on [0, total_length].
///
/// Construction enforces the structural invariants (non-empty, positive finite
/// lengths, finite entries, at least one non-zero cell). Positive
/// semi-definiteness is reported by validate() rather than enforced, so that
/// malformed data can still be diagnosed.
class HamiltonianField {
public:
    explicit HamiltonianField(std::vector<Cell> cells);

    const std::vector<Cell>& cells() const noexcept { return cells_; }
    std::size_t size() const noexcept { return cells_.size(); }
    const Cell& cell(std::size_t i) const { return cells_.at(i); }

    /// Cumulative breakpoints x_0 = 0 < x_1 < ... < x_n = total_length.
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    double total_length() const noexcept { return breakpoints_.back(); }

    /// Cell containing x. Interior breakpoints belong to the cell on their
    /// right, except x = total_length, which belongs to the last cell.
    CellLocation locate(double x) const;

    /// H(x) at a point, using the convention of locate().
    Mat2 at(double x) const;

    /// ∫_0^upto tr H dx, summed exactly per cell.
    double integrated_trace(double upto) const;
    double integrated_trace() const { return integrated_trace(total_length()); }

    /// ∫_0^upto ‖H‖_2 dx (spectral norm), used for growth guards.
    double integrated_norm(double upto) const;

    friend bool operator==(const HamiltonianField& a, const HamiltonianField& b) {
        return a.cells_ == b.cells_;
    }

private:
    std::vector<Cell> cells_;
    std::vector<double> breakpoints_;
};

inline constexpr double kDefaultPsdTolerance = 1e-12;

struct ValidationReport {
    bool ok = true;
    std::optional<std::size_t> cell_index;  ///< first violating cell
    double eigenvalue_deficit = 0.0;        ///< -λ_min of the violating cell
    std::string message;
};

/// Checks every cell for positive semi-definiteness with tolerance
/// tol_psd relative to tr H (determinant relative to (tr H)^2).
ValidationReport validate(const HamiltonianField& field,
                          double tol_psd = kDefaultPsdTolerance);

/// Smallest eigenvalue of the cell matrix.
double min_eigenvalue(const Cell& cell);

using BuiltinParams = std::map<std::string, double>;

/// Names accepted by builtin().
const std::vector<std::string>& builtin_names();

/// Example Hamiltonians.
///
///   identity      length (1), count (1)           H = I
///   half-identity length (1), count (1)           H = I/2
///   rank-one      length (1), count (1)           H = diag(1, 0)
///   exp-decay     rate (1), length (20), count (200)
///                 H = exp(-rate * x_mid) I on each of `count` equal cells
///   random-psd    seed (0), count (8), length (count)
///                 H = A A^T with A uniform in [-1, 1]^{2x2}, reproducible per seed
///
/// Throws std::invalid_argument on unknown names or parameters.
HamiltonianField builtin(const std::string& name, const BuiltinParams& params = {});

/// Reparametrize by x -> ∫ tr H so that tr H ≡ 1. Zero-trace cells are
/// dropped; throws DomainError(InvalidField) if nothing remains.
HamiltonianField trace_normalize(const HamiltonianField& field);

/// True if every cell has |tr H - 1| <= tol.
bool is_trace_normalized(const HamiltonianField& field, double tol = 1e-12);

/// Restriction of the field to [0, upto]; the last cell is shortened.
HamiltonianField truncate(const HamiltonianField& field, double upto);

/// JSON Hamiltonian file: {"cells":[{"length": L, "h": [h11, h12, h22]}, ...]}.
/// The writer emits 17 significant digits, so save/load round-trips bit-exactly.
/// Readers throw std::invalid_argument on malformed files and, when
/// `require_psd` is set, on cells failing validate().
std::string to_json(const HamiltonianField& field);
HamiltonianField from_json(const std::string& text, bool require_psd = true);

HamiltonianField load(const std::filesystem::path& path, bool require_psd = true);
void save(const HamiltonianField& field, const std::filesystem::path& path);

} // namespace cansys
