#include "cansys/hamiltonian.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace cansys {

namespace {

bool finite_cell(const Cell& c) {
    return std::isfinite(c.length) && std::isfinite(c.h11) && std::isfinite(c.h12) &&
           std::isfinite(c.h22);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double param_or(const BuiltinParams& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown(const BuiltinParams& params, std::initializer_list<const char*> allowed,
                    const std::string& name) {
    for (const auto& [key, value] : params) {
        if (std::none_of(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; })) {
            throw std::invalid_argument("builtin '" + name + "' does not take parameter '" +
                                        key + "'");
        }
    }
}

int positive_count(double value, const std::string& what) {
    if (!(value >= 1.0) || value != std::floor(value) || value > 1e7) {
        throw std::invalid_argument(what + " must be a positive integer");
    }
    return static_cast<int>(value);
}

double positive_length(double value, const std::string& what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(what + " must be positive and finite");
    }
    return value;
}

std::vector<Cell> uniform_cells(double length, int count, double h11, double h12, double h22) {
    std::vector<Cell> cells(count, Cell{length / count, h11, h12, h22});
    return cells;
}

// Portable uniform double in [0, 1) from the raw 64-bit engine output.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

HamiltonianField::HamiltonianField(std::vector<Cell> cells) : cells_(std::move(cells)) {
    if (cells_.empty()) {
        throw DomainError(DomainError::Kind::InvalidField, "Hamiltonian has no cells");
    }
    breakpoints_.reserve(cells_.size() + 1);
    breakpoints_.push_back(0.0);
    bool any_nonzero = false;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const Cell& c = cells_[i];
        if (!finite_cell(c)) {
            throw DomainError(DomainError::Kind::InvalidField,
                              "cell " + std::to_string(i) + " has non-finite data");
        }
        if (!(c.length > 0.0)) {
            throw DomainError(DomainError::Kind::InvalidField,
                              "cell " + std::to_string(i) + " has non-positive length");
        }
        const double next = breakpoints_.back() + c.length;
        if (!(next > breakpoints_.back())) {
            throw DomainError(DomainError::Kind::InvalidField,
                              "breakpoints not strictly increasing at cell " + std::to_string(i));
        }
        breakpoints_.push_back(next);
        any_nonzero = any_nonzero || !c.is_zero();
    }
    if (!any_nonzero) {
        throw DomainError(DomainError::Kind::InvalidField, "every cell of the Hamiltonian is zero");
    }
}

CellLocation HamiltonianField::locate(double x) const {
    if (!(x >= 0.0) || x > total_length()) {
        throw DomainError(DomainError::Kind::OutOfRange,
                          "position " + format_double(x) + " outside [0, " +
                              format_double(total_length()) + "]");
    }
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    std::size_t index = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    if (index >= cells_.size()) {
        index = cells_.size() - 1;
    }
    return {index, x - breakpoints_[index]};
}

Mat2 HamiltonianField::at(double x) const { return cells_[locate(x).index].matrix(); }

double HamiltonianField::integrated_trace(double upto) const {
    const auto loc = locate(upto);
    double sum = 0.0;
    for (std::size_t i = 0; i < loc.index; ++i) {
        sum += cells_[i].length * cells_[i].trace();
    }
    return sum + loc.offset * cells_[loc.index].trace();
}

double HamiltonianField::integrated_norm(double upto) const {
    const auto loc = locate(upto);
    auto norm = [](const Cell& c) {
        const double half_tr = 0.5 * c.trace();
        const double r = std::hypot(0.5 * (c.h11 - c.h22), c.h12);
        return std::max(std::abs(half_tr + r), std::abs(half_tr - r));
    };
    double sum = 0.0;
    for (std::size_t i = 0; i < loc.index; ++i) {
        sum += cells_[i].length * norm(cells_[i]);
    }
    return sum + loc.offset * norm(cells_[loc.index]);
}

double min_eigenvalue(const Cell& cell) {
    const double half_tr = 0.5 * cell.trace();
    const double r = std::hypot(0.5 * (cell.h11 - cell.h22), cell.h12);
    return half_tr - r;
}

ValidationReport validate(const HamiltonianField& field, double tol_psd) {
    ValidationReport report;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Cell& c = field.cell(i);
        const double tr = std::abs(c.trace());
        const double scale = tr > 0.0 ? tr : 1.0;
        const bool psd = c.h11 >= -tol_psd * scale && c.h22 >= -tol_psd * scale &&
                         c.det() >= -tol_psd * scale * scale;
        if (!psd) {
            report.ok = false;
            report.cell_index = i;
            report.eigenvalue_deficit = -min_eigenvalue(c);
            std::ostringstream msg;
            msg << "cell " << i << " is not positive semi-definite: h = [" << format_double(c.h11)
                << ", " << format_double(c.h12) << ", " << format_double(c.h22)
                << "], det = " << format_double(c.det())
                << ", eigenvalue deficit = " << format_double(report.eigenvalue_deficit);
            report.message = msg.str();
            return report;
        }
    }
    report.message = "ok";
    return report;
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"identity", "half-identity", "rank-one",
                                                   "exp-decay", "random-psd"};
    return names;
}

HamiltonianField builtin(const std::string& name, const BuiltinParams& params) {
    if (name == "identity" || name == "half-identity" || name == "rank-one") {
        reject_unknown(params, {"length", "count"}, name);
        const double length = positive_length(param_or(params, "length", 1.0), "length");
        const int count = positive_count(param_or(params, "count", 1.0), "count");
        if (name == "identity") {
            return HamiltonianField(uniform_cells(length, count, 1.0, 0.0, 1.0));
        }
        if (name == "half-identity") {
            return HamiltonianField(uniform_cells(length, count, 0.5, 0.0, 0.5));
        }
        return HamiltonianField(uniform_cells(length, count, 1.0, 0.0, 0.0));
    }
    if (name == "exp-decay") {
        reject_unknown(params, {"rate", "length", "count"}, name);
        const double rate = param_or(params, "rate", 1.0);
        if (!(rate >= 0.0) || !std::isfinite(rate)) {
            throw std::invalid_argument("rate must be non-negative and finite");
        }
        const double length = positive_length(param_or(params, "length", 20.0), "length");
        const int count = positive_count(param_or(params, "count", 200.0), "count");
        const double width = length / count;
        std::vector<Cell> cells;
        cells.reserve(count);
        for (int k = 0; k < count; ++k) {
            const double value = std::exp(-rate * (k + 0.5) * width);
            cells.push_back(Cell{width, value, 0.0, value});
        }
        return HamiltonianField(std::move(cells));
    }
    if (name == "random-psd") {
        reject_unknown(params, {"seed", "count", "length"}, name);
        const double seed = param_or(params, "seed", 0.0);
        if (!(seed >= 0.0) || seed != std::floor(seed) || seed > 9.0e15) {
            throw std::invalid_argument("seed must be a non-negative integer");
        }
        const int count = positive_count(param_or(params, "count", 8.0), "count");
        const double length = positive_length(param_or(params, "length", count), "length");
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
        std::vector<Cell> cells;
        cells.reserve(count);
        for (int k = 0; k < count; ++k) {
            double a[4];
            for (double& entry : a) {
                entry = 2.0 * unit_uniform(rng) - 1.0;
            }
            // H = A A^T
            cells.push_back(Cell{length / count, a[0] * a[0] + a[1] * a[1],
                                 a[0] * a[2] + a[1] * a[3], a[2] * a[2] + a[3] * a[3]});
        }
        return HamiltonianField(std::move(cells));
    }
    throw std::invalid_argument("unknown builtin Hamiltonian '" + name + "'");
}

HamiltonianField trace_normalize(const HamiltonianField& field) {
    std::vector<Cell> out;
    out.reserve(field.size());
    for (const Cell& c : field.cells()) {
        const double tr = c.trace();
        if (tr == 0.0) {
            continue;
        }
        if (std::abs(tr - 1.0) <= 1e-15) {
            out.push_back(c);
            continue;
        }
        out.push_back(Cell{c.length * tr, c.h11 / tr, c.h12 / tr, c.h22 / tr});
    }
    if (out.empty()) {
        throw DomainError(DomainError::Kind::InvalidField,
                          "cannot trace-normalize: every cell has zero trace");
    }
    return HamiltonianField(std::move(out));
}

bool is_trace_normalized(const HamiltonianField& field, double tol) {
    return std::all_of(field.cells().begin(), field.cells().end(),
                       [tol](const Cell& c) { return std::abs(c.trace() - 1.0) <= tol; });
}

HamiltonianField truncate(const HamiltonianField& field, double upto) {
    if (!(upto > 0.0)) {
        throw DomainError(DomainError::Kind::OutOfRange, "truncation length must be positive");
    }
    const auto loc = field.locate(upto);
    std::vector<Cell> cells(field.cells().begin(),
                            field.cells().begin() + static_cast<std::ptrdiff_t>(loc.index));
    if (loc.offset > 0.0) {
        Cell last = field.cell(loc.index);
        last.length = loc.offset;
        cells.push_back(last);
    }
    return HamiltonianField(std::move(cells));
}

std::string to_json(const HamiltonianField& field) {
    std::ostringstream out;
    out << "{\"cells\":[";
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Cell& c = field.cell(i);
        if (i > 0) {
            out << ",";
        }
        out << "\n  {\"length\": " << format_double(c.length) << ", \"h\": ["
            << format_double(c.h11) << ", " << format_double(c.h12) << ", "
            << format_double(c.h22) << "]}";
    }
    out << "\n]}\n";
    return out.str();
}

HamiltonianField from_json(const std::string& text, bool require_psd) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("Hamiltonian file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("cells") || !doc["cells"].is_array()) {
        throw std::invalid_argument("Hamiltonian file must be an object with a \"cells\" array");
    }
    std::vector<Cell> cells;
    std::size_t index = 0;
    for (const auto& entry : doc["cells"]) {
        const std::string where = "cell " + std::to_string(index);
        if (!entry.is_object() || !entry.contains("length") || !entry.contains("h")) {
            throw std::invalid_argument(where + ": expected {\"length\": ..., \"h\": [...]}");
        }
        const auto& length = entry["length"];
        const auto& h = entry["h"];
        if (!length.is_number()) {
            throw std::invalid_argument(where + ": length must be a number");
        }
        if (!h.is_array() || h.size() != 3 ||
            !std::all_of(h.begin(), h.end(), [](const auto& v) { return v.is_number(); })) {
            throw std::invalid_argument(where +
                                        ": h must be an array of three numbers [h11, h12, h22]");
        }
        Cell c{length.get<double>(), h[0].get<double>(), h[1].get<double>(), h[2].get<double>()};
        if (!(c.length > 0.0)) {
            throw std::invalid_argument(where + ": length must be positive");
        }
        cells.push_back(c);
        ++index;
    }
    try {
        HamiltonianField field(std::move(cells));
        const auto report = validate(field);
        if (require_psd && !report.ok) {
            throw std::invalid_argument(report.message);
        }
        return field;
    } catch (const DomainError& e) {
        throw std::invalid_argument(e.what());
    }
}

HamiltonianField load(const std::filesystem::path& path, bool require_psd) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open Hamiltonian file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str(), require_psd);
}

void save(const HamiltonianField& field, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write Hamiltonian file " + path.string());
    }
    out << to_json(field);
}

} // namespace cansys
