#include "cansys/cli.hpp"

#include "cansys/defaults.hpp"
#include "cansys/extension.hpp"
#include "cansys/hamiltonian.hpp"
#include "cansys/relations.hpp"
#include "cansys/resolvent.hpp"
#include "cansys/transfer.hpp"
#include "cansys/weyl.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace cansys::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_real(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    return value;
}

std::string format_double(double x, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

// ---- field source --------------------------------------------------------

struct FieldSource {
    std::string builtin;
    std::string file;
    std::optional<double> length;
    std::optional<int> cells;
    std::optional<double> rate;
    std::optional<std::uint64_t> seed;
};

void add_field_options(CLI::App* sub, FieldSource& src) {
    sub->add_option("--builtin", src.builtin, "Builtin Hamiltonian name");
    sub->add_option("--file", src.file, "Hamiltonian JSON file");
    sub->add_option("--length", src.length, "Builtin length parameter");
    sub->add_option("--cells", src.cells, "Builtin cell count");
    sub->add_option("--rate", src.rate, "Decay rate (exp-decay)");
    sub->add_option("--seed", src.seed, "Seed (random-psd)");
}

BuiltinParams builtin_params(const FieldSource& src) {
    BuiltinParams params;
    if (src.length) {
        params["length"] = *src.length;
    }
    if (src.cells) {
        params["count"] = *src.cells;
    }
    if (src.rate) {
        params["rate"] = *src.rate;
    }
    if (src.seed) {
        params["seed"] = static_cast<double>(*src.seed);
    }
    return params;
}

HamiltonianField load_field(const FieldSource& src, bool require_psd = true,
                            std::optional<double> default_length = std::nullopt) {
    if (src.builtin.empty() == src.file.empty()) {
        throw UsageError("exactly one of --builtin or --file is required");
    }
    if (!src.file.empty()) {
        if (src.length || src.cells || src.rate || src.seed) {
            throw UsageError("builtin parameters cannot be combined with --file");
        }
        return load(src.file, require_psd);
    }
    BuiltinParams params = builtin_params(src);
    if (default_length && !src.length) {
        params["length"] = *default_length;
    }
    return builtin(src.builtin, params);
}

Json field_rows(const HamiltonianField& field) {
    Json rows = Json::array();
    const auto& bp = field.breakpoints();
    for (std::size_t k = 0; k < field.size(); ++k) {
        const Cell& c = field.cell(k);
        rows.push_back(Json{{"index", k},
                            {"start", bp[k]},
                            {"length", c.length},
                            {"h11", c.h11},
                            {"h12", c.h12},
                            {"h22", c.h22}});
    }
    return rows;
}

// ---- rendering -----------------------------------------------------------

std::string scalar_text(const Json& v, int digits) {
    if (v.is_object() && v.size() == 2 && v.contains("re") && v.contains("im")) {
        return format_complex(Complex(v["re"].get<double>(), v["im"].get<double>()));
    }
    if (v.is_number_float()) {
        return format_double(v.get<double>(), digits);
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_array()) {
        std::string joined;
        for (std::size_t i = 0; i < v.size(); ++i) {
            joined += (i ? ";" : "") + scalar_text(v[i], digits);
        }
        return joined;
    }
    return v.dump();
}

bool is_table(const Json& v) { return v.is_array() && !v.empty() && v.front().is_object(); }

void render_table(const Json& doc, std::ostream& out) {
    std::size_t key_width = 0;
    for (const auto& [key, value] : doc.items()) {
        if (!is_table(value)) {
            key_width = std::max(key_width, key.size());
        }
    }
    for (const auto& [key, value] : doc.items()) {
        if (key == "schema_version" || is_table(value)) {
            continue;
        }
        out << std::left << std::setw(static_cast<int>(key_width)) << key << "  "
            << scalar_text(value, 12) << '\n';
    }
    for (const auto& [key, value] : doc.items()) {
        if (!is_table(value)) {
            continue;
        }
        out << '\n' << key << ":\n";
        std::vector<std::string> columns;
        for (const auto& [col, unused] : value.front().items()) {
            columns.push_back(col);
        }
        std::vector<std::vector<std::string>> cells;
        std::vector<std::size_t> widths;
        for (const auto& c : columns) {
            widths.push_back(c.size());
        }
        for (const auto& row : value) {
            std::vector<std::string> line;
            for (std::size_t j = 0; j < columns.size(); ++j) {
                line.push_back(row.contains(columns[j]) ? scalar_text(row[columns[j]], 12) : "");
                widths[j] = std::max(widths[j], line.back().size());
            }
            cells.push_back(std::move(line));
        }
        for (std::size_t j = 0; j < columns.size(); ++j) {
            out << (j ? "  " : "") << std::setw(static_cast<int>(widths[j])) << columns[j];
        }
        out << '\n';
        for (const auto& line : cells) {
            for (std::size_t j = 0; j < line.size(); ++j) {
                out << (j ? "  " : "") << std::setw(static_cast<int>(widths[j])) << line[j];
            }
            out << '\n';
        }
    }
}

// First row-valued field as CSV; key,value pairs when there is none.
void render_csv(const Json& doc, std::ostream& out) {
    for (const auto& [key, value] : doc.items()) {
        if (!is_table(value)) {
            continue;
        }
        std::vector<std::string> columns;
        for (const auto& [col, unused] : value.front().items()) {
            columns.push_back(col);
        }
        for (std::size_t j = 0; j < columns.size(); ++j) {
            out << (j ? "," : "") << columns[j];
        }
        out << '\n';
        for (const auto& row : value) {
            for (std::size_t j = 0; j < columns.size(); ++j) {
                out << (j ? "," : "") << (row.contains(columns[j]) ? scalar_text(row[columns[j]], 17) : "");
            }
            out << '\n';
        }
        return;
    }
    out << "key,value\n";
    for (const auto& [key, value] : doc.items()) {
        out << key << ',' << scalar_text(value, 17) << '\n';
    }
}

void render(const Json& doc, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << doc.dump(2) << '\n';
    } else if (format == "csv") {
        render_csv(doc, out);
    } else {
        render_table(doc, out);
    }
}

Json header(const std::string& command) {
    return Json{{"schema_version", 1}, {"command", command}};
}

Json defaults_doc() {
    Json doc = header("show-defaults");
    doc["psd_tolerance"] = defaults::psd_tolerance;
    doc["exponential_series_threshold"] = defaults::exponential_series_threshold;
    doc["quadrature_order"] = defaults::quadrature_order;
    doc["trace_normalized_tolerance"] = defaults::trace_normalized_tolerance;
    doc["classify_rel_tol"] = defaults::classify_rel_tol;
    doc["schedule"] = std::vector<double>(defaults::schedule.begin(), defaults::schedule.end());
    doc["growth_factor"] = defaults::growth_factor;
    doc["scan_grid_points"] = defaults::scan_grid_points;
    doc["bisection_tol"] = defaults::bisection_tol;
    doc["eigen_residual_tol"] = defaults::eigen_residual_tol;
    doc["max_phase"] = defaults::max_phase;
    doc["residual_mesh_panels"] = defaults::residual_mesh_panels;
    doc["jacobi_offdiag_tol"] = defaults::jacobi_offdiag_tol;
    doc["hermitian_tol"] = defaults::hermitian_tol;
    doc["hs_panels_per_cell"] = defaults::hs_panels_per_cell;
    doc["rank_rel_threshold"] = defaults::rank_rel_threshold;
    doc["projector_tol"] = defaults::projector_tol;
    return doc;
}

// ---- relation demo -------------------------------------------------------

Json relation_row(const std::string& name, const relations::LinearRelation& r) {
    const relations::RelationReport rep = relations::describe(r);
    Json row{{"name", name},
             {"n", r.ambient_dim()},
             {"dim", r.dim()},
             {"symmetric", rep.symmetric},
             {"selfadjoint", rep.selfadjoint},
             {"defect_plus", rep.defect_upper},
             {"defect_minus", rep.defect_lower},
             {"spectrum", rep.spectrum},
             {"spectral_kernel", rep.spectral_kernel}};
    return row;
}

Json extension_row(const std::string& name, const relations::LinearRelation& s, int trials,
                   std::uint64_t seed) {
    const relations::ExtensionCheck check = relations::extension_dimension_check(s, trials, seed);
    return Json{{"name", name},
                {"defect", check.defect},
                {"trials", check.trials},
                {"symmetric_found", check.symmetric_found},
                {"selfadjoint_found", check.selfadjoint_found},
                {"violations", check.violations},
                {"existence", check.existence}};
}

Json relation_demo(std::uint64_t seed, int trials) {
    using relations::LinearRelation;
    using relations::Matrix;
    Json doc = header("relation-demo");
    doc["seed"] = seed;

    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 1.0;
    diag(1, 1) = 2.0;
    Matrix mixed_f = Matrix::Zero(2, 2);
    Matrix mixed_g = Matrix::Zero(2, 2);
    mixed_f(0, 0) = 1.0;
    mixed_g(0, 0) = 1.0;
    mixed_g(1, 1) = 1.0;
    Matrix e1 = Matrix::Zero(2, 1);
    Matrix e2 = Matrix::Zero(2, 1);
    e1(0, 0) = 1.0;
    e2(1, 0) = 1.0;

    const LinearRelation graph = LinearRelation::graph(diag);
    const LinearRelation multi = LinearRelation::multivalued(1);
    const LinearRelation mixed = LinearRelation::from_pairs(mixed_f, mixed_g);
    const LinearRelation shift = LinearRelation::from_pairs(e1, e2);
    const LinearRelation random_sa = relations::random_selfadjoint(4, 3, seed);
    const LinearRelation random_sym = relations::random_symmetric(4, 2, seed);

    Json rows = Json::array();
    rows.push_back(relation_row("graph diag(1,2)", graph));
    rows.push_back(relation_row("multivalued n=1", multi));
    rows.push_back(relation_row("graph diag(1) + multivalued", mixed));
    rows.push_back(relation_row("span{(e1,e2)}", shift));
    rows.push_back(relation_row("random self-adjoint n=4", random_sa));
    rows.push_back(relation_row("random symmetric n=4", random_sym));
    doc["relations"] = rows;

    Json ext = Json::array();
    ext.push_back(extension_row("graph diag(1,2)", graph, trials, seed));
    ext.push_back(extension_row("span{(e1,e2)}", shift, trials, seed));
    ext.push_back(extension_row("random symmetric n=4", random_sym, trials, seed));
    doc["extensions"] = ext;
    return doc;
}

// ---- options -------------------------------------------------------------

struct RunConfig {
    std::string output = "table";
    int quad_order = defaults::quadrature_order;
    bool show_defaults = false;

    FieldSource field;
    std::string z_text;
    std::string alpha_text = "pi";
    std::string beta_text = "pi";
    std::optional<double> N;
    std::vector<double> window{-10.0, 10.0};
    std::vector<double> schedule{defaults::schedule.begin(), defaults::schedule.end()};
    std::optional<double> tol;
    int grid = defaults::scan_grid_points;
    int k = 5;
    std::vector<double> h{1.0, 0.0};
    std::string save_path;
    std::string builtin_name;
    std::uint64_t relation_seed = 0;
    int trials = 200;
};

Complex z_or(const RunConfig& cfg, Complex fallback) {
    return cfg.z_text.empty() ? fallback : parse_complex(cfg.z_text);
}

double N_or_total(const RunConfig& cfg, const HamiltonianField& field) {
    return cfg.N ? *cfg.N : field.total_length();
}

SelfAdjointBVP make_bvp(const RunConfig& cfg, const HamiltonianField& field) {
    return SelfAdjointBVP(field, N_or_total(cfg, field), BoundaryAngle(parse_angle(cfg.alpha_text)),
                          BoundaryAngle(parse_angle(cfg.beta_text)));
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const HamiltonianField field = load_field(cfg.field, false);
    const ValidationReport rep = validate(field);
    Json doc = header("validate");
    doc["ok"] = rep.ok;
    doc["cells"] = field.size();
    doc["total_length"] = field.total_length();
    doc["trace_normalized"] = is_trace_normalized(field);
    if (!rep.ok) {
        doc["cell_index"] = rep.cell_index.value_or(0);
        doc["eigenvalue_deficit"] = rep.eigenvalue_deficit;
        doc["message"] = rep.message;
    }
    render(doc, cfg.output, out);
    if (!rep.ok) {
        err << "invalid field: " << rep.message << '\n';
        return 1;
    }
    return 0;
}

int cmd_normalize(const RunConfig& cfg, std::ostream& out) {
    const HamiltonianField normalized = trace_normalize(load_field(cfg.field));
    if (!cfg.save_path.empty()) {
        save(normalized, cfg.save_path);
    }
    Json doc = header("normalize");
    doc["total_length"] = normalized.total_length();
    doc["cells"] = field_rows(normalized);
    render(doc, cfg.output, out);
    return 0;
}

int cmd_builtin(const RunConfig& cfg, std::ostream& out) {
    Json doc = header("builtin");
    if (cfg.builtin_name.empty()) {
        doc["names"] = builtin_names();
        render(doc, cfg.output, out);
        return 0;
    }
    FieldSource src = cfg.field;
    src.builtin = cfg.builtin_name;
    const HamiltonianField field = load_field(src);
    if (!cfg.save_path.empty()) {
        save(field, cfg.save_path);
    }
    doc["name"] = cfg.builtin_name;
    doc["total_length"] = field.total_length();
    doc["cells"] = field_rows(field);
    render(doc, cfg.output, out);
    return 0;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    if (cfg.schedule.empty()) {
        throw UsageError("--schedule needs values");
    }
    const double last = *std::max_element(cfg.schedule.begin(), cfg.schedule.end());
    const HamiltonianField field = load_field(cfg.field, true, last);
    ClassifyOptions options;
    options.quad.order = cfg.quad_order;
    if (cfg.tol) {
        options.rel_tol = *cfg.tol;
    }
    const Complex z = z_or(cfg, Complex(0.0, 1.0));
    const ClassificationReport rep = classify(truncating_extender(field), z, cfg.schedule, options);
    Json doc = header("classify");
    doc["z"] = complex_json(z);
    doc["verdict"] = to_string(rep.verdict);
    doc["defect_estimate"] = rep.defect_estimate;
    doc["zero_norm_class"] = rep.zero_norm_class;
    Json rows = Json::array();
    for (std::size_t j = 0; j < rep.schedule.size(); ++j) {
        rows.push_back(Json{{"N", rep.schedule[j]},
                            {"norm_u", rep.norms_u[j]},
                            {"norm_v", rep.norms_v[j]},
                            {"form_min", rep.form_min[j]},
                            {"form_max", rep.form_max[j]}});
    }
    doc["rows"] = rows;
    render(doc, cfg.output, out);
    return 0;
}

int cmd_mfunc(const RunConfig& cfg, std::ostream& out) {
    const HamiltonianField field = load_field(cfg.field);
    const Complex z = z_or(cfg, Complex(0.0, 1.0));
    const double N = N_or_total(cfg, field);
    const Complex m = m_function(field, z, BoundaryAngle(parse_angle(cfg.beta_text)), N);
    Json doc = header("mfunc");
    doc["z"] = complex_json(z);
    doc["N"] = N;
    doc["beta"] = parse_angle(cfg.beta_text);
    doc["m"] = complex_json(m);
    render(doc, cfg.output, out);
    return 0;
}

int cmd_eigs(const RunConfig& cfg, std::ostream& out) {
    const SelfAdjointBVP bvp = make_bvp(cfg, load_field(cfg.field));
    EigenSearch search;
    search.grid_points = cfg.grid;
    if (cfg.tol) {
        search.tol = *cfg.tol;
    }
    const EigenList list = eigenvalues_in(bvp, cfg.window[0], cfg.window[1], search);
    Json doc = header("eigs");
    doc["N"] = bvp.N;
    doc["alpha"] = bvp.alpha.value();
    doc["beta"] = bvp.beta.value();
    doc["window"] = cfg.window;
    doc["count"] = list.values.size();
    Json rows = Json::array();
    for (std::size_t j = 0; j < list.values.size(); ++j) {
        rows.push_back(Json{{"index", j}, {"E", list.values[j]}, {"residual", list.residuals[j]}});
    }
    doc["eigenvalues"] = rows;
    render(doc, cfg.output, out);
    return 0;
}

int cmd_resolvent_check(const RunConfig& cfg, std::ostream& out) {
    const SelfAdjointBVP bvp = make_bvp(cfg, load_field(cfg.field));
    const Complex z = z_or(cfg, Complex(0.3, 0.0));
    const Vec2c hv(cfg.h[0], cfg.h[1]);
    const VectorFunction h = [hv](double) { return hv; };
    QuadratureRule quad;
    quad.order = cfg.quad_order;

    auto standard = std::make_shared<const GreenKernel>(bvp, z, KernelForm::Standard);
    auto swapped = std::make_shared<const GreenKernel>(bvp, z, KernelForm::Swapped);
    const GreenIntegral y = apply_resolvent(standard, h, quad);
    const GreenIntegral ys = apply_resolvent(swapped, h, quad);

    Json doc = header("resolvent-check");
    doc["z"] = complex_json(z);
    doc["N"] = bvp.N;
    doc["m"] = complex_json(standard->m());
    doc["residual"] = resolvent_residual(*standard, h, y.as_function());
    doc["swapped_residual"] = resolvent_residual(*swapped, h, ys.as_function());
    Json rows = Json::array();
    for (int j = 0; j <= 4; ++j) {
        const double x = bvp.N * j / 4.0;
        const Vec2c v = y(x);
        rows.push_back(Json{{"x", x}, {"y1", complex_json(v(0))}, {"y2", complex_json(v(1))}});
    }
    doc["samples"] = rows;
    render(doc, cfg.output, out);
    return 0;
}

int cmd_hs_compare(const RunConfig& cfg, std::ostream& out) {
    const SelfAdjointBVP bvp = make_bvp(cfg, load_field(cfg.field));
    const Complex z = z_or(cfg, Complex(0.3, 0.0));
    if (z.imag() != 0.0) {
        throw UsageError("hs-compare needs a real --z");
    }
    HSOptions options;
    options.quad.order = cfg.quad_order;
    const HSComparison cmp = hs_eigen_compare(bvp, z.real(), cfg.k, options);
    Json doc = header("hs-compare");
    doc["z"] = z.real();
    doc["k"] = cfg.k;
    doc["shooting_count"] = cmp.shooting_count;
    doc["hs_count"] = cmp.hs_count;
    doc["count_match"] = cmp.count_match;
    doc["magnitude_floor"] = cmp.magnitude_floor;
    doc["hermitian_deviation"] = cmp.hermitian_deviation;
    doc["jacobi_sweeps"] = cmp.jacobi_sweeps;
    double worst = 0.0;
    Json rows = Json::array();
    for (const EigenPair& p : cmp.pairs) {
        worst = std::max(worst, p.gap);
        rows.push_back(Json{{"E", p.E}, {"predicted", 1.0 / (p.E - z.real())}, {"mu", p.mu}, {"gap", p.gap}});
    }
    doc["max_gap"] = worst;
    doc["pairs"] = rows;
    render(doc, cfg.output, out);
    return 0;
}

} // namespace

Complex parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw) {
        if (c != ' ') {
            s += c;
        }
    }
    if (s.empty()) {
        throw std::invalid_argument("empty complex number");
    }
    if (s.back() != 'i') {
        return Complex(parse_real(s), 0.0);
    }
    s.pop_back();
    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t p = s.size(); p-- > 1;) {
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    const std::string re_text = split == std::string::npos ? "" : s.substr(0, split);
    std::string im_text = split == std::string::npos ? s : s.substr(split);
    if (im_text.empty() || im_text == "+") {
        im_text = "1";
    } else if (im_text == "-") {
        im_text = "-1";
    }
    return Complex(re_text.empty() ? 0.0 : parse_real(re_text), parse_real(im_text));
}

double parse_angle(const std::string& raw) {
    const std::size_t at = raw.find("pi");
    if (at == std::string::npos) {
        return parse_real(raw);
    }
    double value = std::numbers::pi;
    const std::string head = raw.substr(0, at);
    const std::string tail = raw.substr(at + 2);
    if (!head.empty()) {
        if (head.back() != '*') {
            throw std::invalid_argument("bad angle: '" + raw + "'");
        }
        value *= parse_real(head.substr(0, head.size() - 1));
    }
    if (!tail.empty()) {
        if (tail.front() != '/') {
            throw std::invalid_argument("bad angle: '" + raw + "'");
        }
        value /= parse_real(tail.substr(1));
    }
    return value;
}

std::string format_complex(Complex z) {
    const std::string re = format_double(z.real(), 17);
    std::string im = format_double(z.imag(), 17);
    if (im.front() != '-') {
        im = "+" + im;
    }
    return re + im + "i";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Canonical systems: transfer matrices, m-functions, spectra and resolvents",
                 args.empty() ? "cansys" : args.front()};
    app.fallthrough();
    app.require_subcommand(0, 1);
    app.add_option("--output", cfg.output, "Output format")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    app.add_option("--quad-order", cfg.quad_order, "Gauss-Legendre points per panel")
        ->check(CLI::Range(1, 64));
    app.add_flag("--show-defaults", cfg.show_defaults, "Print the table of numerical defaults");

    const auto complex_check = CLI::Validator(
        [](std::string& s) {
            try {
                parse_complex(s);
            } catch (const std::invalid_argument& e) {
                return std::string(e.what());
            }
            return std::string();
        },
        "COMPLEX");
    const auto angle_check = CLI::Validator(
        [](std::string& s) {
            try {
                const double a = parse_angle(s);
                if (!(a > 0.0 && a <= std::numbers::pi)) {
                    return std::string("angle must lie in (0, pi]");
                }
            } catch (const std::invalid_argument& e) {
                return std::string(e.what());
            }
            return std::string();
        },
        "ANGLE");

    auto add_z = [&](CLI::App* sub) {
        sub->add_option("--z", cfg.z_text, "Spectral parameter a+bi")->check(complex_check);
    };
    auto add_bvp = [&](CLI::App* sub) {
        sub->add_option("--alpha", cfg.alpha_text, "Left boundary angle")->check(angle_check);
        sub->add_option("--beta", cfg.beta_text, "Right boundary angle")->check(angle_check);
        sub->add_option("--N", cfg.N, "Right endpoint")->check(CLI::PositiveNumber);
    };

    auto* validate_cmd = app.add_subcommand("validate", "Check a Hamiltonian for positive semi-definiteness");
    add_field_options(validate_cmd, cfg.field);

    auto* normalize_cmd = app.add_subcommand("normalize", "Trace-normalize a Hamiltonian");
    add_field_options(normalize_cmd, cfg.field);
    normalize_cmd->add_option("--save", cfg.save_path, "Write the normalized field as JSON");

    auto* builtin_cmd = app.add_subcommand("builtin", "Emit a builtin Hamiltonian");
    builtin_cmd->add_option("name", cfg.builtin_name, "Builtin name (omit to list)");
    builtin_cmd->add_option("--length", cfg.field.length, "Length");
    builtin_cmd->add_option("--cells", cfg.field.cells, "Cell count");
    builtin_cmd->add_option("--rate", cfg.field.rate, "Decay rate (exp-decay)");
    builtin_cmd->add_option("--seed", cfg.field.seed, "Seed (random-psd)");
    builtin_cmd->add_option("--save", cfg.save_path, "Write the field as JSON");

    auto* classify_cmd = app.add_subcommand("classify", "Limit-point / limit-circle classification");
    add_field_options(classify_cmd, cfg.field);
    add_z(classify_cmd);
    classify_cmd->add_option("--schedule", cfg.schedule, "Truncation points");
    classify_cmd->add_option("--tol", cfg.tol, "Relative convergence tolerance")->check(CLI::PositiveNumber);

    auto* mfunc_cmd = app.add_subcommand("mfunc", "m-function at N");
    add_field_options(mfunc_cmd, cfg.field);
    add_z(mfunc_cmd);
    mfunc_cmd->add_option("--beta", cfg.beta_text, "Right boundary angle")->check(angle_check);
    mfunc_cmd->add_option("--N", cfg.N, "Right endpoint")->check(CLI::PositiveNumber);

    auto* eigs_cmd = app.add_subcommand("eigs", "Eigenvalues of the boundary-value problem in a window");
    add_field_options(eigs_cmd, cfg.field);
    add_bvp(eigs_cmd);
    eigs_cmd->add_option("--window", cfg.window, "lo hi")->expected(2);
    eigs_cmd->add_option("--tol", cfg.tol, "Bisection tolerance")->check(CLI::PositiveNumber);
    eigs_cmd->add_option("--grid", cfg.grid, "Scan grid points")->check(CLI::Range(2, 10000000));

    auto* resolvent_cmd = app.add_subcommand("resolvent-check", "Green integral and its residual");
    add_field_options(resolvent_cmd, cfg.field);
    add_bvp(resolvent_cmd);
    add_z(resolvent_cmd);
    resolvent_cmd->add_option("--rhs", cfg.h, "Constant right-hand side h1 h2")->expected(2);

    auto* hs_cmd = app.add_subcommand("hs-compare", "Nystrom matrix eigenvalues against shooting");
    add_field_options(hs_cmd, cfg.field);
    add_bvp(hs_cmd);
    add_z(hs_cmd);
    hs_cmd->add_option("--k", cfg.k, "Number of eigenvalues nearest z")->check(CLI::Range(0, 10000));

    auto* relation_cmd = app.add_subcommand("relation-demo", "Finite-dimensional linear relation examples");
    relation_cmd->add_option("--seed", cfg.relation_seed, "Seed");
    relation_cmd->add_option("--trials", cfg.trials, "Extension search trials")->check(CLI::Range(1, 1000000));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();
    }
    try {
        app.parse(reversed);
        if (cfg.show_defaults) {
            render(defaults_doc(), cfg.output, out);
            return 0;
        }
        if (app.get_subcommands().empty()) {
            throw UsageError("a subcommand is required");
        }
        const CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "eigs" && !(cfg.window[0] < cfg.window[1])) {
            throw UsageError("--window needs lo < hi");
        }
        if (name == "validate") return cmd_validate(cfg, out, err);
        if (name == "normalize") return cmd_normalize(cfg, out);
        if (name == "builtin") return cmd_builtin(cfg, out);
        if (name == "classify") return cmd_classify(cfg, out);
        if (name == "mfunc") return cmd_mfunc(cfg, out);
        if (name == "eigs") return cmd_eigs(cfg, out);
        if (name == "resolvent-check") return cmd_resolvent_check(cfg, out);
        if (name == "hs-compare") return cmd_hs_compare(cfg, out);
        render(relation_demo(cfg.relation_seed, cfg.trials), cfg.output, out);
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const DomainError& e) {
        err << "domain error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace cansys::cli
