#include "igeo/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "igeo/crofton.hpp"
#include "igeo/deformation.hpp"
#include "igeo/intersections.hpp"

namespace igeo {

namespace {

constexpr std::array<std::pair<Command, const char*>, 9> kCommandNames{{
    {Command::CroftonSphere, "crofton-sphere"},
    {Command::CroftonCp, "crofton-cp"},
    {Command::CdScan, "cd-scan"},
    {Command::Prop34Scan, "prop34-scan"},
    {Command::TasakiCheck, "tasaki-check"},
    {Command::Transversality, "transversality"},
    {Command::Equidistribution, "equidistribution"},
    {Command::SunExample, "sun-example"},
    {Command::Calibrate, "calibrate"},
}};

const std::array<const char*, 5> kKinds{"interleaved", "interleaved-complex", "wirtinger", "grassmann", "cp"};

[[noreturn]] void config_error(const std::string& what) { throw GeometryError(ErrorCode::ConfigError, what); }

std::string format_double(double x) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", x);
    return buf.data();
}

double parse_double(const std::string& s) {
    // strtod rather than stod: subnormals set ERANGE but are valid round-trip values
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(begin, &end);
    if (s.empty() || end == begin || std::isspace(static_cast<unsigned char>(s.front()))) {
        throw GeometryError(ErrorCode::ParseError, "not a number: " + s);
    }
    if (end != begin + s.size()) {
        throw GeometryError(ErrorCode::ParseError, "trailing characters in number: " + s);
    }
    if (errno == ERANGE && std::isinf(x)) {
        throw GeometryError(ErrorCode::ParseError, "number out of range: " + s);
    }
    return x;
}

std::size_t minimum_samples(Command c) {
    switch (c) {
    case Command::CroftonSphere:
    case Command::Calibrate:
    case Command::Equidistribution:
        return 100;
    case Command::CdScan:
    case Command::Prop34Scan:
    case Command::TasakiCheck:
        return 1000;
    default:
        return 1;
    }
}

ReportRow row(std::string name, const McEstimate& e, std::string flag = {}) {
    return {std::move(name), e.mean, e.std_error, e.samples, std::move(flag)};
}

ReportRow exact_row(std::string name, double value, std::string flag = {}) {
    return {std::move(name), value, 0.0, 0, std::move(flag)};
}

ReportRow bool_row(std::string name, bool value) { return exact_row(std::move(name), value ? 1.0 : 0.0); }

template <class Parse>
auto read_input(const std::string& path, Parse parse) {
    std::ifstream in(path);
    if (!in) {
        config_error("cannot open input file " + path);
    }
    try {
        return parse(in);
    } catch (const GeometryError& e) {
        config_error(path + ": " + e.what());
    }
}

FamilySpec scan_family(const RunConfig& c) {
    if (c.kind == "interleaved") {
        return FamilySpec(Interleaved{c.m, c.p, c.q, false});
    }
    if (c.kind == "interleaved-complex") {
        return FamilySpec(Interleaved{c.m, c.p, c.q, true});
    }
    if (c.kind == "wirtinger") {
        return FamilySpec(WirtingerCp{c.n, c.k});
    }
    if (c.kind == "grassmann") {
        return FamilySpec(Grassmann{c.k, c.l, c.m});
    }
    return FamilySpec(CpHyperplanes{c.n});
}

void run_crofton_sphere(const RunConfig& c, const RandomStream& stream, const ExecPolicy& exec, RunReport& out) {
    const SphericalPolyline curve = c.input_path.empty()
                                        ? SphericalPolyline::latitude_circle(c.n + 1, std::numbers::pi / 3, 360)
                                        : read_input(c.input_path, [](std::istream& in) { return parse_polyline(in); });
    const McEstimate est = crofton_length(curve, c.samples, stream, exec);
    out.rows.push_back(row("crofton_length", est));
    out.rows.push_back(exact_row("polyline_length", polyline_length(curve)));
    out.diagnostics.emplace_back("rejected", static_cast<double>(est.rejected));
    out.diagnostics.emplace_back("rejection_rate",
                                 static_cast<double>(est.rejected) / static_cast<double>(est.rejected + est.samples));
}

void run_calibrate(const RunConfig& c, const RandomStream& stream, const ExecPolicy& exec, RunReport& out) {
    const SphericalPolyline reference =
        c.input_path.empty() ? SphericalPolyline::latitude_circle(c.n + 1, std::numbers::pi / 2, 360)
                             : read_input(c.input_path, [](std::istream& in) { return parse_polyline(in); });
    const ZetaCalibration z = calibrate_zeta(reference.ambient_dim() - 1, reference, c.samples, stream, exec);
    out.rows.push_back({"zeta", z.value, z.std_error, z.mean_count.samples, z.low_power ? "low_power" : ""});
    out.rows.push_back(row("mean_count", z.mean_count));
    out.rows.push_back(exact_row("kappa", kCroftonCurveConstant));
    out.rows.push_back(exact_row("reference_length", polyline_length(reference)));
    out.diagnostics.emplace_back("rejected", static_cast<double>(z.mean_count.rejected));
}

HomogeneousCurve input_curve(const RunConfig& c) {
    if (c.input_path.empty()) {
        return HomogeneousCurve::fermat(c.degree);
    }
    return read_input(c.input_path, [](std::istream& in) { return parse_curve(in); });
}

void run_crofton_cp(const RunConfig& c, const RandomStream& stream, const ExecPolicy& exec, RunReport& out) {
    const HomogeneousCurve curve = input_curve(c);
    const McEstimate est = crofton_area_cp2(curve, c.samples, stream, exec);
    out.rows.push_back(row("area_cp1_units", est));
    out.rows.push_back(exact_row("degree", curve.degree()));
    out.diagnostics.emplace_back("rejected", static_cast<double>(est.rejected));
}

void run_equidistribution(const RunConfig& c, const RandomStream& stream, const ExecPolicy& exec, RunReport& out) {
    const HomogeneousCurve curve = input_curve(c);
    const EquidistributionResult r = equidistribution_experiment(curve, c.samples, stream, exec);
    for (const auto& [count, lines] : r.histogram) {
        out.rows.push_back({"distinct=" + std::to_string(count), static_cast<double>(lines), 0.0, r.samples, ""});
    }
    out.rows.push_back(
        {"exceptional_fraction", r.exceptional_fraction, 0.0, r.samples, r.exceptional_fraction > 0 ? "exceptional" : ""});
    out.diagnostics.emplace_back("rejected", static_cast<double>(r.rejected));
}

void run_cd_scan(const RunConfig& c, const RandomStream& stream, const ExecPolicy& exec, RunReport& out) {
    std::size_t best = 0;
    for (int i = 0; i < c.tau_grid; ++i) {
        const double tau = (std::numbers::pi / 2) * i / (c.tau_grid - 1);
        out.rows.push_back(row("tau=" + format_double(tau), cd_cp_tau(tau, c.samples, stream.split(i), exec)));
        if (out.rows.back().value > out.rows[best].value) {
            best = out.rows.size() - 1;
        }
    }
    out.rows[best].flag = "max";
}

void run_scan(const RunConfig& c, const RandomStream& stream, RunReport& out) {
    const FamilySpec spec = scan_family(c);
    ScanOptions options;
    options.structure_tolerance = c.tolerance;
    options.threads = c.threads;
    const ScanResult r = maximizer_scan(spec, c.restarts, c.samples, stream, options);
    out.rows.push_back(row("best_value", r.best_value, r.structure.recognized ? "recognized" : "unrecognized"));
    for (std::size_t i = 0; i < r.restart_values.size(); ++i) {
        out.rows.push_back(row("restart[" + std::to_string(i) + "]", r.restart_values[i],
                               r.restart_converged[i] ? "converged" : "non_convergence"));
    }
    out.rows.push_back(bool_row("product_form", r.structure.product_form));
    out.rows.push_back(bool_row("i_prime_complex", r.structure.i_prime_complex));
    out.rows.push_back(bool_row("complex_subspace", r.structure.complex_subspace));
    out.rows.push_back(bool_row("recognized", r.structure.recognized));
    for (const auto& [name, value] : r.structure.residuals) {
        out.rows.push_back(exact_row("residual." + name, value));
    }
    out.diagnostics.emplace_back("max_trace_residual", r.max_trace_residual);
    out.diagnostics.emplace_back("evaluations", static_cast<double>(r.evaluations));
    out.diagnostics.emplace_back("non_convergence", r.non_convergence ? 1.0 : 0.0);
    out.non_convergence = r.non_convergence;
}

void run_tasaki(const RunConfig& c, const RandomStream& stream, const ExecPolicy& exec, RunReport& out) {
    RandomStream plane_stream = stream.split(0);
    const OrthoFrame product = product_plane(Interleaved{2, 1, c.q, false});
    const OrthoFrame tasaki = tasaki_plane(c.q, plane_stream);
    const McEstimate vp = m_objective(product, 2, c.q, c.samples, stream.split(1), exec);
    const McEstimate vt = m_objective(tasaki, 2, c.q, c.samples, stream.split(2), exec);
    const double se = combined_stderr(vp, vt);
    out.rows.push_back(row("m_objective.product", vp));
    out.rows.push_back(row("m_objective.tasaki", vt));
    out.rows.push_back({"difference", vp.mean - vt.mean, se, c.samples,
                        std::abs(vp.mean - vt.mean) <= 3.0 * se ? "agree" : "disagree"});
    const double tol = c.tolerance > 0.0 ? c.tolerance : default_structure_tolerance(c.samples);
    const StructureDiagnosis d = diagnose(tasaki, FamilySpec(Interleaved{2, 1, c.q, false}), tol);
    out.rows.push_back(bool_row("tasaki.product_form", d.product_form));
    out.rows.push_back(bool_row("tasaki.i_prime_complex", d.i_prime_complex));
    for (const auto& [name, value] : d.residuals) {
        out.rows.push_back(exact_row("tasaki." + name, value));
    }
}

void run_transversality(const RunConfig& c, const RandomStream& stream, RunReport& out) {
    if (c.k < 1 || c.k > c.l || c.m < 1) {
        config_error("transversality needs 1 <= k <= l and m >= 1");
    }
    const Index n = c.l + c.m;
    RandomStream s = stream;
    std::size_t degenerate = 0;
    std::size_t containment_failures = 0;
    double min_volume = 1.0;
    const LinearSubspace fixed = LinearSubspace::coordinate(n, c.k, c.l - c.k);
    for (std::size_t i = 0; i < c.samples; ++i) {
        const Matrix y = sample_rotation(n, s);
        min_volume = std::min(min_volume, degeneracy_volume(y, c.k, c.l));
        const auto meet = grassmann_meet(y, c.k, c.l, c.m);
        if (!meet) {
            ++degenerate;
            continue;
        }
        const LinearSubspace moved(n, y.leftCols(c.k));
        if (meet->rank() != c.l || intersection_dim(*meet, moved) != c.k ||
            intersection_dim(*meet, fixed) != c.l - c.k) {
            ++containment_failures;
        }
    }
    out.rows.push_back({"degenerate", static_cast<double>(degenerate), 0.0, c.samples, ""});
    out.rows.push_back({"containment_failures", static_cast<double>(containment_failures), 0.0, c.samples, ""});
    out.rows.push_back({"min_degeneracy_volume", min_volume, 0.0, c.samples, ""});
    if (c.k < c.l) {
        const Matrix swap = swap_rotation(c.k, c.l, c.m);
        out.rows.push_back(exact_row("swap.degeneracy_volume", degeneracy_volume(swap, c.k, c.l),
                                     grassmann_meet(swap, c.k, c.l, c.m) ? "one_point" : "degenerate"));
    }
}

void run_sun(const RunConfig& c, RunReport& out) {
    if (c.n < 1) {
        config_error("sun-example needs n >= 1");
    }
    const SuCircleResult r = su_circle_intersections(static_cast<int>(c.n));
    out.rows.push_back(exact_row("points", static_cast<double>(r.points.size())));
    out.rows.push_back(exact_row("orthogonality_residual", r.orthogonality_residual));
    out.rows.push_back(exact_row("root_residual", r.root_residual));
    out.rows.push_back(exact_row("det_residual", r.det_residual));
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        out.rows.push_back(exact_row("point[" + std::to_string(i) + "].arg", std::arg(r.points[i](0, 0))));
    }
}

using Json = nlohmann::ordered_json;

Json number_to_json(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

double number_from_json(const Json& j) {
    if (j.is_string()) {
        return parse_double(j.get<std::string>());
    }
    return j.get<double>();
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

}  // namespace

std::string to_string(Command c) {
    for (const auto& [cmd, name] : kCommandNames) {
        if (cmd == c) {
            return name;
        }
    }
    return "unknown";
}

Command parse_command(const std::string& s) {
    for (const auto& [cmd, name] : kCommandNames) {
        if (s == name) {
            return cmd;
        }
    }
    config_error("unknown command '" + s + "'");
}

std::size_t default_samples(Command c) {
    switch (c) {
    case Command::CroftonSphere:
    case Command::Calibrate:
        return 100000;
    case Command::CdScan:
    case Command::TasakiCheck:
        return 1000000;
    case Command::SunExample:
        return 0;
    default:
        return 10000;
    }
}

RunConfig resolve(RunConfig c) {
    if (c.samples == 0) {
        c.samples = default_samples(c.command);
    }
    if (c.command != Command::SunExample && c.samples < minimum_samples(c.command)) {
        config_error(to_string(c.command) + " needs at least " + std::to_string(minimum_samples(c.command)) +
                     " samples");
    }
    if (c.threads < 1) {
        config_error("threads must be at least 1");
    }
    if (c.restarts < 1) {
        config_error("restarts must be at least 1");
    }
    if (c.tau_grid < 2) {
        config_error("tau grid needs at least 2 points");
    }
    if (c.n < 1 || c.k < 1 || c.l < 1 || c.m < 1 || c.p < 1 || c.q < 1) {
        config_error("geometry parameters must be positive");
    }
    if (c.degree < 1) {
        config_error("degree must be at least 1");
    }
    if (c.tolerance < 0.0) {
        config_error("tolerance must be nonnegative");
    }
    if (std::find(kKinds.begin(), kKinds.end(), c.kind) == kKinds.end()) {
        config_error("unknown family kind '" + c.kind + "'");
    }
    return c;
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& c) {
    return {
        {"command", to_string(c.command)},
        {"seed", std::to_string(c.seed)},
        {"samples", std::to_string(c.samples)},
        {"restarts", std::to_string(c.restarts)},
        {"threads", std::to_string(c.threads)},
        {"n", std::to_string(c.n)},
        {"k", std::to_string(c.k)},
        {"l", std::to_string(c.l)},
        {"m", std::to_string(c.m)},
        {"p", std::to_string(c.p)},
        {"q", std::to_string(c.q)},
        {"tau-grid", std::to_string(c.tau_grid)},
        {"degree", std::to_string(c.degree)},
        {"kind", c.kind},
        {"tolerance", format_double(c.tolerance)},
        {"fail-on-nonconvergence", c.fail_on_nonconvergence ? "true" : "false"},
        {"input", c.input_path},
    };
}

RunReport run(const RunConfig& raw) {
    const RunConfig c = resolve(raw);
    const auto start = std::chrono::steady_clock::now();
    RunReport out;
    out.config = config_echo(c);
    const RandomStream stream(c.seed);
    const ExecPolicy exec{c.threads};
    try {
        switch (c.command) {
        case Command::CroftonSphere:
            run_crofton_sphere(c, stream, exec, out);
            break;
        case Command::Calibrate:
            run_calibrate(c, stream, exec, out);
            break;
        case Command::CroftonCp:
            run_crofton_cp(c, stream, exec, out);
            break;
        case Command::Equidistribution:
            run_equidistribution(c, stream, exec, out);
            break;
        case Command::CdScan:
            run_cd_scan(c, stream, exec, out);
            break;
        case Command::Prop34Scan:
            run_scan(c, stream, out);
            break;
        case Command::TasakiCheck:
            run_tasaki(c, stream, exec, out);
            break;
        case Command::Transversality:
            run_transversality(c, stream, out);
            break;
        case Command::SunExample:
            run_sun(c, out);
            break;
        }
    } catch (const GeometryError& e) {
        // shape problems in the requested geometry are configuration mistakes
        switch (e.code()) {
        case ErrorCode::DimensionMismatch:
        case ErrorCode::InvalidArgument:
        case ErrorCode::RankDeficient:
        case ErrorCode::NotUnit:
            config_error(e.what());
        default:
            throw;
        }
    }
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string emit(const RunReport& report, Format format, bool include_timing) {
    if (format == Format::Json) {
        Json j;
        j["config"] = Json::object();
        for (const auto& [k, v] : report.config) {
            j["config"][k] = v;
        }
        j["rows"] = Json::array();
        for (const auto& r : report.rows) {
            j["rows"].push_back({{"name", r.name},
                                 {"value", number_to_json(r.value)},
                                 {"stderr", number_to_json(r.std_error)},
                                 {"samples", r.samples},
                                 {"flag", r.flag}});
        }
        j["diagnostics"] = Json::object();
        for (const auto& [k, v] : report.diagnostics) {
            j["diagnostics"][k] = number_to_json(v);
        }
        j["non_convergence"] = report.non_convergence;
        if (include_timing) {
            j["wall_time"] = report.wall_time;
        }
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    for (const auto& [k, v] : report.config) {
        out << "# " << k << '=' << v << '\n';
    }
    for (const auto& [k, v] : report.diagnostics) {
        out << "# diag." << k << '=' << format_double(v) << '\n';
    }
    out << "# non_convergence=" << (report.non_convergence ? "true" : "false") << '\n';
    if (include_timing) {
        out << "# wall_time=" << format_double(report.wall_time) << '\n';
    }
    out << "name,value,stderr,samples,flag\n";
    for (const auto& r : report.rows) {
        out << r.name << ',' << format_double(r.value) << ',' << format_double(r.std_error) << ',' << r.samples << ','
            << r.flag << '\n';
    }
    return out.str();
}

RunReport parse_report(const std::string& text, Format format) {
    RunReport report;
    if (format == Format::Json) {
        Json j;
        try {
            j = Json::parse(text);
            for (const auto& [k, v] : j.at("config").items()) {
                report.config.emplace_back(k, v.get<std::string>());
            }
            for (const auto& r : j.at("rows")) {
                report.rows.push_back({r.at("name").get<std::string>(), number_from_json(r.at("value")),
                                       number_from_json(r.at("stderr")), r.at("samples").get<std::size_t>(),
                                       r.at("flag").get<std::string>()});
            }
            for (const auto& [k, v] : j.at("diagnostics").items()) {
                report.diagnostics.emplace_back(k, number_from_json(v));
            }
            report.non_convergence = j.value("non_convergence", false);
            if (j.contains("wall_time")) {
                report.wall_time = j.at("wall_time").get<double>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw GeometryError(ErrorCode::ParseError, std::string("bad report json: ") + e.what());
        }
        return report;
    }
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw GeometryError(ErrorCode::ParseError, "config line without '=': " + line);
            }
            const std::string key = line.substr(2, eq - 2);
            const std::string value = line.substr(eq + 1);
            if (key.rfind("diag.", 0) == 0) {
                report.diagnostics.emplace_back(key.substr(5), parse_double(value));
            } else if (key == "non_convergence") {
                report.non_convergence = value == "true";
            } else if (key == "wall_time") {
                report.wall_time = parse_double(value);
            } else {
                report.config.emplace_back(key, value);
            }
            continue;
        }
        if (!header_seen) {
            if (line != "name,value,stderr,samples,flag") {
                throw GeometryError(ErrorCode::ParseError, "missing csv header");
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 5) {
            throw GeometryError(ErrorCode::ParseError, "csv row needs 5 fields: " + line);
        }
        report.rows.push_back({f[0], parse_double(f[1]), parse_double(f[2]),
                               static_cast<std::size_t>(std::stoull(f[3])), f[4]});
    }
    if (!header_seen) {
        throw GeometryError(ErrorCode::ParseError, "missing csv header");
    }
    return report;
}

void write_report(const RunReport& report, const RunConfig& config) {
    const std::string text = emit(report, config.format);
    if (config.output_path.empty()) {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(config.output_path);
    if (!out || !(out << text) || !out.flush()) {
        throw GeometryError(ErrorCode::IoError, "cannot write " + config.output_path);
    }
}

ParsedArgs parse_args(int argc, const char* const* argv) {
    ParsedArgs result;
    RunConfig& c = result.config;
    CLI::App app{"Integral-geometry estimators and experiments"};
    app.set_config("--config", "", "key=value file; command-line flags override it");

    std::string command;
    std::string format = "csv";
    app.add_option("command", command,
                   "crofton-sphere | crofton-cp | cd-scan | prop34-scan | tasaki-check | transversality | "
                   "equidistribution | sun-example | calibrate");
    app.add_option("--seed", c.seed, "64-bit seed");
    app.add_option("--samples", c.samples, "sample count (samples per evaluation for scans)");
    app.add_option("--restarts", c.restarts, "scan restarts");
    app.add_option("--threads", c.threads, "worker threads; 1 is the bitwise reference mode");
    app.add_option("--out", c.output_path, "output file (stdout when absent)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--input", c.input_path, "polyline or curve file");
    app.add_option("--n", c.n);
    app.add_option("--k", c.k);
    app.add_option("--l", c.l);
    app.add_option("--m", c.m);
    app.add_option("--p", c.p);
    app.add_option("--q", c.q);
    app.add_option("--tau-grid", c.tau_grid, "number of Kahler angles in [0, pi/2]");
    app.add_option("--degree", c.degree, "Fermat curve degree when no input is given");
    app.add_option("--kind", c.kind, "scan family: interleaved, interleaved-complex, wirtinger, grassmann, cp");
    app.add_option("--tolerance", c.tolerance, "structure-test tolerance (0 = sample-size default)");
    app.add_flag("--fail-on-nonconvergence", c.fail_on_nonconvergence, "exit 4 when a scan restart does not converge");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream out;
        std::ostringstream err;
        result.exit_requested = true;
        result.exit_code = app.exit(e, out, err) == 0 ? 0 : 2;
        result.message = out.str() + err.str();
        return result;
    }
    if (command.empty()) {
        config_error("no command given");
    }
    c.command = parse_command(command);
    c.format = format == "json" ? Format::Json : Format::Csv;
    c = resolve(c);
    return result;
}

}  // namespace igeo
