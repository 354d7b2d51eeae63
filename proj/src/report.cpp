#include "ousector/report.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ousector {

namespace {

using nlohmann::ordered_json;

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j) {
    if (!j.is_array() || j.empty()) return {};
    Eigen::MatrixXd m(j.size(), j[0].size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        for (std::size_t k = 0; k < j[i].size(); ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                j[i][k].get<double>();
        }
    }
    return m;
}

ordered_json check_to_json(const CheckReport& c) {
    ordered_json j;
    j["suite"] = c.suite;
    j["name"] = c.name;
    j["kind"] = c.kind;
    j["passed"] = c.passed;
    auto put = [&j](const char* key, double v) {
        if (std::isfinite(v)) j[key] = v;
    };
    put("observed", c.observed);
    put("expected", c.expected);
    put("residual", c.residual);
    put("margin", c.margin);
    put("tolerance", c.tolerance);
    put("std_error", c.std_error);
    if (c.n_samples > 0) j["n_samples"] = c.n_samples;
    if (c.seed != 0) j["seed"] = c.seed;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

CheckReport check_from_json(const ordered_json& j) {
    CheckReport c;
    c.suite = j.value("suite", "");
    c.name = j.value("name", "");
    c.kind = j.value("kind", "");
    c.passed = j.value("passed", false);
    c.observed = j.value("observed", c.observed);
    c.expected = j.value("expected", c.expected);
    c.residual = j.value("residual", c.residual);
    c.margin = j.value("margin", c.margin);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.std_error = j.value("std_error", c.std_error);
    c.n_samples = j.value("n_samples", std::int64_t{0});
    c.seed = j.value("seed", std::uint64_t{0});
    c.note = j.value("note", "");
    return c;
}

std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

} // namespace

ordered_json report_to_json(const RunReport& report) {
    ordered_json j;
    j["schema_version"] = report.schema_version;
    j["version"] = report.version;
    j["config_hash"] = hash_hex(config_hash(report.config));
    j["config_text"] = report.config.raw_text;
    j["passed"] = report.passed;

    ordered_json derived;
    derived["dim"] = report.dim;
    derived["gamma"] = report.gamma;
    if (report.q_inf.size() > 0) derived["q_inf"] = matrix_to_json(report.q_inf);
    if (report.drift_operator.size() > 0) {
        derived["drift_operator"] = matrix_to_json(report.drift_operator);
    }
    ordered_json sectors = ordered_json::array();
    for (const auto& s : report.sectors) {
        ordered_json e;
        e["p"] = s.p;
        e["theta_p"] = s.theta_p;
        e["c_theta"] = s.c_theta;
        sectors.push_back(std::move(e));
    }
    derived["sectors"] = std::move(sectors);
    derived["weighted_mass"] = report.weighted_mass;
    derived["weighted_mass_std_error"] = report.weighted_mass_std_error;
    j["derived"] = std::move(derived);

    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) checks.push_back(check_to_json(c));
    j["checks"] = std::move(checks);

    if (!report.fov_boundary.empty()) {
        ordered_json fov = ordered_json::array();
        for (const auto& z : report.fov_boundary) {
            fov.push_back(ordered_json::array({z.real(), z.imag()}));
        }
        j["fov_boundary"] = std::move(fov);
    }

    ordered_json timing;
    for (const auto& [k, v] : report.timing_ms) timing[k] = v;
    j["timing"] = std::move(timing);
    return j;
}

RunReport report_from_json(const ordered_json& j) {
    RunReport r;
    r.schema_version = j.value("schema_version", kReportSchemaVersion);
    r.version = j.value("version", kVersion);
    r.config = parse_config(j.value("config_text", ""));
    r.passed = j.value("passed", false);
    const auto& d = j.at("derived");
    r.dim = d.value("dim", 0);
    r.gamma = d.value("gamma", 0.0);
    if (d.contains("q_inf")) r.q_inf = matrix_from_json(d["q_inf"]);
    if (d.contains("drift_operator")) {
        r.drift_operator = matrix_from_json(d["drift_operator"]);
    }
    for (const auto& e : d.at("sectors")) {
        SectorParams s;
        s.p = e.value("p", 2.0);
        s.theta_p = e.value("theta_p", 0.0);
        s.c_theta = e.value("c_theta", 0.0);
        r.sectors.push_back(s);
    }
    r.weighted_mass = d.value("weighted_mass", 0.0);
    r.weighted_mass_std_error = d.value("weighted_mass_std_error", 0.0);
    for (const auto& c : j.at("checks")) r.checks.push_back(check_from_json(c));
    if (j.contains("fov_boundary")) {
        for (const auto& z : j["fov_boundary"]) {
            r.fov_boundary.emplace_back(z[0].get<double>(), z[1].get<double>());
        }
    }
    if (j.contains("timing")) {
        for (const auto& [k, v] : j["timing"].items()) {
            r.timing_ms[k] = v.get<double>();
        }
    }
    return r;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void write_checks_csv(std::ostream& os, const RunReport& report) {
    os << "suite,name,kind,passed,observed,expected,residual,margin,tolerance,"
          "std_error,n_samples,seed,note\n";
    for (const auto& c : report.checks) {
        os << csv_escape(c.suite) << ',' << csv_escape(c.name) << ',' << c.kind << ','
           << (c.passed ? "1" : "0") << ',';
        auto num = [&os](double v) {
            if (std::isfinite(v)) os << std::setprecision(17) << v;
            os << ',';
        };
        num(c.observed);
        num(c.expected);
        num(c.residual);
        num(c.margin);
        num(c.tolerance);
        num(c.std_error);
        os << c.n_samples << ',' << c.seed << ',' << csv_escape(c.note) << '\n';
    }
}

void write_plot_data(const std::filesystem::path& base, const RunReport& report,
                     std::vector<std::string>& written) {
    {
        const auto path = base.string() + ".theta.csv";
        std::ofstream os(path);
        if (!os) throw IoError("cannot write " + path);
        os << "p,theta_p,c_theta,gamma\n";
        for (double p = 1.05; p <= 10.0 + 1e-9; p += 0.05) {
            const double c =
                std::sqrt((p - 2.0) * (p - 2.0) + p * p * report.gamma * report.gamma) /
                (2.0 * std::sqrt(p - 1.0));
            os << std::setprecision(12) << p << ',' << std::atan(1.0) * 2 - std::atan(c)
               << ',' << c << ',' << report.gamma << '\n';
        }
        written.push_back(path);
    }
    if (!report.fov_boundary.empty()) {
        const auto path = base.string() + ".fov.csv";
        std::ofstream os(path);
        if (!os) throw IoError("cannot write " + path);
        os << "re,im\n";
        for (const auto& z : report.fov_boundary) {
            os << std::setprecision(17) << z.real() << ',' << z.imag() << '\n';
        }
        written.push_back(path);
    }
}

} // namespace

std::vector<std::string> emit(const RunReport& report, const std::string& format,
                              const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "'");

    const std::string hex = [&] {
        std::ostringstream os;
        os << std::hex << std::setw(16) << std::setfill('0')
           << config_hash(report.config);
        return os.str();
    }();

    // Append-only: never overwrite a previous run of the same config.
    int seq = 0;
    fs::path base;
    while (true) {
        std::ostringstream name;
        name << "run-" << hex << "-" << seq;
        base = fs::path(out_dir) / name.str();
        if (!fs::exists(base.string() + ".json") &&
            !fs::exists(base.string() + ".checks.csv") &&
            !fs::exists(base.string() + ".theta.csv")) {
            break;
        }
        ++seq;
    }

    std::vector<std::string> written;
    if (format == "json") {
        const auto path = base.string() + ".json";
        std::ofstream os(path);
        if (!os) throw IoError("cannot write " + path);
        os << report_to_json(report).dump(2) << '\n';
        written.push_back(path);
    } else if (format == "csv-tables") {
        const auto path = base.string() + ".checks.csv";
        std::ofstream os(path);
        if (!os) throw IoError("cannot write " + path);
        write_checks_csv(os, report);
        written.push_back(path);
    } else if (format == "plot-data") {
        write_plot_data(base, report, written);
    } else {
        throw ConfigError("unknown report format '" + format + "'");
    }

    {
        std::ofstream idx(fs::path(out_dir) / "index.tsv", std::ios::app);
        const auto now = std::chrono::system_clock::now();
        const auto t = std::chrono::system_clock::to_time_t(now);
        idx << hex << '\t' << seq << '\t'
            << (written.empty() ? "" : written.front()) << '\t'
            << (report.passed ? "pass" : "fail") << '\t'
            << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ") << '\n';
    }
    return written;
}

} // namespace ousector
