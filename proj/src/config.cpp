#include "ousector/config.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Eigenvalues>

#include <fstream>
#include <sstream>

#include "ousector/builtins.hpp"
#include "ousector/linalg.hpp"

namespace ousector {

namespace {

using nlohmann::json;

struct Parser {
    std::vector<std::string> errors;

    void fail(int line, const std::string& msg) {
        std::ostringstream os;
        if (line > 0) os << "line " << line << ": ";
        os << msg;
        errors.push_back(os.str());
    }
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::optional<json> parse_value(Parser& p, int line, const std::string& raw) {
    // JSON accepts all our value shapes: numbers, arrays, nested arrays.
    // Bare words (builtin names, formats) are re-tried as strings.
    const json parsed = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (!parsed.is_discarded()) return std::optional<json>(parsed);
    if (!raw.empty() && raw.find_first_of("[]{}") == std::string::npos) {
        return std::optional<json>(json(raw));
    }
    p.fail(line, "cannot parse value '" + raw + "'");
    return std::nullopt;
}

Eigen::MatrixXd to_matrix(Parser& p, int line, const json& v, const std::string& key) {
    if (!v.is_array() || v.empty() || !v[0].is_array()) {
        p.fail(line, key + " must be a JSON matrix like [[1, 0], [0, 1]]");
        return {};
    }
    const std::size_t rows = v.size();
    const std::size_t cols = v[0].size();
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!v[i].is_array() || v[i].size() != cols) {
            p.fail(line, key + ": ragged rows");
            return {};
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (!v[i][j].is_number()) {
                p.fail(line, key + ": non-numeric entry");
                return {};
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                v[i][j].get<double>();
        }
    }
    return m;
}

Eigen::VectorXd to_vector(Parser& p, int line, const json& v, const std::string& key) {
    if (!v.is_array() || (!v.empty() && v[0].is_array())) {
        p.fail(line, key + " must be a JSON vector like [1, 0]");
        return {};
    }
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
            p.fail(line, key + ": non-numeric entry");
            return {};
        }
        out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    return out;
}

const std::set<std::string> kKnownSuites = {"model", "forms", "sector",
                                            "mehler", "ibp", "wiener"};

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.raw_text = text;
    cfg.suites.clear();
    Parser p;

    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                p.fail(lineno, "unterminated section header");
                continue;
            }
            section = trim(s.substr(1, s.size() - 2));
            if (section != "model" && section != "weight" && section != "run" &&
                section != "output" && section != "tolerances") {
                p.fail(lineno, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            p.fail(lineno, "expected 'key = value'");
            continue;
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string raw = trim(s.substr(eq + 1));
        auto value = parse_value(p, lineno, raw);
        if (!value) continue;
        const json& v = *value;

        auto as_string = [&]() -> std::string {
            if (v.is_string()) return v.get<std::string>();
            p.fail(lineno, key + " must be a word");
            return "";
        };
        auto as_number = [&](double lo, double hi) -> double {
            if (v.is_number()) {
                const double d = v.get<double>();
                if (d >= lo && d <= hi) return d;
            }
            std::ostringstream os;
            os << key << " must be a number in [" << lo << ", " << hi << "]";
            p.fail(lineno, os.str());
            return lo;
        };

        if (section == "model") {
            if (key == "source") {
                const std::string sv = as_string();
                if (sv == "builtin") cfg.source = ExperimentConfig::Source::builtin;
                else if (sv == "explicit") cfg.source = ExperimentConfig::Source::explicit_matrices;
                else if (sv == "wiener") cfg.source = ExperimentConfig::Source::wiener;
                else p.fail(lineno, "source must be builtin, explicit, or wiener");
            } else if (key == "name") {
                cfg.builtin_name = as_string();
            } else if (key == "alpha") {
                cfg.alpha = as_number(-100.0, 100.0);
            } else if (key == "A") {
                cfg.A = to_matrix(p, lineno, v, "A");
            } else if (key == "Q") {
                cfg.Q = to_matrix(p, lineno, v, "Q");
            } else if (key == "modes") {
                cfg.wiener_modes = static_cast<int>(as_number(1, 12));
            } else {
                p.fail(lineno, "unknown key '" + key + "' in [model]");
            }
        } else if (section == "weight") {
            if (key == "kind") {
                const std::string sv = as_string();
                if (sv == "none") cfg.weight = ExperimentConfig::WeightKind::none;
                else if (sv == "quadratic") cfg.weight = ExperimentConfig::WeightKind::quadratic;
                else if (sv == "logcosh") cfg.weight = ExperimentConfig::WeightKind::logcosh;
                else p.fail(lineno, "weight kind must be none, quadratic, or logcosh");
            } else if (key == "M") {
                cfg.weight_M = to_matrix(p, lineno, v, "M");
            } else if (key == "b") {
                cfg.weight_b = to_vector(p, lineno, v, "b");
            } else {
                p.fail(lineno, "unknown key '" + key + "' in [weight]");
            }
        } else if (section == "run") {
            if (key == "p") {
                cfg.p_list.clear();
                if (v.is_number()) {
                    cfg.p_list.push_back(v.get<double>());
                } else if (v.is_array()) {
                    for (const auto& e : v) {
                        if (!e.is_number()) {
                            p.fail(lineno, "p list entries must be numbers");
                            break;
                        }
                        cfg.p_list.push_back(e.get<double>());
                    }
                } else {
                    p.fail(lineno, "p must be a number or list of numbers");
                }
                for (double pv : cfg.p_list) {
                    if (!(pv > 1.0)) {
                        std::ostringstream os;
                        os << "p must exceed 1, got " << pv;
                        p.fail(lineno, os.str());
                    }
                }
            } else if (key == "samples") {
                cfg.samples = static_cast<std::int64_t>(as_number(1, 1e9));
            } else if (key == "seed") {
                cfg.seed = static_cast<std::uint64_t>(as_number(0, 9e18));
            } else if (key == "suites") {
                cfg.suites.clear();
                std::istringstream ss(v.is_string() ? v.get<std::string>() : raw);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    tok = trim(tok);
                    if (tok.empty()) continue;
                    if (tok == "all") {
                        cfg.suites.insert(kKnownSuites.begin(), kKnownSuites.end());
                    } else if (kKnownSuites.count(tok)) {
                        cfg.suites.insert(tok);
                    } else {
                        p.fail(lineno, "unknown suite '" + tok + "'");
                    }
                }
            } else if (key == "galerkin_degree") {
                cfg.galerkin_degree = static_cast<int>(as_number(1, 6));
            } else if (key == "fov_resolution") {
                cfg.fov_resolution = static_cast<int>(as_number(8, 100000));
            } else {
                p.fail(lineno, "unknown key '" + key + "' in [run]");
            }
        } else if (section == "output") {
            if (key == "out") {
                cfg.out_dir = as_string();
            } else if (key == "format") {
                const std::string sv = as_string();
                if (sv != "json" && sv != "csv-tables" && sv != "plot-data") {
                    p.fail(lineno, "format must be json, csv-tables, or plot-data");
                } else {
                    cfg.format = sv;
                }
            } else {
                p.fail(lineno, "unknown key '" + key + "' in [output]");
            }
        } else if (section == "tolerances") {
            if (v.is_number()) {
                cfg.tolerances[key] = v.get<double>();
            } else {
                p.fail(lineno, "tolerance overrides must be numbers");
            }
        } else {
            p.fail(lineno, "key outside any section");
        }
    }

    if (cfg.suites.empty()) cfg.suites.insert("model");

    // Cross-field validation.
    if (cfg.source == ExperimentConfig::Source::builtin) {
        bool known = false;
        for (const auto& n : builtin_model_names()) known |= (n == cfg.builtin_name);
        if (!known) p.fail(0, "unknown builtin model '" + cfg.builtin_name + "'");
    }
    if (cfg.source == ExperimentConfig::Source::explicit_matrices) {
        if (cfg.A.size() == 0 || cfg.Q.size() == 0) {
            p.fail(0, "explicit source needs both A and Q");
        } else if (cfg.A.rows() != cfg.A.cols() || cfg.Q.rows() != cfg.Q.cols() ||
                   cfg.A.rows() != cfg.Q.rows()) {
            p.fail(0, "A and Q must be square with matching dimension");
        } else {
            const double abscissa = spectral_abscissa(cfg.A);
            if (!(abscissa < -1e-12)) {
                std::ostringstream os;
                os << "A is not stable: an eigenvalue has real part " << abscissa;
                p.fail(0, os.str());
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                0.5 * (cfg.Q + cfg.Q.transpose()), Eigen::EigenvaluesOnly);
            if ((cfg.Q - cfg.Q.transpose()).cwiseAbs().maxCoeff() >
                    1e-12 * std::max(1.0, cfg.Q.cwiseAbs().maxCoeff()) ||
                es.eigenvalues().minCoeff() <= 0.0) {
                p.fail(0, "Q must be symmetric positive definite");
            }
        }
    }
    const int dim = [&]() -> int {
        switch (cfg.source) {
            case ExperimentConfig::Source::builtin:
                return cfg.builtin_name == "mixed3" ? 3
                       : cfg.builtin_name == "selfadjoint1d" ? 1 : 2;
            case ExperimentConfig::Source::explicit_matrices:
                return static_cast<int>(cfg.A.rows());
            case ExperimentConfig::Source::wiener:
                return cfg.wiener_modes;
        }
        return 0;
    }();
    if (cfg.weight == ExperimentConfig::WeightKind::quadratic && cfg.weight_M.size() > 0 &&
        (cfg.weight_M.rows() != dim || cfg.weight_M.cols() != dim)) {
        p.fail(0, "weight matrix M has the wrong dimension for the model");
    }
    if (cfg.weight == ExperimentConfig::WeightKind::logcosh && cfg.weight_b.size() > 0 &&
        cfg.weight_b.size() != dim) {
        p.fail(0, "weight vector b has the wrong dimension for the model");
    }
    if (cfg.p_list.empty()) p.fail(0, "p list must not be empty");

    if (!p.errors.empty()) {
        std::ostringstream os;
        os << "configuration invalid (" << p.errors.size() << " problem"
           << (p.errors.size() == 1 ? "" : "s") << "):";
        for (const auto& e : p.errors) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

double tolerance_or(const ExperimentConfig& cfg, const std::string& key,
                    double fallback) {
    const auto it = cfg.tolerances.find(key);
    return it == cfg.tolerances.end() ? fallback : it->second;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : cfg.raw_text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace ousector
