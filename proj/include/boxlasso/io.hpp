#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "boxlasso/denoise.hpp"
#include "boxlasso/errors.hpp"
#include "boxlasso/geometry.hpp"
#include "boxlasso/matrix.hpp"
#include "boxlasso/model.hpp"
#include "boxlasso/multipliers.hpp"
#include "boxlasso/verify.hpp"

namespace boxlasso {

using nlohmann::json;

/// Shortest exact decimal form: 17 significant digits round-trip doubles.
inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline const json& require_field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw InvalidInput(std::string("problem JSON: missing field \"") + name + "\"");
    return *it;
}

inline Vector number_array(const json& j, const char* name, std::size_t expected) {
    if (!j.is_array())
        throw InvalidInput(std::string("problem JSON: field \"") + name + "\" must be an array");
    if (j.size() != expected)
        throw InvalidInput(std::string("problem JSON: field \"") + name + "\" has length " +
                           std::to_string(j.size()) + ", expected " + std::to_string(expected));
    Vector out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number())
            throw InvalidInput(std::string("problem JSON: field \"") + name +
                               "\" contains a non-numeric entry");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace detail

/// Canonical on-disk problem format:
///   { "m": int, "n": int, "A": [m*n floats, row-major],
///     "b": [m floats], "tau": [n floats] }
/// Parsing is strict; errors name the offending field.
inline Problem problem_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("problem JSON: top level must be an object");
    const json& jm = detail::require_field(j, "m");
    const json& jn = detail::require_field(j, "n");
    if (!jm.is_number_integer() || jm.get<long long>() < 0)
        throw InvalidInput("problem JSON: field \"m\" must be a nonnegative integer");
    if (!jn.is_number_integer() || jn.get<long long>() < 0)
        throw InvalidInput("problem JSON: field \"n\" must be a nonnegative integer");
    const auto m = jm.get<std::size_t>();
    const auto n = jn.get<std::size_t>();

    Vector entries = detail::number_array(detail::require_field(j, "A"), "A", m * n);
    Vector b = detail::number_array(detail::require_field(j, "b"), "b", m);
    Vector tau = detail::number_array(detail::require_field(j, "tau"), "tau", n);
    for (std::size_t k = 0; k < tau.size(); ++k)
        if (!(tau[k] >= 0.0))
            throw InvalidInput("problem JSON: field \"tau\" entry " + std::to_string(k) +
                               " is negative");
    try {
        return Problem(DenseMatrix(m, n, std::move(entries)), std::move(b), std::move(tau));
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("problem JSON: ") + e.what());
    }
}

inline Problem parse_problem(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("problem JSON: parse error: ") + e.what());
    }
    return problem_from_json(j);
}

inline json problem_to_json(const Problem& p) {
    return json{{"m", p.m()},
                {"n", p.n()},
                {"A", p.a.entries()},
                {"b", p.b},
                {"tau", p.tau}};
}

inline json solve_result_to_json(const SolveResult& r) {
    return json{{"x", r.x},
                {"objective", r.objective},
                {"iterations", r.iterations},
                {"converged", r.converged}};
}

inline json multiplier_result_to_json(const MultiplierResult& r) {
    json sig = nullptr;
    if (r.signature_used) sig = r.signature_used->signs;
    return json{{"lambda", r.lambda.lambda},
                {"method", to_string(r.method)},
                {"signature", sig},
                {"condition_margin", r.condition_margin}};
}

inline json verify_report_to_json(const VerifyReport& r) {
    return json{{"p_star", r.p_star},
                {"dual_value", r.dual_value},
                {"gap", r.gap},
                {"kkt_residuals", r.kkt_residuals},
                {"max_kkt_residual", r.max_kkt_residual},
                {"x_constrained", r.x_constrained},
                {"x_penalized", r.x_penalized},
                {"solutions_close", r.solutions_close}};
}

/// Accepts either a bare array of weights or any object with a "lambda"
/// array (so `multipliers` output can be piped straight back in).
inline Multipliers multipliers_from_json(const json& j) {
    const json* arr = nullptr;
    if (j.is_array())
        arr = &j;
    else if (j.is_object() && j.contains("lambda"))
        arr = &j.at("lambda");
    else
        throw InvalidInput("lambda JSON: expected an array or an object with a \"lambda\" field");
    Vector lam;
    lam.reserve(arr->size());
    for (const auto& v : *arr) {
        if (!v.is_number()) throw InvalidInput("lambda JSON: non-numeric entry");
        lam.push_back(v.get<double>());
    }
    try {
        return Multipliers(std::move(lam));
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("lambda JSON: ") + e.what());
    }
}

/// Signal CSV: one float per line; an optional leading "# label" line.
inline Signal read_signal_csv(std::istream& in) {
    Vector samples;
    std::string label;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (first) {
                label = line.substr(1);
                if (!label.empty() && label[0] == ' ') label.erase(0, 1);
            }
            first = false;
            continue;
        }
        first = false;
        try {
            std::size_t pos = 0;
            const double v = std::stod(line, &pos);
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
            if (pos != line.size()) throw std::invalid_argument("trailing characters");
            samples.push_back(v);
        } catch (const std::exception&) {
            throw InvalidInput("signal CSV: cannot parse line \"" + line + "\"");
        }
    }
    return Signal(std::move(samples), std::move(label));
}

inline void write_signal_csv(std::ostream& out, const Signal& s) {
    if (!s.label.empty()) out << "# " << s.label << "\n";
    for (double v : s.samples) out << fmt17(v) << "\n";
}

/// Grid CSV: header "u_i[,u_j],g", floats with 17 significant digits.
inline void write_grid_csv(std::ostream& out, const GridTable& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ",";
        out << table.columns[c];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            out << fmt17(row[c]);
        }
        out << "\n";
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open file for writing: " + path);
    out << text;
}

} // namespace boxlasso
