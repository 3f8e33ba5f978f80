// JSON and CSV interchange.  Complex numbers serialize as [re, im] pairs;
// coefficient vectors and finite signals are plain arrays of such pairs.
// File outputs go through a temp-file-plus-rename so readers never observe
// partial writes.

#ifndef TORUSGABOR_IO_HPP
#define TORUSGABOR_IO_HPP

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bargmann.hpp"
#include "frames.hpp"
#include "signals.hpp"

namespace torusgabor {

using json = nlohmann::json;

inline json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("expected a [re, im] pair");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

inline json complex_vector_to_json(const std::vector<cplx>& v) {
    json out = json::array();
    for (const cplx& c : v)
        out.push_back(complex_to_json(c));
    return out;
}

inline std::vector<cplx> complex_vector_from_json(const json& j) {
    if (!j.is_array())
        throw std::invalid_argument("expected an array of [re, im] pairs");
    std::vector<cplx> out;
    for (const json& e : j)
        out.push_back(complex_from_json(e));
    return out;
}

inline json to_json(const SNVector& v) { return complex_vector_to_json(v.coeffs); }
inline json to_json(const FiniteSignal& s) { return complex_vector_to_json(s.entries); }

inline SNVector snvector_from_json(const json& j) {
    return SNVector(complex_vector_from_json(j));
}
inline FiniteSignal finite_signal_from_json(const json& j) {
    return FiniteSignal(complex_vector_from_json(j));
}

inline json to_json(const ZeroSet& zs) {
    json out;
    out["zeros"] = complex_vector_to_json(zs.zeros);
    out["multiplicities"] = zs.multiplicities;
    out["residuals"] = zs.residuals;
    out["count"] = zs.total_count;
    return out;
}

inline json to_json(const FrameReport& r) {
    json out;
    out["points"] = r.points;
    out["lower_bound"] = r.lower_bound;
    out["upper_bound"] = r.upper_bound;
    out["sigma_ratio"] = r.sigma_ratio;
    out["predicate_verdict"] = to_string(r.predicate_verdict);
    out["numeric_verdict"] = to_string(r.numeric_verdict);
    return out;
}

inline json to_json(const VerifyReport& r) {
    json out;
    out["n"] = r.n_dim;
    out["lambda"] = r.lambda;
    out["seed"] = r.seed;
    out["grid_subsets"] = r.grid_subsets;
    out["grid_subsets_size_n"] = r.grid_subsets_size_n;
    out["grid_subsets_size_n_plus_1"] = r.grid_subsets_size_n1;
    out["continuous_samples"] = r.continuous_samples;
    out["indeterminate"] = r.indeterminate;
    out["mismatch_count"] = r.mismatches.size();
    json mm = json::array();
    for (const VerifyMismatch& m : r.mismatches) {
        json e;
        e["kind"] = m.kind;
        e["config"] = m.config;
        e["predicate_verdict"] = to_string(m.predicted);
        e["numeric_verdict"] = to_string(m.numeric);
        e["sigma_ratio"] = m.sigma_ratio;
        mm.push_back(e);
    }
    out["mismatches"] = mm;
    out["elapsed_seconds"] = r.elapsed_seconds;
    return out;
}

// ---- files -----------------------------------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Write through a temp file and rename, so the target is never partial.
inline void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::invalid_argument("cannot open " + tmp + " for writing");
        out << content;
        if (!out)
            throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed for " + path);
}

inline json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
}

// Round-trip-exact decimal formatting for CSV cells.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Parse "x,xi" lines; blank lines and a leading "x,xi" header are tolerated.
inline std::vector<std::pair<double, double>> parse_points_csv(const std::string& text) {
    std::vector<std::pair<double, double>> out;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (first && line.find_first_not_of("xi, \t") == std::string::npos) {
            first = false;
            continue; // header
        }
        first = false;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("malformed CSV line: " + line);
        std::size_t pos1 = 0, pos2 = 0;
        double a, b;
        try {
            a = std::stod(line.substr(0, comma), &pos1);
            b = std::stod(line.substr(comma + 1), &pos2);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed CSV line: " + line);
        }
        out.emplace_back(a, b);
    }
    return out;
}

} // namespace torusgabor

#endif
