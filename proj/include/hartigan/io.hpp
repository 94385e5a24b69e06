#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hartigan/errors.hpp"
#include "hartigan/gadget.hpp"
#include "hartigan/local_search.hpp"
#include "hartigan/point_set.hpp"
#include "hartigan/smoothed.hpp"

namespace hartigan {

enum class PointFormat { Csv, Json };

namespace io_detail {

inline std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline bool numeric_like(const std::string& field) {
    if (field.empty()) return false;
    char c = field[0];
    return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
}

}  // namespace io_detail

/// Parse a point set. CSV: one point per row, d numeric columns, optional
/// header row. JSON: array of arrays; numbers, or quoted literals for exact
/// parsing. Errors carry 1-based line/column (CSV) diagnostics.
template <class S>
inline PointSet<S> parse_points(std::istream& in, PointFormat format) {
    if (format == PointFormat::Json) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(0, 0, std::string("JSON parse error: ") + e.what());
        }
        if (!doc.is_array() || doc.empty())
            throw ParseError(0, 0, "JSON input must be a nonempty array of arrays");
        std::optional<PointSet<S>> ps;
        for (std::size_t r = 0; r < doc.size(); ++r) {
            const auto& row = doc[r];
            if (!row.is_array() || row.empty())
                throw ParseError(r + 1, 0, "JSON row " + std::to_string(r + 1) + " is not a nonempty array");
            std::vector<S> coords;
            for (std::size_t c = 0; c < row.size(); ++c) {
                const auto& cell = row[c];
                if (cell.is_string())
                    coords.push_back(scalar_traits<S>::parse(cell.template get<std::string>()));
                else if (cell.is_number_integer())
                    coords.push_back(scalar_traits<S>::from_int(cell.template get<long>()));
                else if (cell.is_number())
                    coords.push_back(scalar_traits<S>::parse(scalar_traits<double>::str(cell.template get<double>())));
                else
                    throw ParseError(r + 1, c + 1, "JSON cell is not numeric");
            }
            if (!ps) ps.emplace(static_cast<int>(coords.size()));
            if (static_cast<int>(coords.size()) != ps->dim())
                throw ParseError(r + 1, 0,
                                 "ragged JSON row " + std::to_string(r + 1) + ": expected " +
                                     std::to_string(ps->dim()) + " columns, got " +
                                     std::to_string(coords.size()));
            ps->add_point(coords);
        }
        return *ps;
    }

    // CSV
    std::optional<PointSet<S>> ps;
    std::string line;
    std::size_t lineno = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = io_detail::trim(line);
        if (trimmed.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(trimmed);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(io_detail::trim(field));
        if (trimmed.back() == ',') fields.push_back("");

        if (first_data_line && !io_detail::numeric_like(fields[0])) continue;  // header row
        first_data_line = false;

        std::vector<S> coords;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (fields[c].empty())
                throw ParseError(lineno, c + 1,
                                 "line " + std::to_string(lineno) + ", column " + std::to_string(c + 1) +
                                     ": empty field");
            try {
                coords.push_back(scalar_traits<S>::parse(fields[c]));
            } catch (const ParseError&) {
                throw ParseError(lineno, c + 1,
                                 "line " + std::to_string(lineno) + ", column " + std::to_string(c + 1) +
                                     ": not numeric: '" + fields[c] + "'");
            }
        }
        if (!ps) ps.emplace(static_cast<int>(coords.size()));
        if (static_cast<int>(coords.size()) != ps->dim())
            throw ParseError(lineno, 0,
                             "ragged row at line " + std::to_string(lineno) + ": expected " +
                                 std::to_string(ps->dim()) + " columns, got " +
                                 std::to_string(coords.size()));
        ps->add_point(coords);
    }
    if (!ps) throw ParseError(0, 0, "empty input: no points");
    return *ps;
}

template <class S>
inline PointSet<S> parse_points_file(const std::string& path, PointFormat format) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, 0, "cannot open '" + path + "'");
    return parse_points<S>(in, format);
}

/// Exact scalars serialize as "num/den" (or "n") so they round-trip exactly.
template <class S>
inline void write_points_csv(std::ostream& out, const PointSet<S>& ps) {
    for (int p = 0; p < ps.size(); ++p) {
        for (int c = 0; c < ps.dim(); ++c) {
            if (c) out << ',';
            out << scalar_traits<S>::str(ps.at(p, c));
        }
        out << '\n';
    }
}

/// One JSON record per move. Exact gains appear as num/den strings; float
/// gains as shortest round-trip decimals.
template <class S>
inline void write_trace_jsonl(std::ostream& out, const Trace<S>& trace,
                              const std::vector<std::string>* labels = nullptr) {
    for (std::size_t i = 0; i < trace.moves.size(); ++i) {
        const auto& mv = trace.moves[i];
        nlohmann::ordered_json rec;
        rec["index"] = i;
        rec["point_id"] = mv.point;
        if (labels) rec["role"] = (*labels)[mv.point];
        rec["src"] = mv.src;
        rec["dst"] = mv.dst;
        if constexpr (scalar_traits<S>::exact) {
            rec["gain_num"] = mv.gain.num_str();
            rec["gain_den"] = mv.gain.den_str();
        } else {
            rec["gain"] = mv.gain;
        }
        out << rec.dump() << '\n';
    }
}

template <class S>
inline nlohmann::ordered_json trace_summary_json(const Trace<S>& trace) {
    nlohmann::ordered_json j;
    j["iterations"] = trace.iterations;
    j["terminated"] = to_string(trace.terminated);
    if constexpr (scalar_traits<S>::exact) {
        j["initial_potential"] = trace.initial_potential.str();
        j["final_potential"] = trace.final_potential.str();
    } else {
        j["initial_potential"] = trace.initial_potential;
        j["final_potential"] = trace.final_potential;
    }
    return j;
}

inline nlohmann::ordered_json verification_report_json(const GadgetInstance& inst,
                                                       const VerificationReport& report) {
    nlohmann::ordered_json j;
    j["m"] = inst.m;
    j["n"] = inst.points.size();
    j["k"] = inst.k;
    j["moves"] = report.total_moves();
    j["min_gain"] = report.min_gain.str();
    j["min_gain_decimal"] = report.min_gain.to_double();
    j["initial_potential"] = report.trace.initial_potential.str();
    j["final_potential"] = report.trace.final_potential.str();
    j["final_is_hw_local_opt"] = report.final_is_hw_local_opt;
    return j;
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "sigma,trial,seed,iterations,initial_potential,final_potential,terminated,wall_time_ms\n";
    for (const auto& r : result.rows) {
        out << scalar_traits<double>::str(r.sigma) << ',' << r.trial << ',' << r.seed << ','
            << r.iterations << ',' << scalar_traits<double>::str(r.initial_potential) << ','
            << scalar_traits<double>::str(r.final_potential) << ',' << to_string(r.terminated)
            << ',' << scalar_traits<double>::str(r.wall_time_ms) << '\n';
    }
}

}  // namespace hartigan
