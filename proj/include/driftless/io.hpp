#pragma once

/**
 * @file io.hpp
 * @brief Trajectory serialization.
 *
 * CSV: header `t,x_c,y_c,theta,energy` (generic n != 3 systems use q0..q{n-1}),
 * one row per sample, every value printed with 17 significant digits.
 * JSON: {"columns": [...], "data": [[...], ...], "metadata": {...}}.
 */

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "driftless/closedform.hpp"
#include "driftless/core.hpp"
#include "driftless/errors.hpp"
#include "driftless/simulate.hpp"

namespace driftless::io {

inline constexpr const char* kToolVersion = "0.1.0";

class IoError : public Error {
public:
    using Error::Error;
};

inline std::vector<std::string> column_names(std::size_t state_dim) {
    std::vector<std::string> cols{"t"};
    if (state_dim == 3) {
        cols.insert(cols.end(), {"x_c", "y_c", "theta"});
    } else {
        for (std::size_t i = 0; i < state_dim; ++i) {
            cols.push_back("q" + std::to_string(i));
        }
    }
    cols.emplace_back("energy");
    return cols;
}

/// %.17g: enough digits to reproduce every double exactly.
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const Trajectory& traj) {
    const std::size_t n = traj.empty() ? 3 : static_cast<std::size_t>(traj.states.front().size());
    const auto cols = column_names(n);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        os << (i ? "," : "") << cols[i];
    }
    os << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << format_real(traj.times[i]);
        for (Eigen::Index j = 0; j < traj.states[i].size(); ++j) {
            os << ',' << format_real(traj.states[i](j));
        }
        os << ',' << format_real(traj.energy[i]) << '\n';
    }
}

inline std::string to_csv(const Trajectory& traj) {
    std::ostringstream os;
    write_csv(os, traj);
    return os.str();
}

inline Trajectory read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw IoError("empty CSV input");
    }
    std::size_t columns = 1;
    for (char c : line) {
        columns += c == ',';
    }
    if (columns < 3) {
        throw IoError("CSV header needs t, state columns and energy");
    }
    const std::size_t n = columns - 2;
    Trajectory traj;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<double> values;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(cell, &used));
                if (used != cell.size()) {
                    throw std::invalid_argument(cell);
                }
            } catch (const std::exception&) {
                throw IoError("CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        if (values.size() != columns) {
            throw IoError("CSV line " + std::to_string(line_no) + ": expected " +
                          std::to_string(columns) + " columns");
        }
        StateVector q(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j) {
            q(static_cast<Eigen::Index>(j)) = values[1 + j];
        }
        traj.push(values.front(), std::move(q), values.back());
    }
    return traj;
}

inline nlohmann::ordered_json to_json(const Trajectory& traj,
                                      const nlohmann::ordered_json& metadata = nlohmann::ordered_json::object()) {
    const std::size_t n = traj.empty() ? 3 : static_cast<std::size_t>(traj.states.front().size());
    nlohmann::ordered_json j;
    j["columns"] = column_names(n);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        row.push_back(traj.times[i]);
        for (Eigen::Index k = 0; k < traj.states[i].size(); ++k) {
            row.push_back(traj.states[i](k));
        }
        row.push_back(traj.energy[i]);
        rows.push_back(std::move(row));
    }
    j["data"] = std::move(rows);
    nlohmann::ordered_json meta = metadata;
    meta["tool_version"] = kToolVersion;
    j["metadata"] = std::move(meta);
    return j;
}

/// Writes through a sibling temporary file and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(parent, ec);
    const fs::path tmp = parent / ("." + path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw IoError("write to " + tmp.string() + " failed");
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into " + path.string());
    }
}

/**
 * Samples a closed-form solution on `times` in the trajectory schema. The
 * energy column is the identity  (rho/2)(||q(t)||^2 - ||q(0)||^2), which
 * equals  int ||qdot||^2  along the exact trajectory.
 */
inline Trajectory closed_form_trajectory(const ClosedFormSolution& sol,
                                         const std::vector<double>& times) {
    Trajectory traj;
    const ClosedFormPoint start = eval(sol, 0.0);
    const StateVector q0 = Vector3(start.X(0), start.X(1), start.theta);
    for (const double t : times) {
        const ClosedFormPoint p = eval(sol, t);
        StateVector q = Vector3(p.X(0), p.X(1), p.theta);
        const double e = energy_identity(sol.rho, q0, q);
        traj.push(t, std::move(q), e);
    }
    return traj;
}

}  // namespace driftless::io
