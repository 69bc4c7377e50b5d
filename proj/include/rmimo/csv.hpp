// Sweep results as comma-separated tables: '#' metadata comments, one
// header row, 12-significant-digit numbers for bit-reproducibility.
#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmimo/montecarlo.hpp"

namespace rmimo {

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline const char* kCsvHeader =
    "axis_value,analytic_sinr,rate_lower,rate_upper,limit_rate,"
    "mc_mean,mc_ci,trials,seed";

// `display_axis` lets dB-valued axes keep their dB grid in the table
// while the engine ran in linear units; pass the empty vector otherwise.
inline std::string render_csv(const std::vector<SweepRow>& rows,
                              const std::string& config_text,
                              std::uint64_t master_seed,
                              const std::vector<double>& display_axis = {}) {
    if (!display_axis.empty() && display_axis.size() != rows.size())
        throw std::invalid_argument("render_csv: display axis length mismatch");
    std::ostringstream out;
    out << "# seed = " << master_seed << "\n";
    out << "# config-begin\n";
    std::istringstream cfg(config_text);
    std::string line;
    while (std::getline(cfg, line)) out << "# " << line << "\n";
    out << "# config-end\n";
    out << kCsvHeader << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& r = rows[i];
        const double axis = display_axis.empty() ? r.axis_value : display_axis[i];
        out << format_number(axis) << ',' << format_number(r.analytic.statistical_sinr)
            << ',' << format_number(r.analytic.rate_lower) << ','
            << format_number(r.analytic.rate_upper) << ','
            << format_number(r.analytic.limit_rate) << ','
            << format_number(r.mc.mean) << ',' << format_number(r.mc.ci_halfwidth)
            << ',' << r.mc.trials << ',' << r.mc.master_seed << "\n";
    }
    return out.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << bytes;
    if (!out) throw std::runtime_error("write failed: " + path);
}

struct CsvTable {
    std::vector<std::string> comments;       // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;   // row-major

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw std::runtime_error("csv: missing column '" + name + "'");
    }
    std::vector<double> column_values(const std::string& name) const {
        const int c = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

inline CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string c = line.substr(1);
            if (!c.empty() && c.front() == ' ') c.erase(0, 1);
            table.comments.push_back(c);
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (table.header.empty()) {
            table.header = cells;
            continue;
        }
        if (cells.size() != table.header.size())
            throw std::runtime_error("csv line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(table.header.size()) +
                                     " cells, got " + std::to_string(cells.size()));
        std::vector<double> vals(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            try {
                std::size_t used = 0;
                vals[i] = std::stod(cells[i], &used);
                if (used != cells[i].size()) throw std::invalid_argument(cells[i]);
            } catch (const std::exception&) {
                throw std::runtime_error("csv line " + std::to_string(line_no) +
                                         ": bad number '" + cells[i] + "'");
            }
        }
        table.rows.push_back(std::move(vals));
    }
    if (table.header.empty()) throw std::runtime_error("csv: no header row");
    return table;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace rmimo
