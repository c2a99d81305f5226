#pragma once

// UTF-8 CSV serialization of term structures and default curves, and the
// flat key=value text format used by the CLI config and fit outputs.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "killdiff/model.hpp"

namespace killdiff {

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("csv: malformed number '" + s + "' at line " +
                                 std::to_string(line_no));
    }
}

}  // namespace detail

inline void write_term_structure(std::ostream& os, const TermStructure& ts) {
    os << "tenor_years,pd,survival,cum_hazard,hazard,intensity";
    if (ts.stderr_pd) os << ",stderr";
    os << "\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        os << detail::format_double(ts.tenors[i]) << ','
           << detail::format_double(ts.pd[i]) << ','
           << detail::format_double(ts.survival[i]) << ','
           << detail::format_double(ts.cum_hazard[i]) << ','
           << detail::format_double(ts.hazard[i]) << ','
           << detail::format_double(ts.intensity[i]);
        if (ts.stderr_pd) os << ',' << detail::format_double((*ts.stderr_pd)[i]);
        os << "\n";
    }
}

// Reads a term-structure CSV. A minimal file with only tenor_years,pd is
// accepted; the derived columns are then rebuilt with curve_from_pd.
inline TermStructure read_term_structure(std::istream& is) {
    std::string line;
    int line_no = 0;
    std::vector<std::string> header;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        header = detail::split_csv_line(line);
        break;
    }
    if (header.size() < 2 || header[0] != "tenor_years" || header[1] != "pd")
        throw std::runtime_error("csv: expected header starting with tenor_years,pd at line " +
                                 std::to_string(line_no));

    std::vector<std::vector<double>> cols(header.size());
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != header.size())
            throw std::runtime_error("csv: wrong field count at line " + std::to_string(line_no));
        for (std::size_t i = 0; i < f.size(); ++i)
            cols[i].push_back(detail::parse_double(f[i], line_no));
    }
    if (cols[0].empty()) throw std::runtime_error("csv: no data rows");

    if (header.size() == 2) return curve_from_pd(cols[0], cols[1]);

    TermStructure ts;
    ts.tenors = cols[0];
    ts.pd = cols[1];
    for (std::size_t i = 2; i < header.size(); ++i) {
        if (header[i] == "survival") ts.survival = cols[i];
        else if (header[i] == "cum_hazard") ts.cum_hazard = cols[i];
        else if (header[i] == "hazard") ts.hazard = cols[i];
        else if (header[i] == "intensity") ts.intensity = cols[i];
        else if (header[i] == "stderr") ts.stderr_pd = cols[i];
        else throw std::runtime_error("csv: unknown column '" + header[i] + "'");
    }
    return ts;
}

inline void write_default_curve(std::ostream& os, const DefaultCurve& c) {
    if (!c.label.empty()) os << "# label: " << c.label << "\n";
    os << "tenor_years,pd\n";
    for (const auto& [t, p] : c.points)
        os << detail::format_double(t) << ',' << detail::format_double(p) << "\n";
}

inline DefaultCurve read_default_curve(std::istream& is, std::string fallback_label = "") {
    DefaultCurve c;
    c.label = std::move(fallback_label);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.rfind("# label:", 0) == 0) {
            std::string lbl = line.substr(8);
            while (!lbl.empty() && lbl.front() == ' ') lbl.erase(lbl.begin());
            c.label = lbl;
            continue;
        }
        if (line[0] == '#') continue;
        auto f = detail::split_csv_line(line);
        if (!have_header) {
            if (f.size() < 2 || f[0] != "tenor_years" || f[1] != "pd")
                throw std::runtime_error("csv: expected tenor_years,pd header at line " +
                                         std::to_string(line_no));
            have_header = true;
            continue;
        }
        if (f.size() < 2)
            throw std::runtime_error("csv: wrong field count at line " + std::to_string(line_no));
        c.points.emplace_back(detail::parse_double(f[0], line_no),
                              detail::parse_double(f[1], line_no));
    }
    if (!have_header || c.points.empty())
        throw std::runtime_error("csv: no data rows");
    c.validate();
    return c;
}

// Flat key=value block. Order-preserving writer, '#' comments skipped.
inline void write_key_values(std::ostream& os,
                             const std::vector<std::pair<std::string, double>>& kv) {
    for (const auto& [k, v] : kv) os << k << '=' << detail::format_double(v) << "\n";
}

inline std::vector<std::pair<std::string, double>> read_key_values(std::istream& is) {
    std::vector<std::pair<std::string, double>> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: missing '=' at line " + std::to_string(line_no));
        kv.emplace_back(line.substr(0, eq), detail::parse_double(line.substr(eq + 1), line_no));
    }
    return kv;
}

}  // namespace killdiff
