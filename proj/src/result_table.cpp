// SPDX-License-Identifier: Apache-2.0
#include "vblast/result_table.hpp"

#include "vblast/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vblast {

void ResultTable::add_meta(const std::string &key, const std::string &value) {
    metadata.emplace_back(key, value);
}

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw parameter_error("ResultTable: row width does not match header");
    rows.push_back(std::move(row));
}

std::string format_float(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

void ResultTable::write_csv(std::ostream &os) const {
    for (const auto &[key, value] : metadata)
        os << "# " << key << "=" << value << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c)
        os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (const auto &row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            os << format_float(row[c]) << (c + 1 < row.size() ? "," : "\n");
}

std::vector<double> Sweep::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        out.push_back(start);
        return out;
    }
    for (int i = 0; i < points; ++i) {
        double f = static_cast<double>(i) / (points - 1);
        if (scale == SweepScale::Log) {
            if (!(start > 0.0 && stop > 0.0))
                throw parameter_error("sweep: log scale requires positive endpoints");
            out.push_back(std::exp(std::log(start) + f * (std::log(stop) - std::log(start))));
        } else {
            out.push_back(start + f * (stop - start));
        }
    }
    return out;
}

Sweep parse_sweep(const std::string &text, SweepScale scale) {
    Sweep sweep;
    sweep.scale = scale;
    std::string part;
    std::vector<std::string> parts;
    std::istringstream is(text);
    while (std::getline(is, part, ':'))
        parts.push_back(part);
    try {
        if (parts.size() == 1) {
            sweep.start = sweep.stop = std::stod(parts[0]);
            sweep.points = 1;
            return sweep;
        }
        if (parts.size() != 3)
            throw parameter_error("sweep: expected start:stop:points, got '" + text + "'");
        sweep.start = std::stod(parts[0]);
        sweep.stop = std::stod(parts[1]);
        double pts = std::stod(parts[2]);
        sweep.points = static_cast<int>(pts);
        if (sweep.points < 1 || pts != sweep.points)
            throw parameter_error("sweep: points must be a positive integer");
    } catch (const std::invalid_argument &) {
        throw parameter_error("sweep: could not parse '" + text + "'");
    }
    return sweep;
}

SweepScale parse_scale(const std::string &name) {
    if (name == "linear")
        return SweepScale::Linear;
    if (name == "db")
        return SweepScale::Db;
    if (name == "log")
        return SweepScale::Log;
    throw parameter_error("scale: expected db|linear|log, got '" + name + "'");
}

std::vector<int> parse_int_list(const std::string &text) {
    std::vector<int> out;
    std::string part;
    std::istringstream is(text);
    while (std::getline(is, part, ',')) {
        try {
            out.push_back(std::stoi(part));
        } catch (const std::exception &) {
            throw parameter_error("expected comma-separated integers, got '" + text + "'");
        }
    }
    if (out.empty())
        throw parameter_error("expected a nonempty integer list");
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw parameter_error("config: cannot open '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!key.empty())
            out[key] = value;
    }
    return out;
}

} // namespace vblast
