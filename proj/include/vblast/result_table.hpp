// SPDX-License-Identifier: Apache-2.0
#ifndef VBLAST_RESULT_TABLE_HPP
#define VBLAST_RESULT_TABLE_HPP

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace vblast {

// Rectangular numeric table with '#'-prefixed metadata lines, serialized as
// CSV with 9 significant digits.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_meta(const std::string &key, const std::string &value);
    void add_row(std::vector<double> row);
    void write_csv(std::ostream &os) const;
};

enum class SweepScale { Linear, Db, Log };

// Axis description "start:stop:points". Db sweeps are given and listed
// in dB; conversion to linear units happens at the point of use.
struct Sweep {
    double start = 0.0;
    double stop = 0.0;
    int points = 1;
    SweepScale scale = SweepScale::Linear;

    std::vector<double> values() const;
};

Sweep parse_sweep(const std::string &text, SweepScale scale);
SweepScale parse_scale(const std::string &name);

// Comma-separated integer list, e.g. "2,3".
std::vector<int> parse_int_list(const std::string &text);

// Plain key=value config file; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string &path);

std::string format_float(double value); // 9 significant digits

} // namespace vblast

#endif
