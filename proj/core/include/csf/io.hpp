#pragma once

#include "csf/flow.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace csf {

// Line-delimited JSON: one header line, then one line per snapshot. Doubles round-trip bit for bit.
void write_trajectory(std::ostream& os, const FlowTrajectory& traj);
FlowTrajectory read_trajectory(std::istream& is);
void write_trajectory(const std::filesystem::path& path, const FlowTrajectory& traj);
FlowTrajectory read_trajectory(const std::filesystem::path& path);

// Report values rounded to 12 significant digits.
double round12(double v);

// Columns of equal length written as CSV at 12 significant digits.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
    void write_csv(std::ostream& os) const;
    void write_csv(const std::filesystem::path& path) const;
};

// Flat key-value configuration. Sections prefix their keys ("[run]" + "dt" -> "run.dt").
// Every key must be read before finish(), which rejects the rest.
class Config {
public:
    static Config parse(const std::string& text, const std::string& origin = "config");
    static Config load(const std::filesystem::path& path);

    // key=value, overriding or adding
    void set(const std::string& assignment);
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& def) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double def) const;
    double get_double(const std::string& key, double def, double lo, double hi) const;
    long get_int(const std::string& key, long def, long lo, long hi) const;
    bool get_bool(const std::string& key, bool def) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& def) const;
    std::vector<std::string> get_words(const std::string& key, const std::vector<std::string>& def) const;

    // throws Config error naming every key that was never read
    void finish() const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    const std::string* raw(const std::string& key) const;

    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> used_;
    std::string origin_;
};

} // namespace csf
