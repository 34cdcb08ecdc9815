#include "csf/io.hpp"

#include "csf/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace csf {

namespace {

using json = nlohmann::json;

constexpr const char* kFormat = "csf-trajectory";
constexpr int kVersion = 1;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

void check_finite(double v, const char* what)
{
    require(std::isfinite(v), ErrorKind::Io, std::string("write_trajectory: non-finite ") + what);
}

} // namespace

// ---------------------------------------------------------------- trajectories

void write_trajectory(std::ostream& os, const FlowTrajectory& traj)
{
    os << json{{"format", kFormat}, {"version", kVersion}, {"snapshots", traj.size()}}.dump() << '\n';
    for (const auto& s : traj.snapshots) {
        check_finite(s.t, "time");
        check_finite(s.dt, "step");
        json::array_t x, y;
        x.reserve(s.curve.size());
        y.reserve(s.curve.size());
        for (const auto& p : s.curve.points()) {
            check_finite(p.x, "coordinate");
            check_finite(p.y, "coordinate");
            x.emplace_back(p.x);
            y.emplace_back(p.y);
        }
        json line{{"t", s.t},
                  {"dt", s.dt},
                  {"scheme", to_string(s.scheme)},
                  {"topology", s.curve.closed() ? "closed" : "open"},
                  {"embedded", s.curve.embedded()},
                  {"x", std::move(x)},
                  {"y", std::move(y)}};
        os << line.dump() << '\n';
    }
    require(static_cast<bool>(os), ErrorKind::Io, "write_trajectory: stream failure");
}

FlowTrajectory read_trajectory(std::istream& is)
{
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), ErrorKind::Io, "read_trajectory: empty input");
    std::size_t expected = 0;
    try {
        const json h = json::parse(line);
        require(h.value("format", "") == kFormat, ErrorKind::Io, "read_trajectory: not a trajectory file");
        require(h.value("version", 0) == kVersion, ErrorKind::Io, "read_trajectory: unsupported version");
        expected = h.at("snapshots").get<std::size_t>();
    } catch (const json::exception& e) {
        fail(ErrorKind::Io, std::string("read_trajectory: bad header: ") + e.what());
    }
    FlowTrajectory traj;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            const json j = json::parse(line);
            const auto& x = j.at("x");
            const auto& y = j.at("y");
            require(x.size() == y.size(), ErrorKind::Io, "read_trajectory: coordinate arrays differ in length");
            std::vector<Vec2> pts(x.size());
            for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {x[i].get<double>(), y[i].get<double>()};
            const std::string topo = j.at("topology").get<std::string>();
            require(topo == "open" || topo == "closed", ErrorKind::Io, "read_trajectory: unknown topology '" + topo + "'");
            FlowSnapshot s{j.at("t").get<double>(),
                           PlanarCurve(std::move(pts), topo == "closed" ? Topology::Closed : Topology::Open,
                                       j.value("embedded", false)),
                           scheme_from_string(j.value("scheme", "semi-implicit")), j.value("dt", 0.0)};
            traj.append(std::move(s));
        } catch (const json::exception& e) {
            fail(ErrorKind::Io, "read_trajectory: line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    require(traj.size() == expected, ErrorKind::Io,
            "read_trajectory: header announces " + std::to_string(expected) + " snapshots, found " + std::to_string(traj.size()));
    return traj;
}

void write_trajectory(const std::filesystem::path& path, const FlowTrajectory& traj)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::Io, "cannot write " + path.string());
    write_trajectory(os, traj);
}

FlowTrajectory read_trajectory(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), ErrorKind::Io, "cannot read " + path.string());
    return read_trajectory(is);
}

// ---------------------------------------------------------------- tables

double round12(double v) { return std::isfinite(v) ? parse_double(fmt12(v)) : v; }

void Table::add_row(std::vector<double> row)
{
    require(row.size() == columns.size(), ErrorKind::InvalidInput, "Table: row width differs from the header");
    rows.push_back(std::move(row));
}

void Table::write_csv(std::ostream& os) const
{
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << fmt12(r[c]);
        os << '\n';
    }
}

void Table::write_csv(const std::filesystem::path& path) const
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::Io, "cannot write " + path.string());
    write_csv(os);
}

// ---------------------------------------------------------------- config

Config Config::parse(const std::string& text, const std::string& origin)
{
    Config c;
    c.origin_ = origin;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            require(line.back() == ']' && line.size() > 2, ErrorKind::Config, where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos, ErrorKind::Config, where + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        require(!key.empty(), ErrorKind::Config, where + ": empty key");
        if (!section.empty()) key = section + "." + key;
        require(!c.values_.count(key), ErrorKind::Config, where + ": duplicate key '" + key + "'");
        c.values_[key] = trim(line.substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::Config, "cannot read config " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path.string());
}

void Config::set(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    require(eq != std::string::npos && eq > 0, ErrorKind::Config, "override '" + assignment + "' is not key=value");
    values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

const std::string* Config::raw(const std::string& key) const
{
    used_[key] = true;
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

std::string Config::get_string(const std::string& key, const std::string& def) const
{
    const auto* v = raw(key);
    return v ? *v : def;
}

std::string Config::require_string(const std::string& key) const
{
    const auto* v = raw(key);
    require(v && !v->empty(), ErrorKind::Config, origin_ + ": missing required key '" + key + "'");
    return *v;
}

double Config::get_double(const std::string& key, double def) const
{
    const auto* v = raw(key);
    if (!v) return def;
    try {
        return parse_double(*v);
    } catch (const Error&) {
        fail(ErrorKind::Config, origin_ + ": key '" + key + "' expects a number, got '" + *v + "'");
    }
}

double Config::get_double(const std::string& key, double def, double lo, double hi) const
{
    const double v = get_double(key, def);
    require(v >= lo && v <= hi, ErrorKind::Config,
            origin_ + ": key '" + key + "' = " + fmt12(v) + " outside [" + fmt12(lo) + ", " + fmt12(hi) + "]");
    return v;
}

long Config::get_int(const std::string& key, long def, long lo, long hi) const
{
    const auto* v = raw(key);
    long out = def;
    if (v) {
        std::size_t pos = 0;
        try {
            out = std::stol(*v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        require(pos == v->size() && !v->empty(), ErrorKind::Config,
                origin_ + ": key '" + key + "' expects an integer, got '" + *v + "'");
    }
    require(out >= lo && out <= hi, ErrorKind::Config,
            origin_ + ": key '" + key + "' = " + std::to_string(out) + " outside [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]");
    return out;
}

bool Config::get_bool(const std::string& key, bool def) const
{
    const auto* v = raw(key);
    if (!v) return def;
    if (*v == "true" || *v == "yes" || *v == "1" || *v == "on") return true;
    if (*v == "false" || *v == "no" || *v == "0" || *v == "off") return false;
    fail(ErrorKind::Config, origin_ + ": key '" + key + "' expects a boolean, got '" + *v + "'");
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& def) const
{
    const auto* v = raw(key);
    if (!v) return def;
    std::vector<double> out;
    if (trim(*v).empty()) return out;
    for (const auto& w : split(*v, ',')) {
        try {
            out.push_back(parse_double(w));
        } catch (const Error&) {
            fail(ErrorKind::Config, origin_ + ": key '" + key + "' expects a comma separated list of numbers");
        }
    }
    return out;
}

std::vector<std::string> Config::get_words(const std::string& key, const std::vector<std::string>& def) const
{
    const auto* v = raw(key);
    if (!v) return def;
    std::vector<std::string> out;
    for (auto& w : split(*v, ','))
        if (!w.empty()) out.push_back(w);
    return out;
}

void Config::finish() const
{
    std::string unknown;
    for (const auto& [k, v] : values_)
        if (!used_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
    require(unknown.empty(), ErrorKind::Config, origin_ + ": unknown key(s): " + unknown);
}

} // namespace csf
