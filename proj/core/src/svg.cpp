#include "csf/svg.hpp"

#include "csf/error.hpp"
#include "csf/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace csf {

namespace {

constexpr double kLeft = 90, kRight = 30, kTop = 50, kBottom = 70;

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel, bool logy)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)), logy_(logy)
{
}

void SvgPlot::add_line(std::vector<double> x, std::vector<double> y, std::string color, std::string label, bool dashed)
{
    require(x.size() == y.size(), ErrorKind::InvalidInput, "SvgPlot: x and y differ in length");
    series_.push_back({std::move(x), std::move(y), std::move(color), std::move(label), dashed, false});
}

void SvgPlot::add_points(std::vector<double> x, std::vector<double> y, std::string color, std::string label)
{
    require(x.size() == y.size(), ErrorKind::InvalidInput, "SvgPlot: x and y differ in length");
    series_.push_back({std::move(x), std::move(y), std::move(color), std::move(label), false, true});
}

std::string SvgPlot::render() const
{
    auto yv = [&](double y) { return logy_ ? std::log10(y) : y; };
    auto usable = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!logy_ || y > 0); };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series_)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, yv(s.y[i]));
            y1 = std::max(y1, yv(s.y[i]));
        }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double py = 0.05 * (y1 - y0);
    y0 -= py;
    y1 += py;
    const double pw = width - kLeft - kRight, ph = height - kTop - kBottom;
    auto X = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto Y = [&](double y) { return kTop + (1.0 - (yv(y) - y0) / (y1 - y0)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
      << width << ' ' << height << "\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << width / 2 << "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
      << escape(title_) << "</text>\n";
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << height - 20
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << escape(xlabel_) << "</text>\n";
    o << "<text x=\"20\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
      << "transform=\"rotate(-90 20 " << kTop + ph / 2 << ")\">" << escape(ylabel_) << "</text>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = x0 + (x1 - x0) * k / 5.0, yt = y0 + (y1 - y0) * k / 5.0;
        const double px = kLeft + pw * k / 5.0, pyy = kTop + ph * (1.0 - k / 5.0);
        o << "<text x=\"" << fmt12(px) << "\" y=\"" << kTop + ph + 20
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << tick_label(xv) << "</text>\n";
        o << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt12(pyy + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
          << (logy_ ? "1e" + tick_label(yt) : tick_label(yt)) << "</text>\n";
    }
    o << "<clipPath id=\"plot\"><rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";
    for (const auto& s : series_) {
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (usable(s.x[i], s.y[i]))
                    o << "<circle cx=\"" << fmt12(X(s.x[i])) << "\" cy=\"" << fmt12(Y(s.y[i])) << "\" r=\"3\" fill=\""
                      << escape(s.color) << "\"/>\n";
            continue;
        }
        std::string d;
        bool pen = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) {
                pen = false;
                continue;
            }
            d += (pen ? " L" : (d.empty() ? "M" : " M")) + fmt12(X(s.x[i])) + " " + fmt12(Y(s.y[i]));
            pen = true;
        }
        if (d.empty()) continue;
        o << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"1.5\""
          << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    }
    o << "</g>\n";
    double ly = kTop + 20;
    for (const auto& s : series_) {
        if (s.label.empty()) continue;
        o << "<line x1=\"" << kLeft + pw - 200 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + pw - 170 << "\" y2=\""
          << ly - 4 << "\" stroke=\"" << escape(s.color) << "\" stroke-width=\"2\""
          << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        o << "<text x=\"" << kLeft + pw - 162 << "\" y=\"" << ly
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
        ly += 18;
    }
    o << "</svg>\n";
    return o.str();
}

void SvgPlot::write(const std::filesystem::path& path) const
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::Io, "cannot write " + path.string());
    os << render();
}

} // namespace csf
