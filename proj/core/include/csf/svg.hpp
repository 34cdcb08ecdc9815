#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace csf {

// Line plot on a fixed 1024x768 canvas. Output depends only on the inputs.
class SvgPlot {
public:
    static constexpr int width = 1024;
    static constexpr int height = 768;

    SvgPlot(std::string title, std::string xlabel, std::string ylabel, bool logy = false);

    void add_line(std::vector<double> x, std::vector<double> y, std::string color, std::string label, bool dashed = false);
    void add_points(std::vector<double> x, std::vector<double> y, std::string color, std::string label);

    std::string render() const;
    void write(const std::filesystem::path& path) const;

private:
    struct Series {
        std::vector<double> x, y;
        std::string color, label;
        bool dashed = false;
        bool markers = false;
    };
    std::string title_, xlabel_, ylabel_;
    bool logy_;
    std::vector<Series> series_;
};

} // namespace csf
