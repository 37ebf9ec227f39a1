#pragma once

#include <string>
#include <vector>

namespace mracsim {

/// Minimal self-contained SVG 1.1 line chart: axes with tick labels, series
/// polylines, dashed horizontal reference lines and a legend. No external
/// plotting dependency; output is deterministic for identical inputs.
class LineChart {
public:
    LineChart(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(const std::string& label, const std::string& color,
                    std::vector<double> xs, std::vector<double> ys, bool dashed = false);
    void add_hline(double y, const std::string& label, const std::string& color);

    std::string render() const;
    void write(const std::string& path) const;

private:
    struct Series {
        std::string label;
        std::string color;
        std::vector<double> xs;
        std::vector<double> ys;
        bool dashed = false;
    };
    struct HLine {
        double y = 0.0;
        std::string label;
        std::string color;
    };

    std::string title_;
    std::string x_label_;
    std::string y_label_;
    std::vector<Series> series_;
    std::vector<HLine> hlines_;
};

} // namespace mracsim
