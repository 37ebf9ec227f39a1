#include "mracsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mracsim {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

/// Round tick step: 1/2/5 times a power of ten covering span/target ticks.
double tick_step(double span, int target) {
    if (span <= 0.0) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) return mag * mult;
    }
    return mag * 10.0;
}

} // namespace

void LineChart::add_series(const std::string& label, const std::string& color,
                           std::vector<double> xs, std::vector<double> ys, bool dashed) {
    if (xs.size() != ys.size()) throw std::invalid_argument("LineChart: xs/ys size mismatch");
    series_.push_back({label, color, std::move(xs), std::move(ys), dashed});
}

void LineChart::add_hline(double y, const std::string& label, const std::string& color) {
    hlines_.push_back({y, label, color});
}

std::string LineChart::render() const {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const Series& s : series_) {
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            if (first) {
                x_min = x_max = s.xs[i];
                y_min = y_max = s.ys[i];
                first = false;
            } else {
                x_min = std::min(x_min, s.xs[i]);
                x_max = std::max(x_max, s.xs[i]);
                y_min = std::min(y_min, s.ys[i]);
                y_max = std::max(y_max, s.ys[i]);
            }
        }
    }
    for (const HLine& h : hlines_) {
        if (!std::isfinite(h.y)) continue;
        y_min = std::min(y_min, h.y);
        y_max = std::max(y_max, h.y);
    }
    if (x_max - x_min < 1e-12) x_max = x_min + 1.0;
    if (y_max - y_min < 1e-12) y_max = y_min + 1.0;
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double y) { return kTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth)
        << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << " "
        << num(kHeight) << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(title_) << "</text>\n";

    // axes box
    svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
        << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs_step = tick_step(x_max - x_min, 8);
    for (double xt = std::ceil(x_min / xs_step) * xs_step; xt <= x_max + 1e-9 * xs_step;
         xt += xs_step) {
        svg << "<line x1=\"" << num(sx(xt)) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
            << num(sx(xt)) << "\" y2=\"" << num(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(sx(xt)) << "\" y=\"" << num(kTop + plot_h + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(xt)
            << "</text>\n";
    }
    const double ys_step = tick_step(y_max - y_min, 6);
    for (double yt = std::ceil(y_min / ys_step) * ys_step; yt <= y_max + 1e-9 * ys_step;
         yt += ys_step) {
        svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(sy(yt)) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(sy(yt)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(yt) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(yt)
            << "</text>\n";
        svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(sy(yt)) << "\" x2=\""
            << num(kLeft + plot_w) << "\" y2=\"" << num(sy(yt))
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    }

    svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 14)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape_xml(x_label_) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << num(kTop + plot_h / 2) << ")\">"
        << escape_xml(y_label_) << "</text>\n";

    for (const HLine& h : hlines_) {
        if (h.y < y_min || h.y > y_max) continue;
        svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(sy(h.y)) << "\" x2=\""
            << num(kLeft + plot_w) << "\" y2=\"" << num(sy(h.y)) << "\" stroke=\"" << h.color
            << "\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << num(kLeft + plot_w - 4) << "\" y=\"" << num(sy(h.y) - 5)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
            << h.color << "\">" << escape_xml(h.label) << "</text>\n";
    }

    for (const Series& s : series_) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) svg << " stroke-dasharray=\"4 3\"";
        svg << " points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            const double cy = std::clamp(s.ys[i], y_min, y_max);
            svg << num(sx(s.xs[i])) << "," << num(sy(cy)) << " ";
        }
        svg << "\"/>\n";
    }

    // legend, top-right inside the axes box
    double ly = kTop + 16.0;
    for (const Series& s : series_) {
        const double lx = kLeft + plot_w - 190.0;
        svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 26)
            << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
        if (s.dashed) svg << " stroke-dasharray=\"4 3\"";
        svg << "/>\n";
        svg << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(s.label)
            << "</text>\n";
        ly += 16.0;
    }

    svg << "</svg>\n";
    return svg.str();
}

void LineChart::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write SVG file '" + path + "'");
    out << render();
}

} // namespace mracsim
