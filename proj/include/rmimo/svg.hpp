// Minimal deterministic SVG line charts: one polyline per series,
// optional horizontal reference lines, legend, labeled axes. Output is a
// pure function of the inputs (fixed-precision coordinates, no
// timestamps), so identical inputs give byte-identical files.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmimo {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct ReferenceLine {
    std::string name;
    double y = 0.0;
};

struct PlotStyle {
    int width = 720;
    int height = 480;
    std::string x_label = "axis";
    std::string y_label = "rate [bits/s/Hz]";
    std::string title;
};

namespace detail {

inline std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

inline const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f6fb4", "#d1422f", "#2d8a4e", "#9055a2",
                                    "#c98018", "#4ea6a6", "#7d5b3c", "#5a5a5a"};
    return palette[i % (sizeof palette / sizeof palette[0])];
}

// Round axis bounds outward to one significant step so labels are tidy.
inline void nice_bounds(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
        return;
    }
    const double step = std::pow(10.0, std::floor(std::log10(hi - lo)) - 1.0);
    lo = std::floor(lo / step) * step;
    hi = std::ceil(hi / step) * step;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace detail

inline std::string render_chart(const std::vector<PlotSeries>& series,
                                const std::vector<ReferenceLine>& limits,
                                const PlotStyle& style) {
    if (series.empty()) throw std::invalid_argument("render_chart: no series");
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size() || s.x.empty())
            throw std::invalid_argument("render_chart: bad series '" + s.name + "'");
        for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
        for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    }
    for (const auto& l : limits) {
        ymin = std::min(ymin, l.y);
        ymax = std::max(ymax, l.y);
    }
    detail::nice_bounds(xmin, xmax);
    detail::nice_bounds(ymin, ymax);

    const double ml = 64, mr = 16, mt = style.title.empty() ? 16 : 40, mb = 48;
    const double pw = style.width - ml - mr, ph = style.height - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width
        << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width
        << ' ' << style.height << "\">\n";
    out << "<rect width=\"" << style.width << "\" height=\"" << style.height
        << "\" fill=\"white\"/>\n";
    if (!style.title.empty())
        out << "<text x=\"" << detail::coord(ml + pw / 2) << "\" y=\"24\" "
            << "text-anchor=\"middle\" font-size=\"15\">"
            << detail::xml_escape(style.title) << "</text>\n";

    // frame, grid, ticks
    out << "<rect x=\"" << detail::coord(ml) << "\" y=\"" << detail::coord(mt)
        << "\" width=\"" << detail::coord(pw) << "\" height=\"" << detail::coord(ph)
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / ticks;
        const double fy = ymin + (ymax - ymin) * i / ticks;
        out << "<line x1=\"" << detail::coord(px(fx)) << "\" y1=\""
            << detail::coord(mt) << "\" x2=\"" << detail::coord(px(fx)) << "\" y2=\""
            << detail::coord(mt + ph) << "\" stroke=\"#ddd\"/>\n";
        out << "<line x1=\"" << detail::coord(ml) << "\" y1=\""
            << detail::coord(py(fy)) << "\" x2=\"" << detail::coord(ml + pw)
            << "\" y2=\"" << detail::coord(py(fy)) << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << detail::coord(px(fx)) << "\" y=\""
            << detail::coord(mt + ph + 18) << "\" text-anchor=\"middle\" "
            << "font-size=\"11\">" << detail::tick_label(fx) << "</text>\n";
        out << "<text x=\"" << detail::coord(ml - 6) << "\" y=\""
            << detail::coord(py(fy) + 4) << "\" text-anchor=\"end\" "
            << "font-size=\"11\">" << detail::tick_label(fy) << "</text>\n";
    }
    out << "<text x=\"" << detail::coord(ml + pw / 2) << "\" y=\""
        << detail::coord(double(style.height) - 10) << "\" text-anchor=\"middle\" "
        << "font-size=\"12\">" << detail::xml_escape(style.x_label) << "</text>\n";
    out << "<text x=\"14\" y=\"" << detail::coord(mt + ph / 2)
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
        << detail::coord(mt + ph / 2) << ")\">" << detail::xml_escape(style.y_label)
        << "</text>\n";

    // horizontal reference lines (dashed <line>, not polylines)
    for (std::size_t i = 0; i < limits.size(); ++i) {
        out << "<line x1=\"" << detail::coord(ml) << "\" y1=\""
            << detail::coord(py(limits[i].y)) << "\" x2=\"" << detail::coord(ml + pw)
            << "\" y2=\"" << detail::coord(py(limits[i].y)) << "\" stroke=\""
            << detail::series_color(i) << "\" stroke-dasharray=\"6 4\"/>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        out << "<polyline fill=\"none\" stroke=\"" << detail::series_color(i)
            << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t j = 0; j < series[i].x.size(); ++j) {
            if (j) out << ' ';
            out << detail::coord(px(series[i].x[j])) << ','
                << detail::coord(py(series[i].y[j]));
        }
        out << "\"/>\n";
    }

    // legend
    double ly = mt + 14;
    for (std::size_t i = 0; i < series.size(); ++i, ly += 18) {
        out << "<line x1=\"" << detail::coord(ml + 10) << "\" y1=\""
            << detail::coord(ly - 4) << "\" x2=\"" << detail::coord(ml + 34)
            << "\" y2=\"" << detail::coord(ly - 4) << "\" stroke=\""
            << detail::series_color(i) << "\" stroke-width=\"1.6\"/>\n";
        out << "<text x=\"" << detail::coord(ml + 40) << "\" y=\""
            << detail::coord(ly) << "\" font-size=\"11\">"
            << detail::xml_escape(series[i].name) << "</text>\n";
    }
    for (std::size_t i = 0; i < limits.size(); ++i, ly += 18) {
        out << "<line x1=\"" << detail::coord(ml + 10) << "\" y1=\""
            << detail::coord(ly - 4) << "\" x2=\"" << detail::coord(ml + 34)
            << "\" y2=\"" << detail::coord(ly - 4) << "\" stroke=\""
            << detail::series_color(i) << "\" stroke-dasharray=\"6 4\"/>\n";
        out << "<text x=\"" << detail::coord(ml + 40) << "\" y=\""
            << detail::coord(ly) << "\" font-size=\"11\">"
            << detail::xml_escape(limits[i].name) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace rmimo
