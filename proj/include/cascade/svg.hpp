#pragma once

// Self-contained SVG line/point plots with error bars. No rendering
// dependency; output is byte-deterministic for fixed input.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cascade/csv.hpp" // format_double, write_file
#include "cascade/errors.hpp"

namespace cascade {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> yerr; // empty or same length as y
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::optional<double> y_min;
    std::optional<double> y_max;
    int width = 760;
    int height = 520;
};

namespace detail {

inline std::string svg_num(double v) {
    // fixed 2-decimal pixel coordinates keep files small and stable
    const double r = std::round(v * 100.0) / 100.0;
    std::string s = format_double(r + 0.0); // +0.0 normalizes -0
    return s;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                           "#9467bd", "#ff7f0e", "#8c564b"};

struct AxisTicks {
    double lo, hi, step;
};

/// Round axis range outward to a "nice" step (1/2/5 decades).
inline AxisTicks nice_ticks(double lo, double hi) {
    if (!(hi > lo)) hi = lo + 1.0;
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

} // namespace detail

inline std::string render_svg(const std::vector<PlotSeries>& series,
                              const PlotOptions& opt) {
    if (series.empty()) throw config_error("plot requires at least one series");
    for (const auto& s : series) {
        if (s.x.empty() || s.x.size() != s.y.size())
            throw config_error("plot series '" + s.label + "' is empty or ragged");
        if (!s.yerr.empty() && s.yerr.size() != s.y.size())
            throw config_error("plot series '" + s.label + "' has ragged error bars");
    }

    double x_lo = series[0].x[0], x_hi = x_lo, y_lo = series[0].y[0], y_hi = y_lo;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double e = s.yerr.empty() ? 0.0 : s.yerr[i];
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i] - e);
            y_hi = std::max(y_hi, s.y[i] + e);
        }
    auto xt = detail::nice_ticks(x_lo, x_hi);
    auto yt = detail::nice_ticks(opt.y_min.value_or(y_lo), opt.y_max.value_or(y_hi));
    if (opt.y_min) yt.lo = *opt.y_min;
    if (opt.y_max) yt.hi = *opt.y_max;

    const double ml = 70, mr = 20, mt = 40, mb = 55;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
    auto px = [&](double x) { return ml + (x - xt.lo) / (xt.hi - xt.lo) * pw; };
    auto py = [&](double y) { return mt + (1.0 - (y - yt.lo) / (yt.hi - yt.lo)) * ph; };

    std::string svg;
    auto n = detail::svg_num;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(opt.width) + "\" height=\"" + std::to_string(opt.height) +
           "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
           std::to_string(opt.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + n(ml + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + opt.title + "</text>\n";

    // grid + tick labels
    for (double v = xt.lo; v <= xt.hi + 0.5 * xt.step; v += xt.step) {
        svg += "<line x1=\"" + n(px(v)) + "\" y1=\"" + n(mt) + "\" x2=\"" + n(px(v)) +
               "\" y2=\"" + n(mt + ph) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + n(px(v)) + "\" y=\"" + n(mt + ph + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_double(v) + "</text>\n";
    }
    for (double v = yt.lo; v <= yt.hi + 0.5 * yt.step; v += yt.step) {
        svg += "<line x1=\"" + n(ml) + "\" y1=\"" + n(py(v)) + "\" x2=\"" + n(ml + pw) +
               "\" y2=\"" + n(py(v)) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + n(ml - 8) + "\" y=\"" + n(py(v) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_double(v) + "</text>\n";
    }
    svg += "<rect x=\"" + n(ml) + "\" y=\"" + n(mt) + "\" width=\"" + n(pw) +
           "\" height=\"" + n(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + n(ml + pw / 2) + "\" y=\"" + n(opt.height - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           opt.x_label + "</text>\n";
    svg += "<text x=\"18\" y=\"" + n(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + n(mt + ph / 2) + ")\">" + opt.y_label +
           "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = detail::kPalette[si % 6];
        if (s.x.size() > 1) {
            std::string pts;
            for (std::size_t i = 0; i < s.x.size(); ++i)
                pts += n(px(s.x[i])) + "," + n(py(s.y[i])) + " ";
            svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!s.yerr.empty() && s.yerr[i] > 0.0) {
                const double x = px(s.x[i]);
                svg += "<line x1=\"" + n(x) + "\" y1=\"" + n(py(s.y[i] - s.yerr[i])) +
                       "\" x2=\"" + n(x) + "\" y2=\"" + n(py(s.y[i] + s.yerr[i])) +
                       "\" stroke=\"" + color + "\"/>\n";
                for (double yy : {s.y[i] - s.yerr[i], s.y[i] + s.yerr[i]})
                    svg += "<line x1=\"" + n(x - 3) + "\" y1=\"" + n(py(yy)) + "\" x2=\"" +
                           n(x + 3) + "\" y2=\"" + n(py(yy)) + "\" stroke=\"" + color +
                           "\"/>\n";
            }
            svg += "<circle cx=\"" + n(px(s.x[i])) + "\" cy=\"" + n(py(s.y[i])) +
                   "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        svg += "<text x=\"" + n(ml + pw - 8) + "\" y=\"" + n(mt + 16.0 + 16.0 * si) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
               color + "\">" + s.label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

inline void emit_plot(const std::vector<PlotSeries>& series, const std::string& path,
                      const PlotOptions& opt) {
    write_file(path, render_svg(series, opt));
}

} // namespace cascade
