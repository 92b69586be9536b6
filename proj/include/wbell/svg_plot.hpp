#pragma once

// Minimal static SVG line charts for the CLI's --plot output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace wbell {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

namespace detail {

inline std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

/// Renders one or more (x, y) series as a self-contained SVG document with
/// axes, tick labels, and a dashed y = 0 reference line when zero is in
/// range.
inline std::string render_line_chart(const std::string& title,
                                     const std::string& x_label,
                                     const std::string& y_label,
                                     const std::vector<PlotSeries>& series,
                                     int width = 720, int height = 480) {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const PlotSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    auto pad = [](double& lo, double& hi) {
        const double span = hi - lo;
        const double margin = span > 0 ? 0.05 * span : 0.5 + 0.1 * std::abs(lo);
        lo -= margin;
        hi += margin;
    };
    pad(x_min, x_max);
    pad(y_min, y_max);

    const double left = 70, right = 20, top = 40, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto sx = [&](double x) {
        return left + (x - x_min) / (x_max - x_min) * plot_w;
    };
    auto sy = [&](double y) {
        return top + (y_max - y) / (y_max - y_min) * plot_h;
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) +
           "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + title +
           "</text>\n";

    // frame and ticks
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                  "fill=\"none\" stroke=\"#444\"/>\n",
                  left, top, plot_w, plot_h);
    svg += buf;
    const int n_ticks = 5;
    for (int t = 0; t <= n_ticks; ++t) {
        const double fx = x_min + (x_max - x_min) * t / n_ticks;
        const double fy = y_min + (y_max - y_min) * t / n_ticks;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"#ccc\"/>\n",
                      sx(fx), top, sx(fx), top + plot_h);
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"#ccc\"/>\n",
                      left, sy(fy), left + plot_w, sy(fy));
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%s"
                      "</text>\n",
                      sx(fx), top + plot_h + 18,
                      detail::short_number(fx).c_str());
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%s"
                      "</text>\n",
                      left - 6, sy(fy) + 4, detail::short_number(fy).c_str());
        svg += buf;
    }
    if (y_min < 0.0 && y_max > 0.0) {
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"#888\" stroke-dasharray=\"5,4\"/>\n",
                      left, sy(0.0), left + plot_w, sy(0.0));
        svg += buf;
    }

    // axis labels
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" +
           std::to_string(height - 10) + "\" text-anchor=\"middle\">" +
           x_label + "</text>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"16\" y=\"%.1f\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 16 %.1f)\">%s</text>\n",
                  top + plot_h / 2, top + plot_h / 2, y_label.c_str());
    svg += buf;

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = palette[i % 4];
        std::string path;
        for (const auto& [x, y] : series[i].points) {
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f",
                          path.empty() ? "" : " ", sx(x), sy(y));
            path += buf;
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.8\" points=\"" + path + "\"/>\n";
        if (series[i].points.size() <= 40) {
            for (const auto& [x, y] : series[i].points) {
                std::snprintf(buf, sizeof buf,
                              "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.6\" "
                              "fill=\"%s\"/>\n",
                              sx(x), sy(y), color);
                svg += buf;
            }
        }
        // legend entry
        const double ly = top + 16 + 16 * static_cast<double>(i);
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"%s\" stroke-width=\"2\"/>\n",
                      left + plot_w - 150, ly, left + plot_w - 126, ly, color);
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\">%s</text>\n",
                      left + plot_w - 120, ly + 4, series[i].label.c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace wbell
