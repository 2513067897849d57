#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ergokit/errors.hpp"
#include "ergokit/io.hpp"

namespace ergokit::cli {

void write_union_dat(const std::string& path, const std::vector<SeriesRecord>& series) {
    if (series.empty()) {
        throw ConfigError("no series to merge");
    }
    std::vector<double> grid;
    for (const SeriesRecord& s : series) {
        grid.insert(grid.end(), s.t.begin(), s.t.end());
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<std::map<double, double>> lookup(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t k = 0; k < series[i].t.size(); ++k) {
            lookup[i][series[i].t[k]] = series[i].value[k];
        }
    }

    std::ostringstream out;
    out << "# t";
    for (const SeriesRecord& s : series) out << ' ' << s.label;
    out << '\n';
    for (double t : grid) {
        out << format_double(t);
        for (const auto& table : lookup) {
            auto it = table.find(t);
            out << ' ' << (it == table.end() ? "nan" : format_double(it->second));
        }
        out << '\n';
    }
    write_file(path, out.str());
}

namespace {

constexpr int kWidth = 840;
constexpr int kHeight = 520;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 170;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt_tick(double v) {
    std::ostringstream out;
    out.precision(4);
    out << v;
    return out.str();
}

}  // namespace

void write_svg_chart(const std::string& path, const std::vector<SeriesRecord>& series,
                     const std::string& title) {
    if (series.empty()) {
        throw ConfigError("no series to plot");
    }

    double t_min = std::numeric_limits<double>::infinity();
    double t_max = -t_min;
    double v_min = t_min;
    double v_max = -t_min;
    bool all_positive_t = true;
    for (const SeriesRecord& s : series) {
        for (std::size_t k = 0; k < s.t.size(); ++k) {
            if (!std::isfinite(s.value[k])) continue;
            t_min = std::min(t_min, s.t[k]);
            t_max = std::max(t_max, s.t[k]);
            v_min = std::min(v_min, s.value[k]);
            v_max = std::max(v_max, s.value[k]);
            if (s.t[k] <= 0.0) all_positive_t = false;
        }
    }
    if (!std::isfinite(t_min)) {
        // Every sample was non-finite; draw an empty frame instead of failing.
        t_min = 0.0;
        t_max = 1.0;
        v_min = 0.0;
        v_max = 1.0;
    }
    if (t_max == t_min) t_max = t_min + 1.0;
    if (v_max == v_min) {
        v_max = v_min + 1.0;
        v_min -= 1.0;
    }
    const bool log_x = all_positive_t && t_min > 0.0 && t_max / t_min > 100.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto x_of = [&](double t) {
        double u = log_x ? (std::log10(t) - std::log10(t_min)) /
                               (std::log10(t_max) - std::log10(t_min))
                         : (t - t_min) / (t_max - t_min);
        return kMarginLeft + u * plot_w;
    };
    auto y_of = [&](double v) {
        return kMarginTop + (1.0 - (v - v_min) / (v_max - v_min)) * plot_h;
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // Corner tick labels are enough to read scales off the chart.
    out << "<text x=\"" << kMarginLeft << "\" y=\"" << kHeight - kMarginBottom + 18
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(t_min)
        << (log_x ? " (log)" : "") << "</text>\n";
    out << "<text x=\"" << kMarginLeft + plot_w << "\" y=\"" << kHeight - kMarginBottom + 18
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(t_max) << "</text>\n";
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + 12
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(v_max) << "</text>\n";
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + plot_h
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(v_min) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const SeriesRecord& s = series[i];
        const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
        // Non-finite samples break the polyline into separate segments.
        std::vector<std::pair<double, double>> segment;
        auto flush = [&]() {
            if (segment.size() >= 2) {
                out << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.5\" points=\"";
                for (const auto& [x, y] : segment) out << x << ',' << y << ' ';
                out << "\"/>\n";
            } else if (segment.size() == 1) {
                out << "<circle cx=\"" << segment[0].first << "\" cy=\"" << segment[0].second
                    << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
            }
            segment.clear();
        };
        for (std::size_t k = 0; k < s.t.size(); ++k) {
            if (std::isfinite(s.value[k])) {
                segment.emplace_back(x_of(s.t[k]), y_of(s.value[k]));
            } else {
                flush();
            }
        }
        flush();
        const double ly = kMarginTop + 16.0 + 18.0 * static_cast<double>(i);
        out << "<line x1=\"" << kWidth - kMarginRight + 12 << "\" y1=\"" << ly - 4
            << "\" x2=\"" << kWidth - kMarginRight + 36 << "\" y2=\"" << ly - 4
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kWidth - kMarginRight + 42 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    write_file(path, out.str());
}

}  // namespace ergokit::cli
