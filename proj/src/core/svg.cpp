// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "core/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/text.hpp"

namespace rmsim::svg {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 160;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt_px(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
}

std::string tick_label(double v) {
    // Short human label for axis ticks.
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

struct Scale {
    double lo, hi;
    double px0, px1;
    double operator()(double v) const {
        if (hi == lo) return 0.5 * (px0 + px1);
        return px0 + (v - lo) / (hi - lo) * (px1 - px0);
    }
};

void axes(std::ostringstream& out, const Scale& x, const Scale& y, const std::string& x_label,
          const std::string& y_label, const std::string& title) {
    out << "<rect x='0' y='0' width='" << kWidth << "' height='" << kHeight
        << "' fill='white'/>\n";
    out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16' "
        << "font-family='sans-serif'>" << title << "</text>\n";
    // Frame
    out << "<line x1='" << kMarginLeft << "' y1='" << kHeight - kMarginBottom << "' x2='"
        << kWidth - kMarginRight << "' y2='" << kHeight - kMarginBottom
        << "' stroke='black'/>\n";
    out << "<line x1='" << kMarginLeft << "' y1='" << kMarginTop << "' x2='" << kMarginLeft
        << "' y2='" << kHeight - kMarginBottom << "' stroke='black'/>\n";
    // Ticks
    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        const double fx = x.lo + (x.hi - x.lo) * i / n_ticks;
        const double px = x(fx);
        out << "<line x1='" << fmt_px(px) << "' y1='" << kHeight - kMarginBottom << "' x2='"
            << fmt_px(px) << "' y2='" << kHeight - kMarginBottom + 5 << "' stroke='black'/>\n";
        out << "<text x='" << fmt_px(px) << "' y='" << kHeight - kMarginBottom + 20
            << "' text-anchor='middle' font-size='11' font-family='sans-serif'>"
            << tick_label(fx) << "</text>\n";
        const double fy = y.lo + (y.hi - y.lo) * i / n_ticks;
        const double py = y(fy);
        out << "<line x1='" << kMarginLeft - 5 << "' y1='" << fmt_px(py) << "' x2='"
            << kMarginLeft << "' y2='" << fmt_px(py) << "' stroke='black'/>\n";
        out << "<text x='" << kMarginLeft - 8 << "' y='" << fmt_px(py + 4)
            << "' text-anchor='end' font-size='11' font-family='sans-serif'>" << tick_label(fy)
            << "</text>\n";
    }
    out << "<text x='" << (kMarginLeft + kWidth - kMarginRight) / 2 << "' y='" << kHeight - 12
        << "' text-anchor='middle' font-size='13' font-family='sans-serif'>" << x_label
        << "</text>\n";
    out << "<text x='18' y='" << (kMarginTop + kHeight - kMarginBottom) / 2
        << "' text-anchor='middle' font-size='13' font-family='sans-serif' "
        << "transform='rotate(-90 18 " << (kMarginTop + kHeight - kMarginBottom) / 2 << ")'>"
        << y_label << "</text>\n";
}

} // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series) {
    double xlo = 0.0, xhi = 1.0, yhi = 1.0;
    bool first = true;
    for (const Series& s : series)
        for (const auto& [px, py] : s.points) {
            if (first) {
                xlo = xhi = px;
                yhi = py;
                first = false;
            }
            xlo = std::min(xlo, px);
            xhi = std::max(xhi, px);
            yhi = std::max(yhi, py);
        }
    const Scale x{xlo, xhi, kMarginLeft, kWidth - kMarginRight};
    const Scale y{0.0, yhi * 1.1 + 1e-12, kHeight - kMarginBottom, kMarginTop};

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "'>\n";
    axes(out, x, y, x_label, y_label, title);

    for (std::size_t i = 0; i < series.size(); ++i) {
        const Series& s = series[i];
        const char* color = kPalette[i % std::size(kPalette)];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='2' points='";
        for (const auto& [px, py] : s.points) out << fmt_px(x(px)) << ',' << fmt_px(y(py)) << ' ';
        out << "'/>\n";
        for (const auto& [px, py] : s.points)
            out << "<circle cx='" << fmt_px(x(px)) << "' cy='" << fmt_px(y(py))
                << "' r='3.5' fill='" << color << "' data-series='" << s.name << "' data-x='"
                << format_double(px) << "' data-value='" << format_double(py) << "'/>\n";
        // Legend
        const int ly = kMarginTop + 20 * static_cast<int>(i);
        out << "<rect x='" << kWidth - kMarginRight + 14 << "' y='" << ly
            << "' width='12' height='12' fill='" << color << "'/>\n";
        out << "<text x='" << kWidth - kMarginRight + 32 << "' y='" << ly + 10
            << "' font-size='12' font-family='sans-serif'>" << s.name << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string grouped_bar_chart(const std::string& title, const std::string& y_label,
                              const std::vector<BarGroup>& groups) {
    double yhi = 0.0;
    std::size_t bars_per_group = 1;
    std::vector<std::string> series_names;
    for (const BarGroup& g : groups) {
        bars_per_group = std::max(bars_per_group, g.bars.size());
        for (const auto& [name, v] : g.bars) {
            yhi = std::max(yhi, v);
            if (std::find(series_names.begin(), series_names.end(), name) == series_names.end())
                series_names.push_back(name);
        }
    }
    const Scale y{0.0, yhi * 1.1 + 1e-12, kHeight - kMarginBottom, kMarginTop};

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "'>\n";
    const Scale x{0.0, static_cast<double>(groups.size()), kMarginLeft, kWidth - kMarginRight};
    axes(out, Scale{0, 0, kMarginLeft, kWidth - kMarginRight}, y, "", y_label, title);

    const double group_w = (x.px1 - x.px0) / std::max<std::size_t>(groups.size(), 1);
    const double bar_w = group_w * 0.8 / static_cast<double>(bars_per_group);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const BarGroup& g = groups[gi];
        const double gx = x.px0 + group_w * static_cast<double>(gi) + group_w * 0.1;
        for (std::size_t bi = 0; bi < g.bars.size(); ++bi) {
            const auto& [name, v] = g.bars[bi];
            const auto si = static_cast<std::size_t>(
                std::find(series_names.begin(), series_names.end(), name) -
                series_names.begin());
            const char* color = kPalette[si % std::size(kPalette)];
            const double bx = gx + bar_w * static_cast<double>(bi);
            const double by = y(v);
            out << "<rect x='" << fmt_px(bx) << "' y='" << fmt_px(by) << "' width='"
                << fmt_px(bar_w * 0.92) << "' height='"
                << fmt_px(y(0.0) - by) << "' fill='" << color << "' data-group='" << g.label
                << "' data-series='" << name << "' data-value='" << format_double(v) << "'/>\n";
        }
        out << "<text x='" << fmt_px(gx + group_w * 0.4) << "' y='"
            << kHeight - kMarginBottom + 20
            << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << g.label
            << "</text>\n";
    }
    for (std::size_t i = 0; i < series_names.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        const int ly = kMarginTop + 20 * static_cast<int>(i);
        out << "<rect x='" << kWidth - kMarginRight + 14 << "' y='" << ly
            << "' width='12' height='12' fill='" << color << "'/>\n";
        out << "<text x='" << kWidth - kMarginRight + 32 << "' y='" << ly + 10
            << "' font-size='12' font-family='sans-serif'>" << series_names[i] << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace rmsim::svg
