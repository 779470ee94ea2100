#include "ltvi/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ltvi {
namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void absorb(const std::vector<double>& v) {
        for (double x : v) {
            if (std::isfinite(x)) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        }
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double margin = 0.05 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void draw_panel(std::ofstream& out, const std::string& title,
                const std::vector<SvgSeries>& series, double x0, double y0, double w, double h) {
    Range rx, ry;
    for (const auto& s : series) {
        rx.absorb(s.x);
        ry.absorb(s.y);
    }
    rx.pad();
    ry.pad();

    auto px = [&](double x) { return x0 + (x - rx.lo) / (rx.hi - rx.lo) * w; };
    auto py = [&](double y) { return y0 + h - (y - ry.lo) / (ry.hi - ry.lo) * h; };

    out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(w)
        << "\" height=\"" << num(h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << num(x0 + 6) << "\" y=\"" << num(y0 + 16)
        << "\" font-size=\"13\" font-family=\"sans-serif\">" << title << "</text>\n";

    // Axis ticks: four intervals each way.
    for (int i = 0; i <= 4; ++i) {
        const double xv = rx.lo + (rx.hi - rx.lo) * i / 4.0;
        const double yv = ry.lo + (ry.hi - ry.lo) * i / 4.0;
        out << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(y0 + h + 14)
            << "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">" << num(xv)
            << "</text>\n";
        out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(py(yv) + 3)
            << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" << num(yv)
            << "</text>\n";
    }

    double legend_y = y0 + 16;
    for (const auto& s : series) {
        if (s.x.size() < 2 || s.x.size() != s.y.size()) {
            continue;
        }
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\"";
        if (s.dashed) {
            out << " stroke-dasharray=\"6 4\"";
        }
        out << " points=\"";
        // Decimate long traces; the plot does not need 50k points.
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 1200);
        for (std::size_t i = 0; i < s.x.size(); i += stride) {
            out << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
        }
        out << num(px(s.x.back())) << ',' << num(py(s.y.back()));
        out << "\"/>\n";
        out << "<text x=\"" << num(x0 + w - 8) << "\" y=\"" << num(legend_y)
            << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << s.color
            << "\" font-family=\"sans-serif\">" << s.label << "</text>\n";
        legend_y += 14;
    }
}

}  // namespace

void write_two_panel_svg(const std::string& path, const std::string& top_title,
                         const std::vector<SvgSeries>& top, const std::string& bottom_title,
                         const std::vector<SvgSeries>& bottom) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_two_panel_svg: cannot open " + path);
    }
    const double width = 860, height = 640;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    draw_panel(out, top_title, top, 60, 20, width - 90, 270);
    draw_panel(out, bottom_title, bottom, 60, 340, width - 90, 270);
    out << "</svg>\n";
}

}  // namespace ltvi
