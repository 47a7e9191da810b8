#include "sltm/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sltm/errors.hpp"
#include "sltm/io_util.hpp"

namespace sltm {

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (lo == hi) {
            lo -= 1.0;
            hi += 1.0;
        }
    }
};

// Tick step of the form {1,2,5}*10^k giving roughly the requested count.
double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step;
    if (norm <= 1.0)
        step = 1.0;
    else if (norm <= 2.0)
        step = 2.0;
    else if (norm <= 5.0)
        step = 5.0;
    else
        step = 10.0;
    return step * mag;
}

std::string fmt_tick(double v) {
    // Collapse -0 and tiny roundoff so tick labels stay clean.
    if (std::abs(v) < 1e-12) v = 0.0;
    return format_double(v);
}

} // namespace

std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series) {
    Range xr, yr;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points)
            if (std::isfinite(x) && std::isfinite(y)) {
                xr.grow(x);
                yr.grow(y);
            }
    if (!(xr.lo <= xr.hi))
        throw ValidationError("plot '" + spec.title + "' has no finite data points");
    xr.pad();
    yr.pad();

    const double ml = 78, mr = 24, mt = 42, mb = 58;
    const double pw = spec.width - ml - mr;
    const double ph = spec.height - mt - mb;
    const auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto py = [&](double y) { return mt + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << spec.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << spec.title << "</text>\n";

    // Grid and ticks.
    const double xstep = nice_step(xr.hi - xr.lo, 8);
    const double ystep = nice_step(yr.hi - yr.lo, 6);
    svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (double x = std::ceil(xr.lo / xstep) * xstep; x <= xr.hi + 1e-9 * xstep; x += xstep) {
        const double gx = px(x);
        svg << "<line x1=\"" << gx << "\" y1=\"" << mt << "\" x2=\"" << gx << "\" y2=\""
            << mt + ph << "\" stroke=\"#ddd\"/>\n"
            << "<text x=\"" << gx << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
            << fmt_tick(x) << "</text>\n";
    }
    for (double y = std::ceil(yr.lo / ystep) * ystep; y <= yr.hi + 1e-9 * ystep; y += ystep) {
        const double gy = py(y);
        svg << "<line x1=\"" << ml << "\" y1=\"" << gy << "\" x2=\"" << ml + pw << "\" y2=\""
            << gy << "\" stroke=\"#ddd\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">"
            << fmt_tick(y) << "</text>\n";
    }
    svg << "</g>\n"
        << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#333\"/>\n"
        << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << spec.x_label << "</text>\n"
        << "<text x=\"20\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 20 "
        << mt + ph / 2 << ")\">" << spec.y_label << "</text>\n";

    for (const auto& s : series) {
        svg << "<path d=\"";
        bool pen_down = false;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) {
                pen_down = false;
                continue;
            }
            svg << (pen_down ? 'L' : 'M') << px(x) << ' ' << py(y) << ' ';
            pen_down = true;
        }
        svg << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
        if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
        svg << "/>\n";
    }

    // Legend.
    double ly = mt + 14;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        svg << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 122
            << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
        if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
        svg << "/>\n"
            << "<text x=\"" << ml + pw - 116 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        ly += 18;
    }

    svg << "</svg>\n";
    return svg.str();
}

} // namespace sltm
