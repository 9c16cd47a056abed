#include "sshstat/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sshstat/errors.hpp"

namespace sshstat::cli {

namespace {

std::string coord(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo;
    double hi;
};

Range padded_range(double lo, double hi) {
    if (lo == hi) {
        const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.07;
    return {lo - pad, hi + pad};
}

// Tick positions: five evenly spaced values across the padded range.
std::vector<double> ticks(const Range& r) {
    std::vector<double> out;
    for (int i = 0; i <= 4; ++i) {
        out.push_back(r.lo + (r.hi - r.lo) * i / 4.0);
    }
    return out;
}

} // namespace

std::string scatter_svg(const std::vector<ScatterDatum>& data,
                        const std::string& x_label,
                        const std::string& y_label) {
    if (data.empty()) throw ValidationError("no strata to plot");

    const double width = 640.0;
    const double height = 480.0;
    const double ml = 62.0;
    const double mr = 22.0;
    const double mt = 22.0;
    const double mb = 48.0;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;

    double xmin = data.front().mean_x;
    double xmax = xmin;
    double ymin = data.front().mean_y;
    double ymax = ymin;
    std::size_t max_size = 0;
    for (const auto& d : data) {
        xmin = std::min(xmin, d.mean_x);
        xmax = std::max(xmax, d.mean_x);
        ymin = std::min(ymin, d.mean_y);
        ymax = std::max(ymax, d.mean_y);
        max_size = std::max(max_size, d.size);
    }
    const Range xr = padded_range(xmin, xmax);
    const Range yr = padded_range(ymin, ymax);

    auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return mt + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";

    // Axes.
    svg << "<line x1=\"" << coord(ml) << "\" y1=\"" << coord(mt + ph)
        << "\" x2=\"" << coord(ml + pw) << "\" y2=\"" << coord(mt + ph)
        << "\" stroke=\"#333\"/>\n";
    svg << "<line x1=\"" << coord(ml) << "\" y1=\"" << coord(mt)
        << "\" x2=\"" << coord(ml) << "\" y2=\"" << coord(mt + ph)
        << "\" stroke=\"#333\"/>\n";

    for (double t : ticks(xr)) {
        const double x = px(t);
        svg << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(mt + ph)
            << "\" x2=\"" << coord(x) << "\" y2=\"" << coord(mt + ph + 5)
            << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << coord(x) << "\" y=\"" << coord(mt + ph + 18)
            << "\" text-anchor=\"middle\">" << xml_escape(coord(t)) << "</text>\n";
    }
    for (double t : ticks(yr)) {
        const double y = py(t);
        svg << "<line x1=\"" << coord(ml - 5) << "\" y1=\"" << coord(y)
            << "\" x2=\"" << coord(ml) << "\" y2=\"" << coord(y)
            << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << coord(ml - 8) << "\" y=\"" << coord(y + 4)
            << "\" text-anchor=\"end\">" << xml_escape(coord(t)) << "</text>\n";
    }

    svg << "<text x=\"" << coord(ml + pw / 2) << "\" y=\"" << coord(height - 10)
        << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
    svg << "<text x=\"14\" y=\"" << coord(mt + ph / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << coord(mt + ph / 2) << ")\">" << xml_escape(y_label) << "</text>\n";

    // Points: area tracks stratum size, shade tracks q_h (dark = high).
    for (const auto& d : data) {
        const double frac = max_size > 0 ? static_cast<double>(d.size) / static_cast<double>(max_size) : 1.0;
        const double r = 4.0 + 14.0 * std::sqrt(frac);
        double qh = d.q_h;
        if (!std::isfinite(qh)) qh = 0.0;
        qh = std::clamp(qh, 0.0, 1.0);
        const int shade = static_cast<int>(std::lround(215.0 * (1.0 - qh)));
        char fill[24];
        std::snprintf(fill, sizeof(fill), "rgb(%d,%d,%d)", shade, shade, shade);
        svg << "<circle cx=\"" << coord(px(d.mean_x)) << "\" cy=\"" << coord(py(d.mean_y))
            << "\" r=\"" << coord(r) << "\" fill=\"" << fill
            << "\" fill-opacity=\"0.85\" stroke=\"#222\">";
        svg << "<title>" << xml_escape(d.label) << " (n=" << d.size
            << ", q_h=" << xml_escape(coord(d.q_h)) << ")</title>";
        svg << "</circle>\n";
    }

    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace sshstat::cli
