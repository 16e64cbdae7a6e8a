#include "mcc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace mcc {

namespace {

struct Extent {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity(), ymax = -std::numeric_limits<double>::infinity();

    void add(double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
};

} // namespace

void write_line_chart(std::ostream& os, const std::string& title, const std::vector<SvgBand>& bands,
                      const std::vector<SvgSeries>& series, int width, int height) {
    Extent ext;
    for (const auto& b : bands)
        for (size_t i = 0; i < b.x.size(); ++i) {
            ext.add(b.x[i], b.lo[i]);
            ext.add(b.x[i], b.hi[i]);
        }
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) ext.add(s.x[i], s.y[i]);
    if (!std::isfinite(ext.xmin)) {
        ext = Extent{};
        ext.add(0, 0);
        ext.add(1, 1);
    }
    if (ext.xmax - ext.xmin < 1e-300) ext.xmax = ext.xmin + 1.0;
    if (ext.ymax - ext.ymin < 1e-300) ext.ymax = ext.ymin + 1.0;
    const double pad_y = 0.05 * (ext.ymax - ext.ymin);
    ext.ymin -= pad_y;
    ext.ymax += pad_y;

    const double ml = 60, mr = 20, mt = 36, mb = 40;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto X = [&](double x) { return ml + (x - ext.xmin) / (ext.xmax - ext.xmin) * pw; };
    auto Y = [&](double y) { return mt + (ext.ymax - y) / (ext.ymax - ext.ymin) * ph; };

    os << std::setprecision(8);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
       << "text-anchor=\"middle\">" << title << "</text>\n";

    for (const auto& b : bands) {
        if (b.x.empty()) continue;
        os << "<path d=\"M";
        for (size_t i = 0; i < b.x.size(); ++i) os << (i ? " L" : "") << X(b.x[i]) << ' ' << Y(b.hi[i]);
        for (size_t i = b.x.size(); i-- > 0;) os << " L" << X(b.x[i]) << ' ' << Y(b.lo[i]);
        os << " Z\" fill=\"" << b.fill << "\" fill-opacity=\"" << b.opacity << "\" stroke=\"none\"/>\n";
    }

    // axes box and ticks
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = ext.xmin + t * (ext.xmax - ext.xmin) / 4;
        const double yv = ext.ymin + t * (ext.ymax - ext.ymin) / 4;
        os << "<text x=\"" << X(xv) << "\" y=\"" << height - mb + 16
           << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << xv << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << Y(yv) + 3
           << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << yv << "</text>\n";
    }

    for (const auto& s : series) {
        if (s.x.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width << '"';
        if (s.dashed) os << " stroke-dasharray=\"6 4\"";
        os << " points=\"";
        for (size_t i = 0; i < s.x.size(); ++i) os << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
        os << "\"/>\n";
    }

    // legend
    double ly = mt + 14;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        os << "<line x1=\"" << ml + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + 34 << "\" y2=\"" << ly - 4
           << "\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width << '"'
           << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        os << "<text x=\"" << ml + 40 << "\" y=\"" << ly << "\" font-family=\"sans-serif\" font-size=\"11\">"
           << s.label << "</text>\n";
        ly += 16;
    }
    for (const auto& b : bands) {
        if (b.label.empty()) continue;
        os << "<rect x=\"" << ml + 10 << "\" y=\"" << ly - 12 << "\" width=\"24\" height=\"10\" fill=\"" << b.fill
           << "\" fill-opacity=\"" << b.opacity << "\"/>\n";
        os << "<text x=\"" << ml + 40 << "\" y=\"" << ly << "\" font-family=\"sans-serif\" font-size=\"11\">"
           << b.label << "</text>\n";
        ly += 16;
    }
    os << "</svg>\n";
}

} // namespace mcc
