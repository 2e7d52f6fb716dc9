#include "pptour/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "pptour/errors.hpp"

namespace pptour {

namespace {

const char* kPalette[10] = {"#1b6ca8", "#d1495b", "#66a182", "#edae49", "#8d5a97",
                            "#00798c", "#a44a3f", "#3d5a80", "#7a9e7e", "#c18c5d"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string num4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

} // namespace

std::string render_trace_svg(const std::vector<std::string>& index_names, const Matrix& values,
                             const std::vector<std::size_t>& markers, const TracePlotOptions& opt) {
    const Eigen::Index nf = values.rows();
    const Eigen::Index ni = values.cols();
    if (nf == 0 || ni == 0) throw EmptyTrace("no trace values to plot");

    const double ml = 46, mr = 130, mt = opt.title.empty() ? 16 : 34, mb = 34;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
    auto sx = [&](double frame) {
        return ml + (nf == 1 ? 0.5 * pw : pw * frame / static_cast<double>(nf - 1));
    };
    auto sy = [&](double v) { return mt + ph * (1.0 - v); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
    s << "<rect width=\"" << opt.width << "\" height=\"" << opt.height << "\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        s << "<text x=\"" << num(ml) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">"
          << opt.title << "</text>\n";

    // frame for the [0,1] index range with quarter gridlines
    for (int g = 0; g <= 4; ++g) {
        const double v = 0.25 * g;
        s << "<line x1=\"" << num(ml) << "\" y1=\"" << num(sy(v)) << "\" x2=\"" << num(ml + pw)
          << "\" y2=\"" << num(sy(v)) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        s << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(sy(v) + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num4(v)
          << "</text>\n";
    }
    s << "<text x=\"" << num(ml + 0.5 * pw) << "\" y=\"" << num(opt.height - 8)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">frame</text>\n";

    for (const std::size_t m : markers) {
        const double x = sx(static_cast<double>(m));
        s << "<line x1=\"" << num(x) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(x) << "\" y2=\""
          << num(mt + ph) << "\" stroke=\"#4477cc\" stroke-width=\"1\" stroke-dasharray=\"4,3\"/>\n";
    }

    for (Eigen::Index c = 0; c < ni; ++c) {
        const char* color = kPalette[static_cast<std::size_t>(c) % 10];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first_pt = true;
        for (Eigen::Index r = 0; r < nf; ++r) {
            const double v = values(r, c);
            if (!std::isfinite(v)) continue;
            if (!first_pt) s << ' ';
            s << num(sx(static_cast<double>(r))) << ',' << num(sy(std::clamp(v, 0.0, 1.0)));
            first_pt = false;
        }
        s << "\"/>\n";
        const double ly = mt + 16.0 * static_cast<double>(c);
        s << "<rect x=\"" << num(ml + pw + 10) << "\" y=\"" << num(ly) << "\" width=\"10\" height=\"10\" fill=\""
          << color << "\"/>\n";
        s << "<text x=\"" << num(ml + pw + 24) << "\" y=\"" << num(ly + 9)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << index_names[static_cast<std::size_t>(c)]
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string render_scatter_svg(const MatrixN2& points, const ScatterPlotOptions& opt) {
    if (points.rows() == 0) throw EmptyTrace("no points to plot");
    if (!points.allFinite()) throw DataError("scatter input has non-finite values");

    const double ml = 50, mr = 16, mt = opt.title.empty() ? 16 : 34, mb = 40;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
    double xmin = points.col(0).minCoeff(), xmax = points.col(0).maxCoeff();
    double ymin = points.col(1).minCoeff(), ymax = points.col(1).maxCoeff();
    if (xmax - xmin <= 0) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin <= 0) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double padx = 0.04 * (xmax - xmin), pady = 0.04 * (ymax - ymin);
    xmin -= padx;
    xmax += padx;
    ymin -= pady;
    ymax += pady;
    auto sx = [&](double v) { return ml + pw * (v - xmin) / (xmax - xmin); };
    auto sy = [&](double v) { return mt + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
    s << "<rect width=\"" << opt.width << "\" height=\"" << opt.height << "\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        s << "<text x=\"" << num(ml) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">"
          << opt.title << "</text>\n";
    s << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#999999\"/>\n";
    s << "<text x=\"" << num(ml + 0.5 * pw) << "\" y=\"" << num(opt.height - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << opt.xlabel
      << "</text>\n";
    s << "<text x=\"14\" y=\"" << num(mt + 0.5 * ph)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-90 14 "
      << num(mt + 0.5 * ph) << ")\">" << opt.ylabel << "</text>\n";
    // axis extent labels
    s << "<text x=\"" << num(ml) << "\" y=\"" << num(opt.height - 24)
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << num4(xmin) << "</text>\n";
    s << "<text x=\"" << num(ml + pw) << "\" y=\"" << num(opt.height - 24)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << num4(xmax)
      << "</text>\n";

    s << "<g fill=\"#1b6ca8\" fill-opacity=\"" << num(opt.opacity) << "\">\n";
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        s << "<circle cx=\"" << num(sx(points(i, 0))) << "\" cy=\"" << num(sy(points(i, 1)))
          << "\" r=\"" << num(opt.radius) << "\"/>\n";
    s << "</g>\n</svg>\n";
    return s.str();
}

} // namespace pptour
