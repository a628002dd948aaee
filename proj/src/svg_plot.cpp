#include "neurodyn/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "neurodyn/error.hpp"
#include "neurodyn/trial_data.hpp" // format_double

namespace neurodyn::svg {

namespace {

constexpr double kMarginLeft = 56.0;
constexpr double kMarginRight = 14.0;
constexpr double kMarginTop = 26.0;
constexpr double kMarginBottom = 42.0;
constexpr int kTicks = 5;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string escape_xml(const std::string& s)
{
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

// coordinates rounded to 1/100 px keep the files small and stable
std::string px(double v)
{
    return format_double(std::round(v * 100.0) / 100.0);
}

std::string tick_label(double v)
{
    return format_double(std::round(v * 1e6) / 1e6);
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish()
    {
        if (lo > hi) { // no finite data at all
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            const double pad = std::abs(lo) * 0.05 + 0.5;
            lo -= pad;
            hi += pad;
        }
    }
};

void render_panel(std::string& out, const Plot& plot, double ox, double oy)
{
    Range rx, ry;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); i++)
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                rx.include(s.x[i]);
                ry.include(s.y[i]);
            }
    rx.finish();
    ry.finish();

    const double x0 = ox + kMarginLeft;
    const double y0 = oy + kMarginTop;
    const double w = plot.width - kMarginLeft - kMarginRight;
    const double h = plot.height - kMarginTop - kMarginBottom;
    const auto sx = [&](double v) {
        return x0 + (v - rx.lo) / (rx.hi - rx.lo) * w;
    };
    const auto sy = [&](double v) {
        return y0 + h - (v - ry.lo) / (ry.hi - ry.lo) * h;
    };

    out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    out += "<rect x=\"" + px(x0) + "\" y=\"" + px(y0) + "\" width=\"" +
           px(w) + "\" height=\"" + px(h) +
           "\" fill=\"none\" stroke=\"#333333\"/>\n";

    for (int i = 0; i < kTicks; i++) {
        const double f = static_cast<double>(i) / (kTicks - 1);
        const double xv = rx.lo + f * (rx.hi - rx.lo);
        const double yv = ry.lo + f * (ry.hi - ry.lo);
        out += "<line x1=\"" + px(sx(xv)) + "\" y1=\"" + px(y0 + h) +
               "\" x2=\"" + px(sx(xv)) + "\" y2=\"" + px(y0 + h + 4) +
               "\" stroke=\"#333333\"/>\n";
        out += "<text x=\"" + px(sx(xv)) + "\" y=\"" + px(y0 + h + 16) +
               "\" text-anchor=\"middle\">" + tick_label(xv) + "</text>\n";
        out += "<line x1=\"" + px(x0 - 4) + "\" y1=\"" + px(sy(yv)) +
               "\" x2=\"" + px(x0) + "\" y2=\"" + px(sy(yv)) +
               "\" stroke=\"#333333\"/>\n";
        out += "<text x=\"" + px(x0 - 7) + "\" y=\"" + px(sy(yv) + 4) +
               "\" text-anchor=\"end\">" + tick_label(yv) + "</text>\n";
    }

    if (!plot.title.empty())
        out += "<text x=\"" + px(x0 + w / 2) + "\" y=\"" + px(oy + 16) +
               "\" text-anchor=\"middle\" font-size=\"13\">" +
               escape_xml(plot.title) + "</text>\n";
    if (!plot.x_label.empty())
        out += "<text x=\"" + px(x0 + w / 2) + "\" y=\"" +
               px(oy + plot.height - 8) + "\" text-anchor=\"middle\">" +
               escape_xml(plot.x_label) + "</text>\n";
    if (!plot.y_label.empty())
        out += "<text x=\"" + px(ox + 14) + "\" y=\"" + px(y0 + h / 2) +
               "\" text-anchor=\"middle\" transform=\"rotate(-90 " +
               px(ox + 14) + " " + px(y0 + h / 2) + ")\">" +
               escape_xml(plot.y_label) + "</text>\n";

    for (std::size_t si = 0; si < plot.series.size(); si++) {
        const auto& s = plot.series[si];
        const std::string color =
            s.color.empty() ? kPalette[si % kPaletteSize] : s.color;
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.scatter) {
            for (std::size_t i = 0; i < n; i++) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                out += "<circle cx=\"" + px(sx(s.x[i])) + "\" cy=\"" +
                       px(sy(s.y[i])) + "\" r=\"2\" fill=\"" + color +
                       "\"/>\n";
            }
        } else {
            std::string points;
            for (std::size_t i = 0; i < n; i++) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                if (!points.empty()) points += ' ';
                points += px(sx(s.x[i])) + "," + px(sy(s.y[i]));
            }
            if (!points.empty())
                out += "<polyline fill=\"none\" stroke=\"" + color +
                       "\" stroke-width=\"1.2\" points=\"" + points +
                       "\"/>\n";
        }
        if (!s.label.empty()) {
            const double ly = y0 + 14.0 + 14.0 * static_cast<double>(si);
            out += "<rect x=\"" + px(x0 + 6) + "\" y=\"" + px(ly - 8) +
                   "\" width=\"9\" height=\"9\" fill=\"" + color + "\"/>\n";
            out += "<text x=\"" + px(x0 + 19) + "\" y=\"" + px(ly) + "\">" +
                   escape_xml(s.label) + "</text>\n";
        }
    }
    out += "</g>\n";
}

} // namespace

std::string render(const Plot& plot)
{
    return render_panels({plot}, 1);
}

std::string render_panels(const std::vector<Plot>& panels, int columns)
{
    require(!panels.empty(), errc::empty_input, "no panels to render");
    require(columns >= 1, errc::invalid_argument, "columns must be >= 1");
    const std::size_t cols =
        std::min<std::size_t>(static_cast<std::size_t>(columns), panels.size());
    const std::size_t rows = (panels.size() + cols - 1) / cols;

    double cell_w = 0.0, cell_h = 0.0;
    for (const auto& p : panels) {
        cell_w = std::max(cell_w, p.width);
        cell_h = std::max(cell_h, p.height);
    }
    const double total_w = cell_w * static_cast<double>(cols);
    const double total_h = cell_h * static_cast<double>(rows);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           px(total_w) + "\" height=\"" + px(total_h) + "\" viewBox=\"0 0 " +
           px(total_w) + " " + px(total_h) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (std::size_t i = 0; i < panels.size(); i++) {
        const double ox = static_cast<double>(i % cols) * cell_w;
        const double oy = static_cast<double>(i / cols) * cell_h;
        render_panel(out, panels[i], ox, oy);
    }
    out += "</svg>\n";
    return out;
}

void write_svg(const std::string& svg_text, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_failure, "cannot open '" + path + "' for writing");
    out << svg_text;
    if (!out.flush()) fail(errc::io_failure, "write failed for '" + path + "'");
}

} // namespace neurodyn::svg
