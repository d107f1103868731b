#include "invnet/svg.hpp"

#include <algorithm>
#include <cstdio>

#include "invnet/error.hpp"

namespace invnet {

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

}  // namespace

std::string svg_escape(const std::string& s) {
    std::string out;
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

SvgDocument::SvgDocument(double width, double height) : width_(width), height_(height) {}

void SvgDocument::comment(const std::string& text) {
    std::string safe = text;
    // "--" is not allowed inside XML comments.
    for (std::size_t p = safe.find("--"); p != std::string::npos; p = safe.find("--", p)) {
        safe.replace(p, 2, "- -");
    }
    body_ += "<!--\n" + safe + "\n-->\n";
}

void SvgDocument::rect(double x, double y, double w, double h, const std::string& fill,
                       const std::string& stroke, double opacity) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
             num(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" fill-opacity=\"" +
             num(opacity) + "\"/>\n";
}

void SvgDocument::circle(double cx, double cy, double r, const std::string& fill, double opacity) {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" +
             fill + "\" fill-opacity=\"" + num(opacity) + "\"/>\n";
}

void SvgDocument::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                       double width, bool dashed) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
             num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"" +
             (dashed ? " stroke-dasharray=\"4 3\"" : "") + "/>\n";
}

void SvgDocument::polyline(std::span<const double> xs, std::span<const double> ys,
                           const std::string& stroke, double width) {
    if (xs.size() != ys.size()) throw DimensionError("polyline: coordinate count mismatch");
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) +
             "\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        body_ += (i ? " " : "") + num(xs[i]) + "," + num(ys[i]);
    }
    body_ += "\"/>\n";
}

void SvgDocument::text(double x, double y, const std::string& content, double size,
                       const std::string& anchor) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
             "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" +
             svg_escape(content) + "</text>\n";
}

void SvgDocument::begin_clip(double x, double y, double w, double h) {
    const std::string id = "clip" + std::to_string(clip_count_++);
    body_ += "<clipPath id=\"" + id + "\"><rect x=\"" + num(x) + "\" y=\"" + num(y) +
             "\" width=\"" + num(w) + "\" height=\"" + num(h) + "\"/></clipPath>\n";
    body_ += "<g clip-path=\"url(#" + id + ")\">\n";
}

void SvgDocument::end_clip() { body_ += "</g>\n"; }

std::string SvgDocument::str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " +
           num(height_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ +
           "</svg>\n";
}

void draw_class_histogram(SvgDocument& svg, double x, double y, double w, double h,
                          std::span<const double> values, std::span<const int> labels,
                          std::size_t bins, const std::string& title) {
    if (values.size() != labels.size()) throw DimensionError("histogram: label count mismatch");
    if (bins == 0) throw InputError("histogram: bins must be >= 1");
    svg.rect(x, y, w, h, "none", "#444444");
    svg.text(x + w / 2, y - 6, title, 12, "middle");
    if (values.empty()) return;
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    std::vector<std::size_t> counts[2] = {std::vector<std::size_t>(bins, 0),
                                          std::vector<std::size_t>(bins, 0)};
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto b = static_cast<std::size_t>((values[i] - lo) / (hi - lo) * static_cast<double>(bins));
        b = std::min(b, bins - 1);
        counts[labels[i] == 1 ? 1 : 0][b]++;
    }
    std::size_t peak = 1;
    for (const auto& c : counts) peak = std::max(peak, *std::max_element(c.begin(), c.end()));
    const double bw = w / static_cast<double>(bins);
    for (int cls = 0; cls < 2; ++cls) {
        for (std::size_t b = 0; b < bins; ++b) {
            const double bh = h * static_cast<double>(counts[cls][b]) / static_cast<double>(peak);
            if (bh > 0) svg.rect(x + b * bw, y + h - bh, bw, bh, kClassColors[cls], "none", 0.5);
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", lo);
    svg.text(x, y + h + 14, buf, 10, "start");
    std::snprintf(buf, sizeof(buf), "%.3g", hi);
    svg.text(x + w, y + h + 14, buf, 10, "end");
}

}  // namespace invnet
