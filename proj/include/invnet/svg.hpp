#pragma once

#include <span>
#include <string>
#include <vector>

#include "invnet/linalg.hpp"

namespace invnet {

// Minimal SVG builder. Coordinates are printed with two decimals so the
// output bytes depend only on the drawn data.
class SvgDocument {
public:
    SvgDocument(double width, double height);

    void comment(const std::string& text);
    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke = "none", double opacity = 1.0);
    void circle(double cx, double cy, double r, const std::string& fill, double opacity = 1.0);
    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width = 1.0, bool dashed = false);
    void polyline(std::span<const double> xs, std::span<const double> ys, const std::string& stroke,
                  double width = 1.0);
    void text(double x, double y, const std::string& content, double size = 12.0,
              const std::string& anchor = "start");
    // Subsequent elements are clipped to the rectangle until end_clip().
    void begin_clip(double x, double y, double w, double h);
    void end_clip();

    std::string str() const;

private:
    double width_;
    double height_;
    int clip_count_ = 0;
    std::string body_;
};

// Maps a data range onto a pixel range; y axes are flipped by passing
// pixel_lo > pixel_hi.
struct AxisMap {
    double data_lo, data_hi, pixel_lo, pixel_hi;
    double operator()(double v) const {
        return pixel_lo + (v - data_lo) / (data_hi - data_lo) * (pixel_hi - pixel_lo);
    }
};

// Overlaid per-class histograms of `values` in a panel at (x, y, w, h).
void draw_class_histogram(SvgDocument& svg, double x, double y, double w, double h,
                          std::span<const double> values, std::span<const int> labels,
                          std::size_t bins, const std::string& title);

std::string svg_escape(const std::string& s);

inline constexpr const char* kClassColors[2] = {"#1f77b4", "#d62728"};

}  // namespace invnet
