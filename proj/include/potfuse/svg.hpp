#pragma once

#include <string>
#include <vector>

namespace potfuse::svg {

/// Number formatting used for every coordinate, so output is byte-stable.
std::string num(double v);

/// Blue (lo) - white - red (hi) ramp, clamped to [lo, hi].
std::string diverging_color(double v, double lo, double hi);

/// A fixed-size drawing with a data-to-pixel mapping for one plot area.
class Figure {
 public:
  Figure(double x_min, double x_max, double y_min, double y_max, int width = 640, int height = 480);

  double px(double x) const;
  double py(double y) const;

  void title(const std::string& text);
  void axes(const std::string& x_label, const std::string& y_label);
  void line(double x0, double y0, double x1, double y1, const std::string& color, double width = 1.5);
  void arrow(double x0, double y0, double x1, double y1, const std::string& color);
  void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color,
                double width = 2.0);
  void circle(double x, double y, double r, const std::string& fill);
  void triangle(double x, double y, double r, const std::string& fill);
  /// Axis-aligned rectangle given in data coordinates.
  void rect(double x0, double y0, double x1, double y1, const std::string& fill, double opacity = 1.0);
  void label(double x, double y, const std::string& text, const std::string& color = "#000");
  /// Vertical color bar at the right margin.
  void colorbar(double lo, double hi);

  std::string str() const;

 private:
  double x_min_, x_max_, y_min_, y_max_;
  int width_, height_;
  double left_ = 60, right_ = 90, top_ = 40, bottom_ = 50;
  std::vector<std::string> body_;
};

}  // namespace potfuse::svg
