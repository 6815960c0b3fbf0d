#include "potfuse/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace potfuse::svg {

std::string num(double v) {
  if (std::abs(v) < 5e-4) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string diverging_color(double v, double lo, double hi) {
  double t = (std::clamp(v, lo, hi) - lo) / (hi - lo);  // 0..1
  int r, g, b;
  if (t < 0.5) {
    const double s = t / 0.5;  // blue -> white
    r = static_cast<int>(std::lround(33 + s * (255 - 33)));
    g = static_cast<int>(std::lround(102 + s * (255 - 102)));
    b = static_cast<int>(std::lround(172 + s * (255 - 172)));
  } else {
    const double s = (t - 0.5) / 0.5;  // white -> red
    r = static_cast<int>(std::lround(255 + s * (178 - 255)));
    g = static_cast<int>(std::lround(255 + s * (24 - 255)));
    b = static_cast<int>(std::lround(255 + s * (43 - 255)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

Figure::Figure(double x_min, double x_max, double y_min, double y_max, int width, int height)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), width_(width), height_(height) {
  if (!(x_max_ > x_min_)) x_max_ = x_min_ + 1.0;
  if (!(y_max_ > y_min_)) y_max_ = y_min_ + 1.0;
}

double Figure::px(double x) const {
  return left_ + (x - x_min_) / (x_max_ - x_min_) * (width_ - left_ - right_);
}

double Figure::py(double y) const {
  return height_ - bottom_ - (y - y_min_) / (y_max_ - y_min_) * (height_ - top_ - bottom_);
}

void Figure::title(const std::string& text) {
  body_.push_back("<text x=\"" + num(width_ / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
                  text + "</text>");
}

void Figure::axes(const std::string& x_label, const std::string& y_label) {
  const double x0 = px(x_min_), x1 = px(x_max_), y0 = py(y_min_), y1 = py(y_max_);
  body_.push_back("<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) +
                  "\" height=\"" + num(y0 - y1) + "\" fill=\"none\" stroke=\"#333\"/>");
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_min_ + (x_max_ - x_min_) * i / 4.0;
    const double fy = y_min_ + (y_max_ - y_min_) * i / 4.0;
    body_.push_back("<text x=\"" + num(px(fx)) + "\" y=\"" + num(y0 + 16) +
                    "\" text-anchor=\"middle\" font-size=\"11\">" + num(fx) + "</text>");
    body_.push_back("<text x=\"" + num(x0 - 6) + "\" y=\"" + num(py(fy) + 4) +
                    "\" text-anchor=\"end\" font-size=\"11\">" + num(fy) + "</text>");
  }
  body_.push_back("<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(height_ - 12.0) +
                  "\" text-anchor=\"middle\" font-size=\"13\">" + x_label + "</text>");
  body_.push_back("<text x=\"16\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" font-size=\"13\" "
                  "transform=\"rotate(-90 16 " + num((y0 + y1) / 2) + ")\">" + y_label + "</text>");
}

void Figure::line(double x0, double y0, double x1, double y1, const std::string& color, double width) {
  body_.push_back("<line x1=\"" + num(px(x0)) + "\" y1=\"" + num(py(y0)) + "\" x2=\"" + num(px(x1)) +
                  "\" y2=\"" + num(py(y1)) + "\" stroke=\"" + color + "\" stroke-width=\"" + num(width) + "\"/>");
}

void Figure::arrow(double x0, double y0, double x1, double y1, const std::string& color) {
  line(x0, y0, x1, y1, color, 2.0);
  const double ax = px(x1), ay = py(y1);
  const double dx = ax - px(x0), dy = ay - py(y0);
  const double len = std::hypot(dx, dy);
  if (len <= 0.0) return;
  const double ux = dx / len, uy = dy / len;
  const double s = 9.0;
  body_.push_back("<polygon points=\"" + num(ax) + "," + num(ay) + " " + num(ax - s * ux + 0.5 * s * uy) + "," +
                  num(ay - s * uy - 0.5 * s * ux) + " " + num(ax - s * ux - 0.5 * s * uy) + "," +
                  num(ay - s * uy + 0.5 * s * ux) + "\" fill=\"" + color + "\"/>");
}

void Figure::polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color,
                      double width) {
  std::string pts;
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
    if (i) pts += ' ';
    pts += num(px(xs[i])) + "," + num(py(ys[i]));
  }
  body_.push_back("<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                  num(width) + "\"/>");
}

void Figure::circle(double x, double y, double r, const std::string& fill) {
  body_.push_back("<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"" + num(r) + "\" fill=\"" +
                  fill + "\" fill-opacity=\"0.7\"/>");
}

void Figure::triangle(double x, double y, double r, const std::string& fill) {
  const double cx = px(x), cy = py(y);
  body_.push_back("<polygon points=\"" + num(cx) + "," + num(cy - r) + " " + num(cx - r) + "," + num(cy + r) +
                  " " + num(cx + r) + "," + num(cy + r) + "\" fill=\"" + fill + "\" fill-opacity=\"0.7\"/>");
}

void Figure::rect(double x0, double y0, double x1, double y1, const std::string& fill, double opacity) {
  const double a = px(std::min(x0, x1)), b = px(std::max(x0, x1));
  const double c = py(std::max(y0, y1)), d = py(std::min(y0, y1));
  body_.push_back("<rect x=\"" + num(a) + "\" y=\"" + num(c) + "\" width=\"" + num(b - a) + "\" height=\"" +
                  num(d - c) + "\" fill=\"" + fill + "\" fill-opacity=\"" + num(opacity) + "\"/>");
}

void Figure::label(double x, double y, const std::string& text, const std::string& color) {
  body_.push_back("<text x=\"" + num(px(x)) + "\" y=\"" + num(py(y)) + "\" font-size=\"12\" fill=\"" + color +
                  "\">" + text + "</text>");
}

void Figure::colorbar(double lo, double hi) {
  const double x = width_ - right_ + 25;
  const double top = py(y_max_), bottom = py(y_min_);
  const int steps = 50;
  for (int i = 0; i < steps; ++i) {
    const double v = lo + (hi - lo) * (i + 0.5) / steps;
    const double y1 = bottom - (bottom - top) * (i + 1) / steps;
    body_.push_back("<rect x=\"" + num(x) + "\" y=\"" + num(y1) + "\" width=\"18\" height=\"" +
                    num((bottom - top) / steps + 0.5) + "\" fill=\"" + diverging_color(v, lo, hi) + "\"/>");
  }
  body_.push_back("<text x=\"" + num(x + 22) + "\" y=\"" + num(top + 4) + "\" font-size=\"11\">" + num(hi) + "</text>");
  body_.push_back("<text x=\"" + num(x + 22) + "\" y=\"" + num(bottom + 4) + "\" font-size=\"11\">" + num(lo) +
                  "</text>");
}

std::string Figure::str() const {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width_) + "\" height=\"" + std::to_string(height_) + "\" viewBox=\"0 0 " +
                    std::to_string(width_) + " " + std::to_string(height_) + "\">\n" +
                    "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& b : body_) out += b + "\n";
  out += "</svg>\n";
  return out;
}

}  // namespace potfuse::svg
