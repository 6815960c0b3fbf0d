#include "potfuse/toy.hpp"

#include <algorithm>
#include <cmath>

#include "potfuse/error.hpp"
#include "potfuse/svg.hpp"
#include "potfuse/util.hpp"

namespace potfuse {
namespace {

Curve sample_pdf(const Kde1D& k, double lo, double hi, int n) {
  Curve c;
  for (int i = 0; i < n; ++i) {
    const double t = lo + (hi - lo) * i / (n - 1);
    c.x.push_back(t);
    c.y.push_back(k.pdf(t));
  }
  return c;
}

Heatmap potential_map(const ScoredMember& m, double x0, double x1, double y0, double y1, int grid) {
  Heatmap h;
  h.values.resize(grid, grid);
  for (int i = 0; i < grid; ++i) {
    h.xs.push_back(x0 + (x1 - x0) * (i + 0.5) / grid);
    h.ys.push_back(y0 + (y1 - y0) * (i + 0.5) / grid);
  }
  for (int iy = 0; iy < grid; ++iy) {
    for (int ix = 0; ix < grid; ++ix) {
      h.values(iy, ix) = m.score(Vector{{h.xs[static_cast<std::size_t>(ix)], h.ys[static_cast<std::size_t>(iy)]}});
    }
  }
  return h;
}

struct Box {
  double x0, x1, y0, y1;
};

Box padded_box(const Matrix& pts) {
  const double xmin = pts.col(0).minCoeff(), xmax = pts.col(0).maxCoeff();
  const double ymin = pts.col(1).minCoeff(), ymax = pts.col(1).maxCoeff();
  const double px = 0.25 * (xmax - xmin) + 1e-9, py = 0.25 * (ymax - ymin) + 1e-9;
  return {xmin - px, xmax + px, ymin - py, ymax + py};
}

void draw_points(svg::Figure& fig, const TrainSet& t) {
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t.labels[static_cast<std::size_t>(i)] == 1) {
      fig.circle(t.points(i, 0), t.points(i, 1), 3.0, "#c0392b");
    } else {
      fig.triangle(t.points(i, 0), t.points(i, 1), 3.5, "#27ae60");
    }
  }
}

/// Segment of the decision line inside the box.
void draw_boundary(svg::Figure& fig, const LinearModel& m, const Box& b) {
  const Vector& n = m.hyperplane().normal();
  const double off = m.hyperplane().offset();
  if (std::abs(n(1)) > std::abs(n(0))) {
    fig.line(b.x0, -(off + n(0) * b.x0) / n(1), b.x1, -(off + n(0) * b.x1) / n(1), "#000", 2.0);
  } else {
    fig.line(-(off + n(1) * b.y0) / n(0), b.y0, -(off + n(1) * b.y1) / n(0), b.y1, "#000", 2.0);
  }
}

std::string heatmap_svg(const Heatmap& h, const ToyFigures& toy, const Box& b, const std::string& title) {
  svg::Figure fig(b.x0, b.x1, b.y0, b.y1);
  fig.title(title);
  const double dx = (b.x1 - b.x0) / static_cast<double>(h.xs.size());
  const double dy = (b.y1 - b.y0) / static_cast<double>(h.ys.size());
  for (std::size_t iy = 0; iy < h.ys.size(); ++iy) {
    for (std::size_t ix = 0; ix < h.xs.size(); ++ix) {
      const double v = h.values(static_cast<Eigen::Index>(iy), static_cast<Eigen::Index>(ix));
      fig.rect(h.xs[ix] - dx / 2, h.ys[iy] - dy / 2, h.xs[ix] + dx / 2, h.ys[iy] + dy / 2,
               svg::diverging_color(v, -0.5, 0.5));
    }
  }
  draw_points(fig, toy.train);
  draw_boundary(fig, toy.model, b);
  fig.axes("x1", "x2");
  fig.colorbar(-0.5, 0.5);
  return fig.str();
}

}  // namespace

double trapezoid(const Curve& c) {
  double s = 0.0;
  for (std::size_t i = 1; i < c.x.size(); ++i) s += 0.5 * (c.y[i] + c.y[i - 1]) * (c.x[i] - c.x[i - 1]);
  return s;
}

ToyFigures build_toy(const Dataset& data, int grid) {
  validate(data);
  if (data.dim() != 2) throw InputError("toy figures need 2-D data, got " + std::to_string(data.dim()) + " features");
  if (grid < 2) throw InputError("toy grid must have at least 2 cells per side");

  TrainSet train;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    if (data.labels[i] <= 1) rows.push_back(i);
  }
  train.points.resize(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    train.points.row(static_cast<Eigen::Index>(r)) = data.features.row(static_cast<Eigen::Index>(rows[r]));
    train.labels.push_back(data.labels[rows[r]] == 0 ? 1 : -1);
  }
  const LinearModel model = train_nearest_centroid(train);

  ToyFigures toy{data,
                 train,
                 model,
                 fit_member(model, train, parse_strategy("ke")),
                 fit_member(model, train, parse_strategy("ka")),
                 fit_member(model, train, parse_strategy("kb")),
                 fit_member(model, train, parse_strategy("kc")),
                 {}, {}, {}, {}, {}, {}, {}};

  const Kde1D& wp = *toy.ke.w_pos;
  const Kde1D& wn = *toy.ke.w_neg;
  const auto [smin_p, smax_p] = std::minmax_element(wp.samples().begin(), wp.samples().end());
  const auto [smin_n, smax_n] = std::minmax_element(wn.samples().begin(), wn.samples().end());
  const double h = std::max(wp.bandwidth(), wn.bandwidth());
  const double lo = std::min(*smin_p, *smin_n) - 6.0 * h;
  const double hi = std::max(*smax_p, *smax_n) + 6.0 * h;
  toy.w_pos = sample_pdf(wp, lo, hi, 801);
  toy.w_neg = sample_pdf(wn, lo, hi, 801);

  for (Eigen::Index i = 0; i < train.size(); ++i) {
    toy.projections.push_back(model.project(train.points.row(i).transpose())(0));
  }
  const GaussianMle& g = *toy.ka.y_global;
  const double sd = std::sqrt(g.covariance()(0, 0));
  const auto [pmin, pmax] = std::minmax_element(toy.projections.begin(), toy.projections.end());
  const double plo = std::min(*pmin, g.mean()(0) - 4 * sd), phi = std::max(*pmax, g.mean()(0) + 4 * sd);
  for (int i = 0; i < 401; ++i) {
    const double t = plo + (phi - plo) * i / 400.0;
    toy.projected.x.push_back(t);
    toy.projected.y.push_back(g.pdf(Vector{{t}}));
  }

  const Box b = padded_box(train.points);
  toy.ka_map = potential_map(toy.ka, b.x0, b.x1, b.y0, b.y1, grid);
  toy.kb_map = potential_map(toy.kb, b.x0, b.x1, b.y0, b.y1, grid);
  toy.kc_map = potential_map(toy.kc, b.x0, b.x1, b.y0, b.y1, grid);
  return toy;
}

std::vector<std::filesystem::path> write_toy_svgs(const ToyFigures& toy, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Box b = padded_box(toy.train.points);
  std::vector<std::pair<std::string, std::string>> files;

  {
    svg::Figure fig(b.x0, b.x1, b.y0, b.y1);
    fig.title("Data and nearest-centroid decision boundary");
    draw_points(fig, toy.train);
    draw_boundary(fig, toy.model, b);
    const Vector centre = toy.train.points.colwise().mean().transpose();
    const Vector on_plane = centre - toy.model.discriminant(centre) * toy.model.hyperplane().normal();
    const double len = 0.15 * std::min(b.x1 - b.x0, b.y1 - b.y0);
    const Vector n_tip = on_plane + len * toy.model.hyperplane().normal();
    const Vector b_tip = on_plane + len * Vector(toy.model.basis().vector(0));
    fig.arrow(on_plane(0), on_plane(1), n_tip(0), n_tip(1), "#8e44ad");
    fig.arrow(on_plane(0), on_plane(1), b_tip(0), b_tip(1), "#2980b9");
    fig.label(n_tip(0), n_tip(1), "n", "#8e44ad");
    fig.label(b_tip(0), b_tip(1), "b1", "#2980b9");
    fig.axes("x1", "x2");
    files.emplace_back("toy_scatter.svg", fig.str());
  }
  {
    const double ymax = 1.05 * std::max(*std::max_element(toy.w_pos.y.begin(), toy.w_pos.y.end()),
                                        *std::max_element(toy.w_neg.y.begin(), toy.w_neg.y.end()));
    svg::Figure fig(toy.w_pos.x.front(), toy.w_pos.x.back(), 0.0, ymax);
    fig.title("Class-conditional densities of the discriminant");
    fig.polyline(toy.w_pos.x, toy.w_pos.y, "#c0392b");
    fig.polyline(toy.w_neg.x, toy.w_neg.y, "#27ae60");
    fig.line(0.0, 0.0, 0.0, ymax, "#777", 1.0);
    fig.axes("discriminant", "density");
    files.emplace_back("toy_discriminant_density.svg", fig.str());
  }
  {
    const int bins = 30;
    const double lo = toy.projected.x.front(), hi = toy.projected.x.back();
    std::vector<double> counts(bins, 0.0);
    for (double p : toy.projections) {
      const int k = std::clamp(static_cast<int>((p - lo) / (hi - lo) * bins), 0, bins - 1);
      counts[static_cast<std::size_t>(k)] += 1.0;
    }
    const double width = (hi - lo) / bins;
    for (double& c : counts) c /= static_cast<double>(toy.projections.size()) * width;
    const double ymax = 1.05 * std::max(*std::max_element(counts.begin(), counts.end()),
                                        *std::max_element(toy.projected.y.begin(), toy.projected.y.end()));
    svg::Figure fig(lo, hi, 0.0, ymax);
    fig.title("Projection onto the plane basis: histogram and Gaussian MLE");
    for (int k = 0; k < bins; ++k) {
      fig.rect(lo + k * width, 0.0, lo + (k + 1) * width, counts[static_cast<std::size_t>(k)], "#95a5a6", 0.6);
    }
    fig.polyline(toy.projected.x, toy.projected.y, "#2c3e50");
    fig.axes("projection on b1", "density");
    files.emplace_back("toy_projected_density.svg", fig.str());
  }
  files.emplace_back("toy_potential_ka.svg", heatmap_svg(toy.ka_map, toy, b, "KA potential (Gaussian along the plane)"));
  files.emplace_back("toy_potential_kb.svg", heatmap_svg(toy.kb_map, toy, b, "KB potential (class Gaussians)"));
  files.emplace_back("toy_potential_kc.svg", heatmap_svg(toy.kc_map, toy, b, "KC potential (class product KDE)"));

  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    const auto path = out_dir / name;
    write_file_atomic(path, content);
    written.push_back(path);
  }
  return written;
}

}  // namespace potfuse
