#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "potfuse/dataset.hpp"
#include "potfuse/scoring.hpp"

namespace potfuse {

struct Curve {
  std::vector<double> x;
  std::vector<double> y;
};

struct Heatmap {
  std::vector<double> xs;  // cell centres
  std::vector<double> ys;
  Matrix values;           // values(iy, ix)
};

/// Everything drawn by the 2-D toy figures: one nearest-centroid model on
/// the whole dataset and its KE/KA/KB/KC members.
struct ToyFigures {
  Dataset data;
  TrainSet train;
  LinearModel model;
  ScoredMember ke, ka, kb, kc;
  Curve w_pos, w_neg;            // class-conditional discriminant densities
  std::vector<double> projections;  // training points on the plane basis
  Curve projected;               // Gaussian MLE density along the basis
  Heatmap ka_map, kb_map, kc_map;
};

/// Binary datasets use their two classes; the first class plays +1.
/// Throws InputError unless the data is 2-D.
ToyFigures build_toy(const Dataset& data, int grid = 60);

/// Trapezoid rule over a sampled curve.
double trapezoid(const Curve& c);

/// Writes the six toy figures; returns their paths in a fixed order.
std::vector<std::filesystem::path> write_toy_svgs(const ToyFigures& toy, const std::filesystem::path& out_dir);

}  // namespace potfuse
