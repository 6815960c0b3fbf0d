#pragma once

#include <random>

#include "potfuse/linear_models.hpp"

namespace testutil {

inline potfuse::Vector gaussian_vector(std::mt19937_64& rng, Eigen::Index d, double sigma = 1.0) {
  std::normal_distribution<double> n(0.0, sigma);
  potfuse::Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = n(rng);
  return v;
}

inline potfuse::Vector unit_vector(std::mt19937_64& rng, Eigen::Index d) {
  potfuse::Vector v = gaussian_vector(rng, d);
  while (v.norm() < 1e-6) v = gaussian_vector(rng, d);
  return v / v.norm();
}

// Two spherical Gaussian classes, +1 around +centre and -1 around -centre.
inline potfuse::TrainSet blobs(std::mt19937_64& rng, int n_per_class, const potfuse::Vector& centre,
                               double sigma) {
  potfuse::TrainSet t;
  t.points.resize(2 * n_per_class, centre.size());
  for (int i = 0; i < 2 * n_per_class; ++i) {
    const int label = i < n_per_class ? 1 : -1;
    t.points.row(i) = (label * centre + gaussian_vector(rng, centre.size(), sigma)).transpose();
    t.labels.push_back(label);
  }
  return t;
}

inline potfuse::Vector vec(std::initializer_list<double> values) {
  potfuse::Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

}  // namespace testutil
