#include "mlag/cubic.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "mlag/errors.hpp"

namespace mlag {

namespace {

// Images of p under the identity, the four side pairings and their inverses.
std::vector<Complex> pairing_images(Complex p) {
  std::vector<Complex> out{p};
  for (int k : {0, 1, 4, 5}) {
    out.push_back(octagon::side_pairing(k, p));
    out.push_back(octagon::side_pairing_inverse(k, p));
  }
  return out;
}

} // namespace

CubicDifferential constant_cubic(const SurfacePtr& s, Complex c) {
  if (s->backend != Backend::Torus)
    std::cerr << "warning: constant cubic differential on a non-torus surface is not holomorphic\n";
  CubicDifferential q;
  q.surface = s;
  q.values.assign(s->vertices.size(), c);
  q.holomorphic = s->backend == Backend::Torus;
  return q;
}

CubicDifferential synthetic_cubic(const SurfacePtr& s, const std::vector<ZeroSpec>& zeros,
                                  double amplitude) {
  if (s->genus < 2) throw InvalidArgument("synthetic cubic differentials need genus >= 2");
  if (s->backend != Backend::Octagon)
    throw InvalidArgument("synthetic cubic differentials are built on the octagon backend");
  if (!(amplitude > 0.0)) throw InvalidArgument("amplitude must be positive");
  int degree = 0;
  for (const auto& z : zeros) {
    if (z.order < 1) throw InvalidArgument("zero orders must be positive");
    if (z.vertex_class < 0 || z.vertex_class >= s->num_classes)
      throw InvalidArgument("zero class " + std::to_string(z.vertex_class) + " out of range");
    degree += z.order;
  }
  if (degree != 6 * s->genus - 6)
    throw DegreeMismatch("zero orders sum to " + std::to_string(degree) + ", expected " +
                         std::to_string(6 * s->genus - 6));

  // All chart copies of each zero, plus their images across the seams.
  std::vector<std::vector<Complex>> images(zeros.size());
  for (int v = 0; v < s->num_vertices(); ++v)
    for (std::size_t j = 0; j < zeros.size(); ++j)
      if (s->vertex_class[v] == zeros[j].vertex_class)
        for (Complex p : pairing_images(s->vertices[v])) images[j].push_back(p);

  // Class-level distance to each zero: minimum over copies of both points.
  std::vector<std::vector<double>> class_dist(
      zeros.size(), std::vector<double>(s->num_classes, std::numeric_limits<double>::infinity()));
  for (int v = 0; v < s->num_vertices(); ++v)
    for (std::size_t j = 0; j < zeros.size(); ++j)
      for (Complex p : images[j]) {
        double& d = class_dist[j][s->vertex_class[v]];
        d = std::min(d, disk_distance(s->vertices[v], p));
      }

  CubicDifferential q;
  q.surface = s;
  q.zeros = zeros;
  q.values.resize(s->vertices.size());
  for (int v = 0; v < s->num_vertices(); ++v) {
    const Complex z = s->vertices[v];
    const int c = s->vertex_class[v];
    Complex value = amplitude * std::pow(s->conformal_factor[v], 1.5);
    for (std::size_t j = 0; j < zeros.size(); ++j) {
      // phase from the nearest image, modulus tanh(d/2) from the class distance
      Complex nearest = images[j].front();
      double best = std::numeric_limits<double>::infinity();
      for (Complex p : images[j]) {
        const double d = disk_distance(z, p);
        if (d < best) {
          best = d;
          nearest = p;
        }
      }
      const Complex factor = (z - nearest) / (1.0 - std::conj(nearest) * z);
      const double modulus = std::tanh(0.5 * class_dist[j][c]);
      const Complex unit = std::abs(factor) > 0.0 ? factor / std::abs(factor) : Complex(1.0, 0.0);
      value *= std::pow(modulus * unit, zeros[j].order);
    }
    q.values[v] = value;
  }
  return q;
}

NormField norm_field(const CubicDifferential& q) {
  const auto& s = *q.surface;
  NormField out(s.num_classes);
  for (int c = 0; c < s.num_classes; ++c) {
    const int v = s.representative[c];
    out[c] = std::abs(q.values[v]) / std::pow(s.conformal_factor[v], 1.5);
  }
  return out;
}

Complex wp_pairing(const CubicDifferential& q1, const CubicDifferential& q2) {
  if (q1.surface != q2.surface) throw SurfaceMismatch("cubic differentials live on different surfaces");
  const auto& s = *q1.surface;
  Complex sum(0.0, 0.0);
  for (int c = 0; c < s.num_classes; ++c) {
    const int v = s.representative[c];
    const double l3 = std::pow(s.conformal_factor[v], 3);
    sum += s.lumped_mass[c] * q1.values[v] * std::conj(q2.values[v]) / l3;
  }
  return sum;
}

CubicDifferential scaled(const CubicDifferential& q, Complex factor) {
  CubicDifferential out = q;
  for (auto& v : out.values) v *= factor;
  return out;
}

} // namespace mlag
