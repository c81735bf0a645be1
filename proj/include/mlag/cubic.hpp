#pragma once

#include <complex>
#include <vector>

#include "mlag/surface.hpp"

namespace mlag {

struct ZeroSpec {
  int vertex_class = 0;
  int order = 0;
};

/// Cubic differential q dz^3 sampled at every chart vertex.
///
/// `holomorphic` is true only for constructions that are exactly holomorphic
/// in the chart (constants on the torus); synthetic genus-2 fields are
/// smooth with prescribed zeros but are not holomorphic sections.
struct CubicDifferential {
  SurfacePtr surface;
  std::vector<Complex> values; // per vertex copy
  std::vector<ZeroSpec> zeros;
  bool holomorphic = false;
};

/// ||q|| field type: nonnegative, per class.
using NormField = ScalarField;

/// q == c at every vertex. Warns on stderr when the surface is not the
/// torus (a constant is not a section of K^3 on the octagon).
CubicDifferential constant_cubic(const SurfacePtr& s, Complex c);

/// Smooth field with zeros of the given orders: amplitude * lambda^{3/2}
/// times a product of disk-automorphism factors, one per zero, using the
/// nearest image of each zero under the side pairings. Orders must sum to
/// 6g - 6.
CubicDifferential synthetic_cubic(const SurfacePtr& s, const std::vector<ZeroSpec>& zeros,
                                  double amplitude);

/// ||q|| = |q| / lambda^{3/2}, evaluated at each class representative.
NormField norm_field(const CubicDifferential& q);

/// Weil-Petersson pairing: integral of q1 conj(q2) / lambda^3 dA.
Complex wp_pairing(const CubicDifferential& q1, const CubicDifferential& q2);

/// q scaled by a complex factor.
CubicDifferential scaled(const CubicDifferential& q, Complex factor);

} // namespace mlag
