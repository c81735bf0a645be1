#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace mlag {

using Complex = std::complex<double>;

/// Per-class real field (u, ||q||^2, V, ...). Length equals the number of
/// vertex classes of the surface it lives on.
using ScalarField = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

enum class Backend { Torus, Octagon };

/// Triangulated fundamental domain in a single conformal chart.
///
/// Vertices are chart copies; copies on paired boundary edges share a
/// vertex class, and the classes are the points of the closed quotient
/// surface. The metric in the chart is conformal_factor * |dz|^2.
struct DiscreteSurface {
  Backend backend = Backend::Torus;
  std::vector<Complex> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> vertex_class;      // identification: vertex -> class
  std::vector<int> representative;    // class -> lowest vertex index
  std::vector<double> conformal_factor; // per vertex, lambda = g_sigma
  int num_classes = 0;
  int genus = 0;
  double area = 0.0;
  Eigen::VectorXd lumped_mass; // per class, sums to area

  // backend parameters, kept for reporting
  int grid_n = 0;
  double side = 0.0;
  double lambda0 = 0.0;
  int refinement = 0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
};

using SurfacePtr = std::shared_ptr<const DiscreteSurface>;

/// n x n periodic grid on [0, side]^2 with constant conformal factor.
SurfacePtr build_flat_torus(int n, double side, double lambda0);

/// Regular hyperbolic octagon (all angles pi/4) in the Poincare disk with
/// the side pairing a b a^-1 b^-1 c d c^-1 d^-1. Each of the eight center
/// sectors is subdivided 2^refinement times per edge.
SurfacePtr build_genus2_octagon(int refinement);

/// V - E + F of the quotient mesh.
int euler_characteristic(const DiscreteSurface& s);

/// Hyperbolic conformal factor 4 / (1 - |z|^2)^2 of the Poincare disk.
inline double poincare_factor(Complex z) {
  const double d = 1.0 - std::norm(z);
  return 4.0 / (d * d);
}

/// Hyperbolic distance in the Poincare disk.
double disk_distance(Complex a, Complex b);

/// Octagon geometry shared with the frame and cubic modules.
namespace octagon {
/// Euclidean radius of the octagon corners in the Poincare disk (2^{-1/4}).
double corner_radius();
/// Chart position of corner k (k taken mod 8).
Complex corner(int k);
/// Orientation-preserving Moebius isometry that maps side k onto side
/// k + 2 (k in {0, 1, 4, 5}) with reversed orientation.
Complex side_pairing(int k, Complex z);
/// Inverse of side_pairing(k, .).
Complex side_pairing_inverse(int k, Complex z);
/// Vertex indices along side k from corner k to corner k + 1.
std::vector<int> side_vertices(const DiscreteSurface& s, int k);
} // namespace octagon

/// P1 Laplacian on the quotient: stiffness K (flat cotangent weights,
/// symmetric, K 1 = 0) and lumped mass M (lambda-weighted), both indexed by
/// class. The weak Laplacian satisfies <Delta f, g>_M = -f^T K g.
struct LaplaceOperator {
  SparseMatrix stiffness;
  SparseMatrix mass;
  Eigen::VectorXd mass_diagonal;
};

LaplaceOperator laplacian(const DiscreteSurface& s);

/// Integral of f over the surface: f^T M 1.
double integrate(const DiscreteSurface& s, const ScalarField& f);

/// M-weighted L2 norm sqrt(f^T M f).
double l2_norm(const DiscreteSurface& s, const ScalarField& f);

} // namespace mlag
