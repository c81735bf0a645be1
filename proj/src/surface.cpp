#include "mlag/surface.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "mlag/errors.hpp"

namespace mlag {

namespace {

using std::numbers::pi;

// Degree-5 seven-point rule on the reference triangle (Dunavant).
struct QuadPoint {
  double b0, b1, b2, w;
};

const std::array<QuadPoint, 7>& triangle_rule() {
  static const std::array<QuadPoint, 7> rule = [] {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456;
    const double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
    return std::array<QuadPoint, 7>{{{1.0 / 3, 1.0 / 3, 1.0 / 3, w0},
                                     {a1, b1, b1, w1},
                                     {b1, a1, b1, w1},
                                     {b1, b1, a1, w1},
                                     {a2, b2, b2, w2},
                                     {b2, a2, b2, w2},
                                     {b2, b2, a2, w2}}};
  }();
  return rule;
}

double signed_area(Complex a, Complex b, Complex c) {
  return 0.5 * std::imag(std::conj(b - a) * (c - a));
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Assigns class ids in order of the lowest vertex of each class.
void assign_classes(DiscreteSurface& s, UnionFind& uf) {
  const int nv = s.num_vertices();
  std::vector<int> root_to_class(nv, -1);
  s.vertex_class.assign(nv, -1);
  s.representative.clear();
  for (int v = 0; v < nv; ++v) {
    const int r = uf.find(v);
    if (root_to_class[r] < 0) {
      root_to_class[r] = static_cast<int>(s.representative.size());
      s.representative.push_back(v);
    }
    s.vertex_class[v] = root_to_class[r];
  }
  s.num_classes = static_cast<int>(s.representative.size());
}

void assemble_mass(DiscreteSurface& s, const std::function<double(Complex)>& lambda) {
  s.lumped_mass = Eigen::VectorXd::Zero(s.num_classes);
  for (const auto& tri : s.triangles) {
    const Complex p0 = s.vertices[tri[0]], p1 = s.vertices[tri[1]], p2 = s.vertices[tri[2]];
    const double area = signed_area(p0, p1, p2);
    if (!(area > 0.0) || !std::isfinite(area))
      throw MeshError("degenerate or inverted triangle");
    std::array<double, 3> local{0.0, 0.0, 0.0};
    for (const auto& qp : triangle_rule()) {
      const Complex x = qp.b0 * p0 + qp.b1 * p1 + qp.b2 * p2;
      const double l = lambda(x) * qp.w * area;
      local[0] += l * qp.b0;
      local[1] += l * qp.b1;
      local[2] += l * qp.b2;
    }
    for (int a = 0; a < 3; ++a) s.lumped_mass[s.vertex_class[tri[a]]] += local[a];
  }
  s.area = s.lumped_mass.sum();
  if (!(s.area > 0.0) || !std::isfinite(s.area)) throw MeshError("non-positive surface area");
}

// ---------------------------------------------------------------------------
// Octagon geometry

constexpr double kHalfSide = pi / 8.0; // angular half-width of a side

double corner_angle(int k) { return pi / 8.0 + k * pi / 4.0; }
double side_mid_angle(int k) { return corner_angle(k) + kHalfSide; }

// Geodesic circle carrying side k: center distance d, radius sqrt(d^2 - 1).
double side_circle_distance() {
  const double r = octagon::corner_radius();
  return (r * r + 1.0) / (2.0 * r * std::cos(kHalfSide));
}

int mod8(int k) { return ((k % 8) + 8) % 8; }

} // namespace

double disk_distance(Complex a, Complex b) {
  const double num = std::norm(a - b);
  const double den = (1.0 - std::norm(a)) * (1.0 - std::norm(b));
  return std::acosh(1.0 + 2.0 * num / den);
}

namespace octagon {

double corner_radius() { return std::pow(2.0, -0.25); }

Complex corner(int k) { return std::polar(corner_radius(), corner_angle(mod8(k))); }

namespace {
Complex side_center(int k) { return std::polar(side_circle_distance(), side_mid_angle(mod8(k))); }

// Inversion in the geodesic circle of side k.
Complex reflect_in_side(int k, Complex z) {
  const double d = side_circle_distance();
  const Complex c = side_center(k);
  return c + (d * d - 1.0) / std::conj(z - c);
}

// Euclidean reflection across the line through 0 at angle psi.
Complex reflect_line(double psi, Complex z) { return std::polar(1.0, 2.0 * psi) * std::conj(z); }

void check_generator(int k) {
  if (k != 0 && k != 1 && k != 4 && k != 5)
    throw InvalidArgument("side pairing generator must be one of 0, 1, 4, 5");
}
} // namespace

Complex side_pairing(int k, Complex z) {
  check_generator(k);
  // corner k -> corner k+3, corner k+1 -> corner k+2, then fold across side k+2
  const double psi = 0.5 * (corner_angle(k) + corner_angle(k + 3));
  return reflect_in_side(k + 2, reflect_line(psi, z));
}

Complex side_pairing_inverse(int k, Complex z) {
  check_generator(k);
  const double psi = 0.5 * (corner_angle(k) + corner_angle(k + 3));
  return reflect_line(psi, reflect_in_side(k + 2, z));
}

std::vector<int> side_vertices(const DiscreteSurface& s, int k) {
  if (s.backend != Backend::Octagon) throw InvalidArgument("side_vertices needs the octagon backend");
  const int n = 1 << s.refinement;
  // Layout produced by build_genus2_octagon (see index helper there).
  const int rays = 8 * n;
  const int per_sector = (n - 1) * n / 2; // interior points with i, j >= 1
  auto ray = [&](int kk, int m) { return 1 + mod8(kk) * n + (m - 1); };
  std::vector<int> out;
  out.reserve(n + 1);
  out.push_back(ray(k, n));
  for (int m = 1; m < n; ++m) {
    // sector k interior point (i, j) = (n - m, m) sits at offset of the
    // enumeration i >= 1, j >= 1, i + j <= n in row-major order of j then i
    int offset = 0;
    for (int jj = 1; jj < m; ++jj) offset += n - jj;
    offset += (n - m) - 1;
    out.push_back(1 + rays + mod8(k) * per_sector + offset);
  }
  out.push_back(ray(k + 1, n));
  return out;
}

} // namespace octagon

SurfacePtr build_flat_torus(int n, double side, double lambda0) {
  if (n < 4) throw MeshError("torus grid needs n >= 4, got " + std::to_string(n));
  if (!(side > 0.0)) throw InvalidArgument("torus side must be positive");
  if (!(lambda0 > 0.0)) throw InvalidArgument("conformal factor must be positive");

  auto s = std::make_shared<DiscreteSurface>();
  s->backend = Backend::Torus;
  s->genus = 1;
  s->grid_n = n;
  s->side = side;
  s->lambda0 = lambda0;

  const double h = side / n;
  const int m = n + 1;
  auto idx = [m](int i, int j) { return i + m * j; };
  s->vertices.resize(m * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) s->vertices[idx(i, j)] = Complex(i * h, j * h);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      s->triangles.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
      s->triangles.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
    }

  UnionFind uf(m * m);
  for (int k = 0; k <= n; ++k) {
    uf.unite(idx(0, k), idx(n, k));
    uf.unite(idx(k, 0), idx(k, n));
  }
  assign_classes(*s, uf);
  s->conformal_factor.assign(s->vertices.size(), lambda0);
  assemble_mass(*s, [lambda0](Complex) { return lambda0; });
  return s;
}

SurfacePtr build_genus2_octagon(int refinement) {
  if (refinement < 1) throw InvalidArgument("octagon refinement must be >= 1");
  if (refinement > 7) throw InvalidArgument("octagon refinement above 7 is not supported");

  auto s = std::make_shared<DiscreteSurface>();
  s->backend = Backend::Octagon;
  s->genus = 2;
  s->refinement = refinement;

  const int n = 1 << refinement;
  const double d = side_circle_distance();

  // Radial projection onto the geodesic arc of side k in direction phi.
  auto arc_point = [d](int k, double phi) {
    const double c = std::cos(phi - side_mid_angle(k));
    const double r = d * c - std::sqrt(d * d * c * c - 1.0);
    return std::polar(r, phi);
  };
  // Sector k, barycentric grid (i toward corner k, j toward corner k+1):
  // the straight chord point is pushed radially onto the arc, then scaled.
  auto sector_point = [&](int k, int i, int j) -> Complex {
    if (i + j == 0) return Complex(0.0, 0.0);
    const Complex chord = (static_cast<double>(i) * octagon::corner(k) +
                           static_cast<double>(j) * octagon::corner(k + 1)) /
                          static_cast<double>(i + j);
    return (static_cast<double>(i + j) / n) * arc_point(k, std::arg(chord));
  };

  // Vertex layout: 0 = center; rays 1 .. 8n (ray k point m at 1 + k n + m - 1,
  // ray points at m = n are the corners); then per sector the interior points
  // (i, j >= 1, i + j <= n).
  const int rays = 8 * n;
  const int per_sector = (n - 1) * n / 2;
  s->vertices.assign(1 + rays + 8 * per_sector, Complex());
  auto ray = [n](int k, int m) { return 1 + mod8(k) * n + (m - 1); };
  std::vector<std::vector<int>> interior(8);
  for (int k = 0; k < 8; ++k) {
    for (int m = 1; m <= n; ++m)
      s->vertices[ray(k, m)] = (static_cast<double>(m) / n) * octagon::corner(k);
    int next = 1 + rays + k * per_sector;
    interior[k].assign((n + 1) * (n + 1), -1);
    for (int j = 1; j < n; ++j)
      for (int i = 1; i + j <= n; ++i) {
        interior[k][i + (n + 1) * j] = next;
        s->vertices[next++] = sector_point(k, i, j);
      }
  }
  auto index = [&](int k, int i, int j) {
    if (i == 0 && j == 0) return 0;
    if (j == 0) return ray(k, i);
    if (i == 0) return ray(k + 1, j);
    return interior[k][i + (n + 1) * j];
  };
  for (int k = 0; k < 8; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i + j < n; ++i) {
        s->triangles.push_back({index(k, i, j), index(k, i + 1, j), index(k, i, j + 1)});
        if (i + j < n - 1)
          s->triangles.push_back({index(k, i + 1, j), index(k, i + 1, j + 1), index(k, i, j + 1)});
      }

  UnionFind uf(s->num_vertices());
  for (int k : {0, 1, 4, 5}) {
    const auto a = octagon::side_vertices(*s, k);
    const auto b = octagon::side_vertices(*s, k + 2);
    for (int m = 0; m <= n; ++m) uf.unite(a[m], b[n - m]);
  }
  assign_classes(*s, uf);

  s->conformal_factor.resize(s->vertices.size());
  for (std::size_t v = 0; v < s->vertices.size(); ++v)
    s->conformal_factor[v] = poincare_factor(s->vertices[v]);
  assemble_mass(*s, poincare_factor);

  if (euler_characteristic(*s) != 2 - 2 * s->genus)
    throw MeshError("octagon identification does not produce a genus-2 quotient");
  return s;
}

int euler_characteristic(const DiscreteSurface& s) {
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : s.triangles)
    for (int a = 0; a < 3; ++a) {
      int i = tri[a], j = tri[(a + 1) % 3];
      if (i > j) std::swap(i, j);
      ++edge_count[{i, j}];
    }
  int interior = 0, boundary = 0;
  for (const auto& [edge, count] : edge_count) {
    if (count == 2)
      ++interior;
    else if (count == 1)
      ++boundary;
    else
      throw MeshError("non-manifold edge in triangulation");
  }
  if (boundary % 2 != 0) throw MeshError("unpaired boundary edge");
  const int edges = interior + boundary / 2;
  return s.num_classes - edges + static_cast<int>(s.triangles.size());
}

LaplaceOperator laplacian(const DiscreteSurface& s) {
  std::map<std::pair<int, int>, double> upper;
  for (const auto& tri : s.triangles) {
    for (int a = 0; a < 3; ++a) {
      const int ia = tri[a], ib = tri[(a + 1) % 3], ic = tri[(a + 2) % 3];
      // cotangent of the angle at ic, opposite edge (ia, ib)
      const Complex u = s.vertices[ia] - s.vertices[ic];
      const Complex v = s.vertices[ib] - s.vertices[ic];
      const double cross = std::imag(std::conj(u) * v);
      const double dot = std::real(std::conj(u) * v);
      const double w = 0.5 * dot / cross;
      if (!std::isfinite(w)) throw MeshError("non-finite cotangent weight");
      int ca = s.vertex_class[ia], cb = s.vertex_class[ib];
      if (ca == cb) continue;
      if (ca > cb) std::swap(ca, cb);
      upper[{ca, cb}] -= w;
    }
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * upper.size() + s.num_classes);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(s.num_classes);
  for (const auto& [key, value] : upper) {
    trips.emplace_back(key.first, key.second, value);
    trips.emplace_back(key.second, key.first, value);
    diag[key.first] -= value;
    diag[key.second] -= value;
  }
  for (int c = 0; c < s.num_classes; ++c) trips.emplace_back(c, c, diag[c]);

  LaplaceOperator op;
  op.stiffness.resize(s.num_classes, s.num_classes);
  op.stiffness.setFromTriplets(trips.begin(), trips.end());
  op.mass_diagonal = s.lumped_mass;
  op.mass.resize(s.num_classes, s.num_classes);
  std::vector<Eigen::Triplet<double>> mtrips;
  for (int c = 0; c < s.num_classes; ++c) mtrips.emplace_back(c, c, s.lumped_mass[c]);
  op.mass.setFromTriplets(mtrips.begin(), mtrips.end());
  return op;
}

double integrate(const DiscreteSurface& s, const ScalarField& f) {
  if (f.size() != s.num_classes)
    throw DimensionMismatch("field has " + std::to_string(f.size()) + " entries, surface has " +
                            std::to_string(s.num_classes) + " classes");
  return s.lumped_mass.dot(f);
}

double l2_norm(const DiscreteSurface& s, const ScalarField& f) {
  if (f.size() != s.num_classes) throw DimensionMismatch("field size does not match surface");
  return std::sqrt(s.lumped_mass.dot(f.cwiseAbs2()));
}

} // namespace mlag
