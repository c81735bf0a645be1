#include "mlag/frame.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "mlag/errors.hpp"

namespace mlag {

std::vector<double> s_from_u(const ScalarField& u, const DiscreteSurface& s) {
  if (u.size() != s.num_classes) throw DimensionMismatch("u has the wrong number of classes");
  std::vector<double> out(s.vertices.size());
  for (int v = 0; v < s.num_vertices(); ++v)
    out[v] = std::sqrt(std::exp(u[s.vertex_class[v]]) * s.conformal_factor[v] / 2.0);
  return out;
}

AnalyticSampler::AnalyticSampler(std::function<double(Complex)> log_s,
                                 std::function<Complex(Complex)> ls_z,
                                 std::function<Complex(Complex)> q, bool holomorphic)
    : log_s_(std::move(log_s)), ls_z_(std::move(ls_z)), q_(std::move(q)), holomorphic_(holomorphic) {}

FramePoint AnalyticSampler::sample(Complex z) const {
  return {std::exp(log_s_(z)), ls_z_(z), q_(z)};
}

std::unique_ptr<FieldSampler> trivial_disk_sampler() {
  // s = sqrt(2) / (1 - |z|^2), (log s)_z = conj(z) / (1 - |z|^2)
  return std::make_unique<AnalyticSampler>(
      [](Complex z) { return 0.5 * std::log(2.0) - std::log(1.0 - std::norm(z)); },
      [](Complex z) { return std::conj(z) / (1.0 - std::norm(z)); },
      [](Complex) { return Complex(0.0, 0.0); }, true);
}

std::unique_ptr<FieldSampler> constant_sampler(double s, Complex q) {
  if (!(s > 0.0)) throw InvalidArgument("s must be positive");
  const double ls = std::log(s);
  return std::make_unique<AnalyticSampler>([ls](Complex) { return ls; },
                                           [](Complex) { return Complex(0.0, 0.0); },
                                           [q](Complex) { return q; }, true);
}

namespace {
double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }
} // namespace

MeshSampler::MeshSampler(const CubicDifferential& q, const ScalarField& u)
    : surface_(q.surface), q_(q.values), holomorphic_(q.holomorphic) {
  const DiscreteSurface& s = *surface_;
  if (u.size() != s.num_classes) throw DimensionMismatch("u has the wrong number of classes");
  const int nv = s.num_vertices();
  std::vector<std::set<int>> ring(nv);
  for (const auto& t : s.triangles)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) ring[t[a]].insert(t[b]);

  std::vector<double> ls(nv);
  for (int v = 0; v < nv; ++v)
    ls[v] = 0.5 * (u[s.vertex_class[v]] + std::log(s.conformal_factor[v]) - std::log(2.0));

  fit_.resize(nv);
  for (int v = 0; v < nv; ++v) {
    std::set<int> pts = ring[v];
    pts.insert(v);
    if (pts.size() < 8) {
      std::set<int> two = pts;
      for (int w : pts) two.insert(ring[w].begin(), ring[w].end());
      pts = std::move(two);
    }
    Eigen::MatrixXd A(pts.size(), 6);
    Eigen::VectorXd b(pts.size());
    int r = 0;
    for (int w : pts) {
      const Complex d = s.vertices[w] - s.vertices[v];
      const double x = d.real(), y = d.imag();
      A.row(r) << 1.0, x, y, x * x, x * y, y * y;
      b[r] = ls[w];
      ++r;
    }
    fit_[v] = A.colPivHouseholderQr().solve(b);
  }
}

MeshSampler::Located MeshSampler::locate(Complex z) const {
  const DiscreteSurface& s = *surface_;
  Located best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < static_cast<int>(s.triangles.size()); ++t) {
    const auto& tri = s.triangles[t];
    const Complex a = s.vertices[tri[0]], b = s.vertices[tri[1]], c = s.vertices[tri[2]];
    const double area2 = cross(b - a, c - a);
    if (area2 == 0.0) continue;
    const double l0 = cross(b - z, c - z) / area2;
    const double l1 = cross(c - z, a - z) / area2;
    const double l2 = 1.0 - l0 - l1;
    const double m = std::min({l0, l1, l2});
    if (m > best_min) {
      best_min = m;
      best.tri = t;
      best.bary[0] = l0;
      best.bary[1] = l1;
      best.bary[2] = l2;
    }
    if (m >= 0.0) break;
  }
  if (best.tri < 0 || best_min < -1e-9) {
    std::ostringstream msg;
    msg << "point " << z << " lies outside the chart patch";
    throw InvalidArgument(msg.str());
  }
  return best;
}

double MeshSampler::model(int v, Complex z, double* gx, double* gy) const {
  const Complex d = z - surface_->vertices[v];
  const double x = d.real(), y = d.imag();
  const auto& c = fit_[v];
  if (gx) *gx = c[1] + 2.0 * c[3] * x + c[4] * y;
  if (gy) *gy = c[2] + c[4] * x + 2.0 * c[5] * y;
  return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
}

double MeshSampler::log_s(Complex z) const {
  const Located loc = locate(z);
  const auto& tri = surface_->triangles[loc.tri];
  double v = 0.0;
  for (int i = 0; i < 3; ++i) v += loc.bary[i] * model(tri[i], z, nullptr, nullptr);
  return v;
}

Complex MeshSampler::q(Complex z) const {
  const Located loc = locate(z);
  const auto& tri = surface_->triangles[loc.tri];
  Complex v(0.0, 0.0);
  for (int i = 0; i < 3; ++i) v += loc.bary[i] * q_[tri[i]];
  return v;
}

FramePoint MeshSampler::sample(Complex z) const {
  const DiscreteSurface& s = *surface_;
  const Located loc = locate(z);
  const auto& tri = s.triangles[loc.tri];
  const Complex a = s.vertices[tri[0]], b = s.vertices[tri[1]], c = s.vertices[tri[2]];
  const double area2 = cross(b - a, c - a);
  // gradients of the barycentric coordinates: rotated opposite edge / (2 area)
  const Complex opp[3] = {c - b, a - c, b - a};
  double value = 0.0, gx = 0.0, gy = 0.0;
  Complex qv(0.0, 0.0);
  for (int i = 0; i < 3; ++i) {
    double mx = 0.0, my = 0.0;
    const double m = model(tri[i], z, &mx, &my);
    const double bx = -opp[i].imag() / area2;
    const double by = opp[i].real() / area2;
    value += loc.bary[i] * m;
    gx += loc.bary[i] * mx + bx * m;
    gy += loc.bary[i] * my + by * m;
    qv += loc.bary[i] * q_[tri[i]];
  }
  return {std::exp(value), 0.5 * Complex(gx, -gy), qv};
}

double FrameSheet::max_unitarity() const {
  double m = 0.0;
  for (const auto& d : defects) m = std::max(m, d.unitarity);
  return m;
}

double FrameSheet::max_determinant() const {
  double m = 0.0;
  for (const auto& d : defects) m = std::max(m, d.determinant);
  return m;
}

namespace {

Su21Matrix generator(const FieldSampler& f, Complex z, Complex zdot) {
  const FramePoint p = f.sample(z);
  const auto [A, B] = maurer_cartan(p.s, p.ls_z, p.q);
  return A * zdot + B * std::conj(zdot);
}

void project(Su21Matrix& F) {
  const Su21Matrix e = eta<double>();
  const Su21Matrix X = e * F.adjoint() * e * F;
  F = F * (3.0 * Su21Matrix::Identity() - X) / 2.0;
  F /= std::pow(F.determinant(), 1.0 / 3.0);
}

} // namespace

FrameSheet integrate_frame(const FieldSampler& f, const std::vector<Complex>& polyline,
                           const FrameOptions& opts) {
  if (polyline.size() < 2) throw InvalidArgument("path needs at least two points");
  if (!(opts.step > 0.0)) throw InvalidArgument("step must be positive");
  FrameSheet sheet;
  Su21Matrix F = Su21Matrix::Identity();

  auto record = [&](Complex z) {
    sheet.path.push_back(z);
    sheet.frames.push_back(F);
    sheet.s_field.push_back(f.sample(z).s);
    const auto [du, dd] = su21_defect(F);
    FrameDefect d{du, dd, 0.0};
    if (opts.flatness) d.flatness = flatness_defect(f, z, opts.flatness_cell).value();
    sheet.defects.push_back(d);
  };
  record(polyline.front());

  for (std::size_t k = 0; k + 1 < polyline.size(); ++k) {
    const Complex z0 = polyline[k], z1 = polyline[k + 1];
    const Complex zdot = z1 - z0;
    const double len = std::abs(zdot);
    sheet.length += len;
    if (len == 0.0) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(len / opts.step - 1e-12)));
    const double dt = 1.0 / n;
    for (int i = 0; i < n; ++i) {
      const Complex za = z0 + zdot * (i * dt);
      const Complex zm = z0 + zdot * ((i + 0.5) * dt);
      const Complex zb = z0 + zdot * ((i + 1) * dt);
      const Su21Matrix Ga = generator(f, za, zdot);
      const Su21Matrix Gm = generator(f, zm, zdot);
      const Su21Matrix Gb = generator(f, zb, zdot);
      const Su21Matrix k1 = F * Ga;
      const Su21Matrix k2 = (F + 0.5 * dt * k1) * Gm;
      const Su21Matrix k3 = (F + 0.5 * dt * k2) * Gm;
      const Su21Matrix k4 = (F + dt * k3) * Gb;
      const double before = su21_defect(F).first;
      F += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double growth = su21_defect(F).first - before;
      if (!(growth <= opts.max_step_defect)) {
        std::ostringstream msg;
        msg << "unitarity defect grew by " << growth << " in one step at z = " << zb;
        throw StepTooLarge(msg.str());
      }
      if (opts.project) project(F);
      record(zb);
    }
  }
  return sheet;
}

FlatnessDefect flatness_defect(const FieldSampler& f, Complex z, double h) {
  if (!(h > 0.0)) throw InvalidArgument("cell size must be positive");
  const Complex ex(h, 0.0), ey(0.0, h);
  const Complex qx = (f.q(z + ex) - f.q(z - ex)) / (2.0 * h);
  const Complex qy = (f.q(z + ey) - f.q(z - ey)) / (2.0 * h);
  FlatnessDefect d;
  d.holomorphy = std::abs(0.5 * (qx + Complex(0.0, 1.0) * qy));

  const double L0 = 2.0 * f.log_s(z);
  const double lap = (2.0 * (f.log_s(z + ex) + f.log_s(z - ex) + f.log_s(z + ey) + f.log_s(z - ey)) -
                      4.0 * L0) / (h * h);
  const double s = std::exp(0.5 * L0);
  const double q2 = std::norm(f.q(z));
  d.structure = std::abs(0.25 * lap - q2 / std::pow(s, 4) - s * s);
  return d;
}

double loop_holonomy_defect(const FieldSampler& f, const std::vector<Complex>& loop,
                            const FrameOptions& opts) {
  if (loop.size() < 3 || std::abs(loop.front() - loop.back()) > 1e-14)
    throw InvalidArgument("loop must be closed");
  const FrameSheet sheet = integrate_frame(f, loop, opts);
  return (sheet.frames.back() - Su21Matrix::Identity()).cwiseAbs().maxCoeff();
}

std::vector<Complex> square_loop(Complex c, double a) {
  return {c, c + Complex(a, 0.0), c + Complex(a, a), c + Complex(0.0, a), c};
}

} // namespace mlag
