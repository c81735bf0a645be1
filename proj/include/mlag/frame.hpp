#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mlag/cubic.hpp"
#include "mlag/su21.hpp"
#include "mlag/surface.hpp"

namespace mlag {

/// s = sqrt(e^u lambda / 2) per vertex copy, so that e^u g = 2 s^2 |dz|^2.
std::vector<double> s_from_u(const ScalarField& u, const DiscreteSurface& s);

/// Local data of (s, q) at a chart point.
struct FramePoint {
  double s = 0.0;
  Complex ls_z;  // (log s)_z
  Complex q;
};

/// Pointwise access to s, (log s)_z and q on a simply connected chart patch.
class FieldSampler {
public:
  virtual ~FieldSampler() = default;
  virtual FramePoint sample(Complex z) const = 0;
  /// log s alone; used by the finite-difference flatness check.
  virtual double log_s(Complex z) const { return std::log(sample(z).s); }
  virtual Complex q(Complex z) const { return sample(z).q; }
  virtual bool holomorphic() const { return false; }
};

/// Closed-form sampler from callbacks for log s, its z-derivative and q.
class AnalyticSampler : public FieldSampler {
public:
  AnalyticSampler(std::function<double(Complex)> log_s, std::function<Complex(Complex)> ls_z,
                  std::function<Complex(Complex)> q, bool holomorphic);
  FramePoint sample(Complex z) const override;
  double log_s(Complex z) const override { return log_s_(z); }
  Complex q(Complex z) const override { return q_(z); }
  bool holomorphic() const override { return holomorphic_; }

private:
  std::function<double(Complex)> log_s_;
  std::function<Complex(Complex)> ls_z_;
  std::function<Complex(Complex)> q_;
  bool holomorphic_;
};

/// u = 0, q = 0, lambda = 4 / (1 - |z|^2)^2: the totally geodesic disk.
std::unique_ptr<FieldSampler> trivial_disk_sampler();

/// Constant s and q (constant-data torus solutions).
std::unique_ptr<FieldSampler> constant_sampler(double s, Complex q);

/// Mesh fields: per-vertex least-squares quadratic fit of log s on the
/// 1-ring (2-ring when the 1-ring has fewer than six points), blended
/// barycentrically inside the containing triangle; q interpolated linearly.
class MeshSampler : public FieldSampler {
public:
  MeshSampler(const CubicDifferential& q, const ScalarField& u);
  FramePoint sample(Complex z) const override;
  double log_s(Complex z) const override;
  Complex q(Complex z) const override;
  bool holomorphic() const override { return holomorphic_; }

private:
  struct Located {
    int tri = -1;
    double bary[3] = {0, 0, 0};
  };
  Located locate(Complex z) const;
  // log s model of vertex v at z: value and gradient
  double model(int v, Complex z, double* gx, double* gy) const;

  SurfacePtr surface_;
  std::vector<Complex> q_;
  std::vector<Eigen::Matrix<double, 6, 1>> fit_; // c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2
  bool holomorphic_;
};

struct FrameOptions {
  double step = 0.01;            // Euclidean chart step bound
  bool project = false;          // re-project onto the eta-unitary group after each step
  double max_step_defect = 1e-6; // StepTooLarge above this per-step defect growth
  bool flatness = false;         // record the flatness defect at each node
  double flatness_cell = 1e-3;
};

struct FrameDefect {
  double unitarity = 0.0;
  double determinant = 0.0;
  double flatness = 0.0;
};

struct FrameSheet {
  std::vector<Complex> path; // every integration node
  std::vector<Su21Matrix> frames;
  std::vector<double> s_field;
  std::vector<FrameDefect> defects;
  double length = 0.0; // Euclidean chart length of the polyline

  double max_unitarity() const;
  double max_determinant() const;
};

/// RK4 for F' = F (A zdot + B conj(zdot)) along the polyline with F(0) = I.
/// Each polyline segment is split into ceil(|segment| / step) equal steps.
FrameSheet integrate_frame(const FieldSampler& f, const std::vector<Complex>& polyline,
                           const FrameOptions& opts = {});

/// Residuals of the flatness conditions at z by central differences with
/// spacing h: |q_zbar| and |(log s^2)_{z zbar} - |q|^2 s^{-4} - s^2|.
struct FlatnessDefect {
  double holomorphy = 0.0;
  double structure = 0.0;
  double value() const { return std::max(holomorphy, structure); }
};
FlatnessDefect flatness_defect(const FieldSampler& f, Complex z, double h);

/// max |F_end - I| after integrating around a closed polyline.
double loop_holonomy_defect(const FieldSampler& f, const std::vector<Complex>& loop,
                            const FrameOptions& opts = {});

/// Closed square loop with lower-left corner c and side a (counterclockwise).
std::vector<Complex> square_loop(Complex c, double a);

} // namespace mlag
