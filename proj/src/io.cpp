#include "mlag/io.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "mlag/errors.hpp"

namespace mlag {

namespace {

using json = nlohmann::json;

json vec(const ScalarField& f) {
  json a = json::array();
  for (int i = 0; i < f.size(); ++i) a.push_back(f[i]);
  return a;
}

json cplx(Complex z) { return json::array({z.real(), z.imag()}); }

json point_json(const SolutionPoint& p) {
  return {{"t", p.t},
          {"u", vec(p.u)},
          {"residual_norm", p.residual_norm},
          {"lambda_min", p.lambda_min},
          {"stable", p.stable},
          {"iterations", p.iterations}};
}

// %.17g is round-trip exact and locale independent for CSV cells.
std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

} // namespace

std::string mesh_json(const DiscreteSurface& s, const std::string& hash) {
  json v = json::array(), t = json::array();
  for (Complex z : s.vertices) v.push_back(cplx(z));
  for (const auto& tri : s.triangles) t.push_back({tri[0], tri[1], tri[2]});
  json j = {{"config_hash", hash},
            {"backend", s.backend == Backend::Torus ? "torus" : "octagon"},
            {"vertices", v},
            {"triangles", t},
            {"classes", s.vertex_class},
            {"lambda", s.conformal_factor},
            {"genus", s.genus},
            {"area", s.area},
            {"num_classes", s.num_classes},
            {"euler_characteristic", euler_characteristic(s)}};
  return j.dump(1) + "\n";
}

std::string cubic_json(const CubicDifferential& q, const std::string& hash) {
  json v = json::array(), z = json::array();
  for (Complex c : q.values) v.push_back(cplx(c));
  for (const auto& zs : q.zeros) z.push_back({zs.vertex_class, zs.order});
  json j = {{"config_hash", hash}, {"values", v}, {"zeros", z}, {"holomorphic", q.holomorphic}};
  return j.dump(1) + "\n";
}

std::string solution_json(const SolutionPoint& p, const std::string& hash) {
  json j = point_json(p);
  j["config_hash"] = hash;
  return j.dump(1) + "\n";
}

std::string curve_csv(const SolutionCurve& c, const DiscreteSurface& s, const std::string& hash) {
  std::string out = "# config_hash: " + hash + "\n";
  out += "t,lambda_min,residual_norm,u_min,u_max,area_induced\n";
  for (const auto& p : c.points) {
    const double area = s.lumped_mass.dot(p.u.array().exp().matrix());
    out += num(p.t) + "," + num(p.lambda_min) + "," + num(p.residual_norm) + "," + num(p.u.minCoeff()) +
           "," + num(p.u.maxCoeff()) + "," + num(area) + "\n";
  }
  return out;
}

std::string curve_json(const SolutionCurve& c, const CurveSummary& sum, const std::string& hash) {
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back(point_json(p));
  json j = {{"config_hash", hash},
            {"points", pts},
            {"sup_norms", c.sup_norms},
            {"T0_estimate", c.T0_estimate}};
  j["first_failure_t"] = c.first_failure_t ? json(*c.first_failure_t) : json(nullptr);
  j["T0"] = sum.T0 ? json(*sum.T0) : json(nullptr);
  j["T_bound"] = sum.T_bound ? json(*sum.T_bound) : json(nullptr);
  j["fold_point"] = sum.fold ? point_json(*sum.fold) : json(nullptr);
  return j.dump(1) + "\n";
}

std::string mpass_json(const MountainPassResult& r, const std::string& hash) {
  json j = {{"config_hash", hash},
            {"t", r.point.t},
            {"u2", vec(r.point.u)},
            {"u2_sup", r.point.u.cwiseAbs().maxCoeff()},
            {"residual_norm", r.point.residual_norm},
            {"gradient_norm", r.gradient_norm},
            {"lambda_min", r.point.lambda_min},
            {"vnorm_separation", r.vnorm_separation},
            {"energy", r.energy},
            {"energy_stable", r.energy_stable},
            {"endpoint_level", r.endpoint_level},
            {"path_iterations", r.path_iterations},
            {"nodes", r.nodes}};
  return j.dump(1) + "\n";
}

std::string frame_json(const FrameSheet& f, bool holomorphic, const std::string& hash) {
  json path = json::array(), frames = json::array(), defects = json::array();
  for (Complex z : f.path) path.push_back(cplx(z));
  for (const auto& F : f.frames) {
    json e = json::array();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) e.push_back(cplx(F(r, c)));
    frames.push_back(e);
  }
  for (const auto& d : f.defects) defects.push_back({d.unitarity, d.determinant, d.flatness});
  json j = {{"config_hash", hash},
            {"path", path},
            {"frames", frames},
            {"s", f.s_field},
            {"defects", defects},
            {"defect_columns", {"unitarity", "determinant", "flatness"}},
            {"length", f.length},
            {"max_unitarity", f.max_unitarity()},
            {"max_determinant", f.max_determinant()},
            {"holomorphic", holomorphic}};
  return j.dump(1) + "\n";
}

std::string wpcheck_csv(const std::vector<double>& h, const std::vector<AreaRecord>& recs,
                        const std::string& hash) {
  std::string out = "# config_hash: " + hash + "\n";
  out += "h,t,area,fd2,exact,rel_err,adot\n";
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const AreaRecord& r = recs[k];
    for (std::size_t i = 0; i < r.t.size(); ++i)
      out += num(h[k]) + "," + num(r.t[i]) + "," + num(r.area[i]) + "," + num(r.fd2) + "," + num(r.exact) +
             "," + num(r.rel_err) + "," + num(r.adot) + "\n";
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path + " for writing");
  out << text;
  if (!out) throw InvalidArgument("write to " + path + " failed");
}

} // namespace mlag
