#include "potts/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace potts {

namespace {
double cross(Vec2 o, Vec2 a, Vec2 b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew monotone chain, CCW; inputs are snapped and deduped first so that
// symmetrization round-off cannot create sliver edges
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  double rmax = 0.0;
  for (Vec2 p : pts) rmax = std::max({rmax, std::abs(p[0]), std::abs(p[1])});
  if (!(rmax > 0)) throw std::invalid_argument("GaugeNorm: degenerate polygon");
  const double snap = 1e-9 * rmax;
  for (Vec2& p : pts)
    for (double& c : p)
      if (std::abs(c) < snap) c = 0.0;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](Vec2 a, Vec2 b) {
                          return std::abs(a[0] - b[0]) < snap && std::abs(a[1] - b[1]) < snap;
                        }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n < 3) throw std::invalid_argument("GaugeNorm: degenerate polygon");
  const double eps = 1e-12 * rmax * rmax;
  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= eps) --k;
    hull[k++] = pts[i];
  }
  for (int i = n - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= eps) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw std::invalid_argument("GaugeNorm: degenerate polygon");
  return hull;
}
}  // namespace

void GaugeNorm::build_normals() {
  normals_.clear();
  const int n = static_cast<int>(vertices_.size());
  for (int i = 0; i < n; ++i) {
    Vec2 a = vertices_[i];
    Vec2 b = vertices_[(i + 1) % n];
    // normal with <n,a> = <n,b> = 1
    double det = a[0] * b[1] - a[1] * b[0];
    if (std::abs(det) < 1e-14)
      throw std::invalid_argument("GaugeNorm: edge collinear with the origin");
    normals_.push_back({(b[1] - a[1]) / det, (a[0] - b[0]) / det});
  }
}

GaugeNorm GaugeNorm::from_unit_ball(std::vector<Vec2> vertices) {
  std::vector<Vec2> sym;
  sym.reserve(vertices.size() * 2);
  for (Vec2 v : vertices) {
    sym.push_back(v);
    sym.push_back({-v[0], -v[1]});
  }
  GaugeNorm g;
  g.vertices_ = convex_hull(std::move(sym));
  g.build_normals();
  // 0 strictly inside <=> every polar normal is finite and gauge(x)>0 off 0
  for (Vec2 v : g.vertices_)
    if (g(v[0], v[1]) > 1.0 + 1e-9)
      throw std::invalid_argument("GaugeNorm: origin not strictly inside the ball");
  return g;
}

GaugeNorm GaugeNorm::euclidean(double tau_unit) {
  if (!(tau_unit > 0)) throw std::invalid_argument("GaugeNorm: scale must be positive");
  GaugeNorm g;
  g.euclid_ = tau_unit;
  return g;
}

GaugeNorm GaugeNorm::linf_ball(double tau_unit) {
  if (!(tau_unit > 0)) throw std::invalid_argument("GaugeNorm: scale must be positive");
  double r = 1.0 / tau_unit;
  return from_unit_ball({{r, r}, {-r, r}, {r, -r}, {-r, -r}});
}

GaugeNorm GaugeNorm::from_direction_values(const std::vector<DirectionEstimate>& dirs) {
  std::vector<Vec2> verts;
  for (const auto& d : dirs) {
    if (!(d.tau > 0)) throw std::invalid_argument("GaugeNorm: nonpositive tau estimate");
    verts.push_back({std::cos(d.angle) / d.tau, std::sin(d.angle) / d.tau});
  }
  GaugeNorm g = from_unit_ball(std::move(verts));
  g.direction_table = dirs;
  return g;
}

double GaugeNorm::operator()(double x, double y) const {
  double best = 0.0;
  for (const Vec2& n : normals_) best = std::max(best, n[0] * x + n[1] * y);
  if (euclid_ > 0.0) best += euclid_ * std::sqrt(x * x + y * y);
  return best;
}

GaugeNorm GaugeNorm::smoothed(double s) const {
  if (!(s >= 0)) throw std::invalid_argument("GaugeNorm: smoothing must be >= 0");
  GaugeNorm g = *this;
  double t1 = (*this)(1.0, 0.0);
  g.euclid_ += s * t1;
  return g;
}

TriangleMargin sharp_triangle_margin(const GaugeNorm& norm, Vec2 x, Vec2 y) {
  auto len = [](Vec2 v) { return std::sqrt(v[0] * v[0] + v[1] * v[1]); };
  Vec2 s{x[0] + y[0], x[1] + y[1]};
  double tau_slack = norm(x) + norm(y) - norm(s);
  double euclid_slack = len(x) + len(y) - len(s);
  if (euclid_slack < 1e-12 * (len(x) + len(y))) return {tau_slack, true};
  return {tau_slack / euclid_slack, false};
}

double dtau_directed(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                     const GaugeNorm& norm) {
  if (a.empty() || b.empty()) throw std::invalid_argument("dtau: empty set");
  double worst = 0.0;
  for (Vec2 p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (Vec2 q : b) best = std::min(best, norm(p[0] - q[0], p[1] - q[1]));
    worst = std::max(worst, best);
  }
  return worst;
}

double dtau_symmetric(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                      const GaugeNorm& norm) {
  return std::max(dtau_directed(a, b, norm), dtau_directed(b, a, norm));
}

std::string GaugeNorm::to_json() const {
  nlohmann::json j;
  j["schema"] = "gauge-norm/1";
  j["euclid"] = euclid_;
  auto& verts = j["ball_vertices"] = nlohmann::json::array();
  for (Vec2 v : vertices_) verts.push_back({v[0], v[1]});
  auto& dirs = j["directions"] = nlohmann::json::array();
  for (const auto& d : direction_table)
    dirs.push_back({{"angle", d.angle}, {"tau", d.tau}, {"err", d.err}});
  j["provenance"] = provenance;
  return j.dump(2);
}

GaugeNorm GaugeNorm::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("schema") != "gauge-norm/1")
    throw std::invalid_argument("GaugeNorm: unknown schema " + j.at("schema").dump());
  GaugeNorm g;
  for (const auto& v : j.at("ball_vertices"))
    g.vertices_.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  g.euclid_ = j.at("euclid").get<double>();
  if (!g.vertices_.empty()) g.build_normals();
  for (const auto& d : j.value("directions", nlohmann::json::array()))
    g.direction_table.push_back(
        {d.at("angle").get<double>(), d.at("tau").get<double>(), d.at("err").get<double>()});
  g.provenance = j.value("provenance", "");
  return g;
}

}  // namespace potts
