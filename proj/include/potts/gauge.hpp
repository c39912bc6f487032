#ifndef POTTS_GAUGE_HPP
#define POTTS_GAUGE_HPP

#include <array>
#include <string>
#include <vector>

#include "potts/lattice.hpp"

namespace potts {

using Vec2 = std::array<double, 2>;

// One estimated direction of the surface tension, kept as provenance.
struct DirectionEstimate {
  double angle = 0.0;
  double tau = 0.0;
  double err = 0.0;
};

// Convex gauge norm: polygonal unit ball in polar (support) form, plus an
// optional Euclidean component that makes the ball strictly convex. The
// gauge is max_i <n_i, x> + euclid * |x|_2, homogeneous and symmetric by
// construction of the normal set.
class GaugeNorm {
 public:
  // polygon through the given unit-ball vertices: symmetrized under x -> -x,
  // convexified by hull; 0 must end up strictly inside
  static GaugeNorm from_unit_ball(std::vector<Vec2> vertices);
  static GaugeNorm euclidean(double tau_unit);      // tau(x) = tau_unit |x|_2
  static GaugeNorm linf_ball(double tau_unit);      // tau(x) = tau_unit max(|x1|,|x2|)
  // regular 2k-gon with radius per vertex; used by the norm fit
  static GaugeNorm from_direction_values(const std::vector<DirectionEstimate>& dirs);

  double operator()(double x, double y) const;
  double operator()(Vec2 v) const { return (*this)(v[0], v[1]); }
  double operator()(Point p) const { return (*this)(p.x, p.y); }
  // doubled-coordinate points (dual sites) evaluate at half scale
  double doubled(Point p) const { return 0.5 * (*this)(p.x, p.y); }

  // strictly convex variant: adds s * tau(e1) * |x|_2
  GaugeNorm smoothed(double s) const;
  bool strictly_convex() const { return euclid_ > 0.0; }

  const std::vector<Vec2>& ball_vertices() const { return vertices_; }
  double euclid_coefficient() const { return euclid_; }

  std::vector<DirectionEstimate> direction_table;  // estimates with errors
  std::string provenance;                          // params, seeds, counts

  std::string to_json() const;
  static GaugeNorm from_json(const std::string& text);

 private:
  GaugeNorm() = default;
  void build_normals();  // polar form from vertices
  std::vector<Vec2> vertices_;  // CCW polygon
  std::vector<Vec2> normals_;
  double euclid_ = 0.0;
};

// [tau(x)+tau(y)-tau(x+y)] / [|x|+|y|-|x+y|]; the collinear case (zero
// denominator) reports the plain triangle slack instead.
struct TriangleMargin {
  double value = 0.0;
  bool collinear = false;
};
TriangleMargin sharp_triangle_margin(const GaugeNorm& norm, Vec2 x, Vec2 y);

// directed tau-Hausdorff distance sup_{a in A} inf_{b in B} tau(a-b)
double dtau_directed(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                     const GaugeNorm& norm);
// symmetric variant max(d(A,B), d(B,A))
double dtau_symmetric(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                      const GaugeNorm& norm);

}  // namespace potts

#endif
