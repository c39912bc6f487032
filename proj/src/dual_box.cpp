#include "potts/dual_box.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace potts {

BoundaryCondition BoundaryCondition::parse(const std::string& text) {
  if (text == "free") return free();
  if (text == "dobrushin") return dobrushin();
  if (text == "thirds") return thirds();
  if (text == "alternating") return alternating();
  if (text.rfind("pure:", 0) == 0) {
    int c = std::stoi(text.substr(5));
    if (c < 1) throw std::invalid_argument("boundary: colors are 1-based");
    return pure_bc(c - 1);
  }
  if (text.rfind("custom:", 0) == 0) {
    std::vector<int> cols;
    std::string body = text.substr(7);
    std::size_t pos = 0;
    while (pos < body.size()) {
      std::size_t next = body.find(',', pos);
      if (next == std::string::npos) next = body.size();
      cols.push_back(std::stoi(body.substr(pos, next - pos)) - 1);
      pos = next + 1;
    }
    return custom_bc(std::move(cols));
  }
  throw std::invalid_argument("boundary: unknown spec '" + text + "'");
}

std::vector<int> BoundaryCondition::ring_colors(const DualDomain& dd, int q) const {
  const auto& ring = dd.ring();
  const int r = static_cast<int>(ring.size());
  std::vector<int> out(r, -1);
  switch (kind) {
    case Kind::free_bc:
      break;
    case Kind::pure:
      if (pure_color < 0 || pure_color >= q)
        throw std::invalid_argument("boundary: pure color out of range");
      std::fill(out.begin(), out.end(), pure_color);
      break;
    case Kind::dobrushin:
      // color 0 on the left arc (x<0), color 1 on the right: the interface
      // runs vertically through the box
      for (int i = 0; i < r; ++i) out[i] = dd.doubled(ring[i]).x < 0 ? 0 : 1;
      break;
    case Kind::thirds: {
      if (q < 3) throw std::invalid_argument("boundary: thirds needs q >= 3");
      for (int i = 0; i < r; ++i) out[i] = (3 * i) / r;
      break;
    }
    case Kind::alternating:
      for (int i = 0; i < r; ++i) out[i] = i % q;
      break;
    case Kind::custom:
      if (static_cast<int>(custom.size()) != r)
        throw std::invalid_argument("boundary: custom color list length != ring size");
      out = custom;
      for (int c : out)
        if (c < 0 || c >= q) throw std::invalid_argument("boundary: custom color out of range");
      break;
  }
  return out;
}

std::string BoundaryCondition::descriptor() const {
  switch (kind) {
    case Kind::free_bc: return "free";
    case Kind::pure: return "pure:" + std::to_string(pure_color + 1);
    case Kind::dobrushin: return "dobrushin";
    case Kind::thirds: return "thirds";
    case Kind::alternating: return "alternating";
    case Kind::custom: {
      std::string s = "custom:";
      for (std::size_t i = 0; i < custom.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(custom[i] + 1);
      }
      return s;
    }
  }
  return "?";
}

namespace {
SpinLattice make_dual_lattice(const DualDomain& dd) {
  SpinLattice lat;
  lat.n_vertices = dd.n_sites();
  lat.edges.reserve(dd.n_edges());
  for (int e = 0; e < dd.n_edges(); ++e) lat.edges.push_back(dd.edge_faces(e));
  lat.finalize();
  return lat;
}
}  // namespace

ConditionedChain::ConditionedChain(int n, PottsParams pp, BoundaryCondition bc,
                                   std::uint64_t seed, std::uint64_t stream_id)
    : n_(n),
      pp_(pp),
      bc_(std::move(bc)),
      dd_(n),
      lat_(make_dual_lattice(dd_)),
      rng_(SplitMix64::stream(seed, stream_id)),
      seed_(seed),
      stream_id_(stream_id) {
  if (n < 1) throw std::invalid_argument("ConditionedChain: n must be >= 1");
  pp_.validate();
  sigma_ = bc_.ring_colors(dd_, pp_.q);
  const auto& ring = dd_.ring();
  for (std::size_t i = 0; i < ring.size(); ++i)
    if (sigma_[i] >= 0) lat_.frozen[ring[i]] = sigma_[i];
  colors_ = random_colors(lat_, pp_.q, rng_);
}

void ConditionedChain::step() {
  cluster_step(lat_, colors_, pp_, rng_, scratch_);
  for (int k = 0; k < hb_interleave_; ++k) heat_bath_sweep(lat_, colors_, pp_, rng_);
}

void ConditionedChain::heat_bath() { heat_bath_sweep(lat_, colors_, pp_, rng_); }

void ConditionedChain::run(int steps) {
  for (int i = 0; i < steps; ++i) step();
}

BondConfig ConditionedChain::dual_sample() {
  BondConfig bc;
  bc.n = n_;
  bc.lattice = LatticeTag::dual;
  bc.wiring = WiringTag::wired_bc;
  bc.open = es_spin_to_bond(lat_, colors_, pp_.beta, rng_);
  return bc;
}

BondConfig ConditionedChain::primal_sample() { return dual_config(dual_sample()); }

namespace {
// corners of face (a,b) in primal coordinates
std::array<Point, 4> face_corners(std::pair<int, int> f) {
  auto [a, b] = f;
  return {Point{a, b}, Point{a + 1, b}, Point{a, b + 1}, Point{a + 1, b + 1}};
}
}  // namespace

std::vector<Point> color_change_anchors(const DualDomain& dd, const std::vector<int>& sigma) {
  const auto& ring = dd.ring();
  const int r = static_cast<int>(ring.size());
  const int n = dd.radius();
  std::vector<Point> anchors;
  for (int i = 0; i < r; ++i) {
    int j = (i + 1) % r;
    if (sigma[i] < 0 || sigma[j] < 0 || sigma[i] == sigma[j]) continue;
    // the unique primal corner shared by the two ring faces and lying in the
    // box: the site where a separating cluster is pinned to the boundary
    auto ca = face_corners(dd.face_at(ring[i]));
    auto cb = face_corners(dd.face_at(ring[j]));
    bool found = false;
    for (Point p : ca) {
      if (linf(p) > n) continue;
      for (Point q : cb) {
        if (p == q) {
          anchors.push_back(p);
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) throw std::logic_error("color change between non-adjacent ring sites");
  }
  return anchors;
}

BondConfig sample_conditioned_fk(int n, const PottsParams& pp, const BoundaryCondition& bc,
                                 const ConditionedSampleConfig& cfg, std::uint64_t seed) {
  if (!pp.supercritical())
    throw std::invalid_argument("sample_conditioned_fk: needs beta > beta_c(q)");
  ConditionedChain chain(n, pp, bc, seed);
  chain.run(cfg.burn_in);
  return chain.primal_sample();
}

}  // namespace potts
