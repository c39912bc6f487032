#include "potts/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "potts/rng.hpp"

namespace potts::steiner {

std::uint64_t bell_number(int n) {
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next(row.size() + 1);
    next[0] = row.back();
    for (std::size_t j = 0; j < row.size(); ++j) next[j + 1] = next[j] + row[j];
    row = next;
  }
  return row[0];
}

std::vector<std::vector<std::vector<int>>> enumerate_partitions(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_partitions: need n >= 1");
  if (n > 12) throw std::invalid_argument("enumerate_partitions: hard cap at 12 points");
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> blocks;
  auto rec = [&](auto&& self, int next) -> void {
    if (next == n) {
      out.push_back(blocks);
      return;
    }
    for (auto& b : blocks) {
      b.push_back(next);
      self(self, next + 1);
      b.pop_back();
    }
    blocks.push_back({next});
    self(self, next + 1);
    blocks.pop_back();
  };
  rec(rec, 0);
  return out;
}

TerminalSet TerminalSet::trivial(std::vector<Vec2> pts) {
  TerminalSet t;
  t.points = std::move(pts);
  t.blocks.emplace_back();
  for (int i = 0; i < static_cast<int>(t.points.size()); ++i) t.blocks[0].push_back(i);
  return t;
}

void TerminalSet::validate() const {
  std::vector<int> seen(points.size(), 0);
  for (const auto& b : blocks)
    for (int i : b) {
      if (i < 0 || i >= static_cast<int>(points.size()))
        throw std::invalid_argument("TerminalSet: block index out of range");
      if (seen[i]++) throw std::invalid_argument("TerminalSet: blocks not disjoint");
    }
  for (int s : seen)
    if (!s) throw std::invalid_argument("TerminalSet: blocks do not cover the points");
}

namespace {

double dist(Vec2 a, Vec2 b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

// golden-section minimization of a convex function along a direction
template <class F>
double line_search(F&& f, double f0, Vec2& x, Vec2 dir, double scale) {
  const double tol = 1e-12 * scale;
  auto eval = [&](double t) { return f({x[0] + t * dir[0], x[1] + t * dir[1]}); };
  double lo = -scale, hi = scale;
  double flo = eval(lo), fhi = eval(hi);
  for (int i = 0; i < 60 && flo < f0; ++i) {
    lo *= 2.0;
    flo = eval(lo);
  }
  for (int i = 0; i < 60 && fhi < f0; ++i) {
    hi *= 2.0;
    fhi = eval(hi);
  }
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = eval(c), fd = eval(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = eval(d);
    }
  }
  double t = 0.5 * (a + b);
  double ft = eval(t);
  if (ft < f0) {
    x = {x[0] + t * dir[0], x[1] + t * dir[1]};
    return ft;
  }
  return f0;
}

// direction-set descent from a start point; returns the found minimum
template <class F>
std::pair<Vec2, double> descend(F&& f, Vec2 x, double scale, int max_passes, int* passes_out) {
  static const std::vector<Vec2> dirs = [] {
    std::vector<Vec2> d;
    for (int k = 0; k < 8; ++k)
      d.push_back({std::cos(M_PI * k / 8.0), std::sin(M_PI * k / 8.0)});
    return d;
  }();
  double fx = f(x);
  double step = scale;
  int pass = 0;
  for (; pass < max_passes; ++pass) {
    double before = fx;
    for (Vec2 dir : dirs) fx = line_search(f, fx, x, dir, step);
    step = std::max(step * 0.5, 1e-9 * scale);
    if (before - fx < 1e-9 * std::max(1.0, std::abs(before))) break;
  }
  if (passes_out) *passes_out = pass;
  return {x, fx};
}

}  // namespace

TripodSolution solve_tripod(Vec2 u1, Vec2 u2, Vec2 u3, const GaugeNorm& norm) {
  const std::vector<Vec2> u{u1, u2, u3};
  double diam = std::max({dist(u1, u2), dist(u1, u3), dist(u2, u3)});
  if (diam <= 0.0) throw std::invalid_argument("solve_tripod: coincident terminals");
  auto phi = [&](Vec2 y) {
    return norm(u1[0] - y[0], u1[1] - y[1]) + norm(u2[0] - y[0], u2[1] - y[1]) +
           norm(u3[0] - y[0], u3[1] - y[1]);
  };
  // multi-start: centroid, the terminals, and a coarse grid over the hull box
  std::vector<Vec2> starts{{(u1[0] + u2[0] + u3[0]) / 3.0, (u1[1] + u2[1] + u3[1]) / 3.0}};
  starts.insert(starts.end(), u.begin(), u.end());
  double xmin = std::min({u1[0], u2[0], u3[0]}), xmax = std::max({u1[0], u2[0], u3[0]});
  double ymin = std::min({u1[1], u2[1], u3[1]}), ymax = std::max({u1[1], u2[1], u3[1]});
  for (int i = 1; i < 4; ++i)
    for (int j = 1; j < 4; ++j)
      starts.push_back({xmin + (xmax - xmin) * i / 4.0, ymin + (ymax - ymin) * j / 4.0});

  TripodSolution best;
  best.value = std::numeric_limits<double>::infinity();
  for (Vec2 s : starts) {
    int passes = 0;
    auto [x, fx] = descend(phi, s, 0.5 * diam, 200, &passes);
    if (fx < best.value) {
      best.junction = x;
      best.value = fx;
      best.passes = passes;
    }
  }
  for (int i = 0; i < 3; ++i) {
    if (dist(best.junction, u[i]) <= 1e-6 * diam) {
      best.degenerate = true;
      best.terminal_index = i;
      best.junction = u[i];
      best.value = phi(u[i]);
      break;
    }
  }
  return best;
}

namespace {

// full Steiner topology on k terminals: terminals 0..k-1, inner nodes of
// degree 3; generated by inserting each next terminal into every edge
struct Topology {
  int n_terminals = 0;
  int n_inner = 0;
  std::vector<std::pair<int, int>> edges;  // ids: terminals then inner
};

std::vector<Topology> full_topologies(int k) {
  std::vector<Topology> out;
  if (k == 2) {
    out.push_back({2, 0, {{0, 1}}});
    return out;
  }
  Topology star{3, 1, {{0, 3}, {1, 3}, {2, 3}}};
  out.push_back(star);
  for (int t = 3; t < k; ++t) {
    std::vector<Topology> next;
    for (const Topology& topo : out) {
      for (std::size_t e = 0; e < topo.edges.size(); ++e) {
        Topology grown = topo;
        ++grown.n_terminals;
        // renumber: old inner ids shift by one (new terminal takes id t)
        auto renum = [&](int id) { return id < topo.n_terminals ? id : id + 1; };
        for (auto& [a, b] : grown.edges) {
          a = renum(a);
          b = renum(b);
        }
        int y = grown.n_terminals + topo.n_inner;  // new inner node
        ++grown.n_inner;
        auto [a, b] = grown.edges[e];
        grown.edges[e] = {a, y};
        grown.edges.push_back({y, b});
        grown.edges.push_back({t, y});
        next.push_back(std::move(grown));
      }
    }
    out = std::move(next);
  }
  return out;
}

struct OptimizedTree {
  std::vector<Vec2> inner;
  double length = std::numeric_limits<double>::infinity();
};

double tree_length(const Topology& topo, const std::vector<Vec2>& terms,
                   const std::vector<Vec2>& inner, const GaugeNorm& norm) {
  auto node = [&](int id) { return id < topo.n_terminals ? terms[id] : inner[id - topo.n_terminals]; };
  double len = 0.0;
  for (auto [a, b] : topo.edges) {
    Vec2 pa = node(a), pb = node(b);
    len += norm(pa[0] - pb[0], pa[1] - pb[1]);
  }
  return len;
}

OptimizedTree optimize_topology(const Topology& topo, const std::vector<Vec2>& terms,
                                const GaugeNorm& norm, double scale,
                                const std::vector<Vec2>& init) {
  std::vector<Vec2> inner = init;
  double len = tree_length(topo, terms, inner, norm);
  for (int pass = 0; pass < 300; ++pass) {
    double before = len;
    for (int j = 0; j < topo.n_inner; ++j) {
      // neighbors of inner node j are fixed during its move
      std::vector<Vec2> nbr;
      const int id = topo.n_terminals + j;
      for (auto [a, b] : topo.edges) {
        if (a == id) nbr.push_back(b < topo.n_terminals ? terms[b] : inner[b - topo.n_terminals]);
        if (b == id) nbr.push_back(a < topo.n_terminals ? terms[a] : inner[a - topo.n_terminals]);
      }
      auto local = [&](Vec2 y) {
        double s = 0.0;
        for (Vec2 p : nbr) s += norm(p[0] - y[0], p[1] - y[1]);
        return s;
      };
      auto [y, fy] = descend(local, inner[j], 0.25 * scale, 60, nullptr);
      inner[j] = y;
    }
    len = tree_length(topo, terms, inner, norm);
    if (before - len < 1e-9 * std::max(1.0, before)) break;
  }
  return {inner, len};
}

}  // namespace

SteinerForest solve_steiner_forest(const TerminalSet& terminals, const GaugeNorm& norm) {
  terminals.validate();
  SteinerForest forest;
  for (const auto& block : terminals.blocks) {
    if (block.size() <= 1) continue;
    if (block.size() > 5)
      throw std::invalid_argument("solve_steiner_forest: blocks capped at 5 terminals");
    std::vector<Vec2> terms;
    for (int i : block) terms.push_back(terminals.points[i]);
    double scale = 0.0;
    Vec2 centroid{0.0, 0.0};
    for (Vec2 p : terms) {
      centroid[0] += p[0] / terms.size();
      centroid[1] += p[1] / terms.size();
    }
    for (Vec2 p : terms) scale = std::max(scale, 2.0 * dist(p, centroid));
    if (scale <= 0.0) throw std::invalid_argument("solve_steiner_forest: coincident terminals");

    SteinerTree best_tree;
    double best_len = std::numeric_limits<double>::infinity();
    for (const Topology& topo : full_topologies(static_cast<int>(terms.size()))) {
      // two starts: everyone at the centroid, and adjacency-averaged
      std::vector<std::vector<Vec2>> starts;
      starts.emplace_back(topo.n_inner, centroid);
      std::vector<Vec2> avg(topo.n_inner, centroid);
      for (int sweep = 0; sweep < 3; ++sweep) {
        for (int j = 0; j < topo.n_inner; ++j) {
          Vec2 acc{0.0, 0.0};
          int cnt = 0;
          const int id = topo.n_terminals + j;
          for (auto [a, b] : topo.edges) {
            int other = a == id ? b : (b == id ? a : -1);
            if (other < 0) continue;
            Vec2 p = other < topo.n_terminals ? terms[other] : avg[other - topo.n_terminals];
            acc[0] += p[0];
            acc[1] += p[1];
            ++cnt;
          }
          if (cnt) avg[j] = {acc[0] / cnt, acc[1] / cnt};
        }
      }
      starts.push_back(avg);
      for (const auto& init : starts) {
        OptimizedTree opt = optimize_topology(topo, terms, norm, scale, init);
        if (opt.length < best_len) {
          best_len = opt.length;
          best_tree.terminals = terms;
          best_tree.inner = opt.inner;
          best_tree.edges = topo.edges;
          best_tree.length = opt.length;
        }
      }
    }
    forest.trees.push_back(std::move(best_tree));
    forest.length += best_len;
  }
  return forest;
}

ForestAudit audit_forest(const SteinerForest& forest, const GaugeNorm& norm, double eta_tol,
                         std::uint64_t seed) {
  ForestAudit audit;
  double scale = 0.0, half_box = 0.0;
  for (const auto& t : forest.trees)
    for (Vec2 p : t.terminals) half_box = std::max({half_box, std::abs(p[0]), std::abs(p[1])});
  half_box *= 0.5;
  for (const auto& t : forest.trees)
    for (auto [a, b] : t.edges) scale = std::max(scale, dist(t.node(a), t.node(b)));
  const double collapse_tol = 1e-6 * std::max(scale, 1.0);

  audit.min_inner_angle = M_PI;
  audit.min_node_separation = std::numeric_limits<double>::infinity();
  audit.min_tree_distance = std::numeric_limits<double>::infinity();

  for (const auto& t : forest.trees) {
    const int nt = static_cast<int>(t.terminals.size());
    for (int j = 0; j < static_cast<int>(t.inner.size()); ++j) {
      const int id = nt + j;
      std::vector<Vec2> dirs;
      for (auto [a, b] : t.edges) {
        int other = a == id ? b : (b == id ? a : -1);
        if (other < 0) continue;
        Vec2 d{t.node(other)[0] - t.inner[j][0], t.node(other)[1] - t.inner[j][1]};
        double l = std::hypot(d[0], d[1]);
        if (l > collapse_tol) dirs.push_back({d[0] / l, d[1] / l});
      }
      audit.inner_degrees.push_back(static_cast<int>(dirs.size()));
      if (dirs.size() != 3) audit.all_inner_degree_three = false;
      for (std::size_t a = 0; a < dirs.size(); ++a)
        for (std::size_t b = a + 1; b < dirs.size(); ++b) {
          double cosang = std::clamp(dirs[a][0] * dirs[b][0] + dirs[a][1] * dirs[b][1], -1.0, 1.0);
          audit.min_inner_angle = std::min(audit.min_inner_angle, std::acos(cosang));
        }
    }
    // node separation inside the half box
    std::vector<Vec2> nodes = t.terminals;
    nodes.insert(nodes.end(), t.inner.begin(), t.inner.end());
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        if (std::max(std::abs(nodes[a][0]), std::abs(nodes[a][1])) > half_box) continue;
        if (std::max(std::abs(nodes[b][0]), std::abs(nodes[b][1])) > half_box) continue;
        double d = norm(nodes[a][0] - nodes[b][0], nodes[a][1] - nodes[b][1]);
        if (d > collapse_tol) audit.min_node_separation = std::min(audit.min_node_separation, d);
      }
  }
  audit.angle_margin = audit.min_inner_angle - (M_PI / 2.0 + eta_tol);

  // inter-tree distance: edges sampled inside the half box
  auto tree_points = [&](const SteinerTree& t) {
    std::vector<Vec2> pts;
    for (auto [a, b] : t.edges) {
      Vec2 pa = t.node(a), pb = t.node(b);
      for (int s = 0; s <= 16; ++s) {
        double u = s / 16.0;
        Vec2 p{pa[0] + u * (pb[0] - pa[0]), pa[1] + u * (pb[1] - pa[1])};
        if (std::max(std::abs(p[0]), std::abs(p[1])) <= half_box) pts.push_back(p);
      }
    }
    return pts;
  };
  for (std::size_t a = 0; a < forest.trees.size(); ++a)
    for (std::size_t b = a + 1; b < forest.trees.size(); ++b) {
      auto pa = tree_points(forest.trees[a]);
      auto pb = tree_points(forest.trees[b]);
      if (pa.empty() || pb.empty()) continue;
      audit.min_tree_distance =
          std::min(audit.min_tree_distance, dtau_symmetric(pa, pb, norm));
    }

  // stability probe: random inner-node perturbations never shorten the tree
  SplitMix64 rng(seed);
  audit.perturbation_margin = std::numeric_limits<double>::infinity();
  for (const auto& t : forest.trees) {
    if (t.inner.empty()) continue;
    const int nt = static_cast<int>(t.terminals.size());
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<Vec2> moved = t.inner;
      for (Vec2& p : moved) {
        p[0] += (rng.uniform() - 0.5) * 0.1 * scale;
        p[1] += (rng.uniform() - 0.5) * 0.1 * scale;
      }
      double len = 0.0;
      for (auto [a, b] : t.edges) {
        Vec2 pa = a < nt ? t.terminals[a] : moved[a - nt];
        Vec2 pb = b < nt ? t.terminals[b] : moved[b - nt];
        len += norm(pa[0] - pb[0], pa[1] - pb[1]);
      }
      audit.perturbation_margin = std::min(audit.perturbation_margin, len - t.length);
    }
  }
  return audit;
}

std::string forest_to_json(const SteinerForest& forest) {
  nlohmann::json j;
  j["schema"] = "steiner-forest/1";
  j["length"] = forest.length;
  auto& trees = j["trees"] = nlohmann::json::array();
  for (const auto& t : forest.trees) {
    nlohmann::json jt;
    for (Vec2 p : t.terminals) jt["terminals"].push_back({p[0], p[1]});
    jt["inner"] = nlohmann::json::array();
    for (Vec2 p : t.inner) jt["inner"].push_back({p[0], p[1]});
    for (auto [a, b] : t.edges) jt["edges"].push_back({a, b});
    jt["length"] = t.length;
    trees.push_back(jt);
  }
  return j.dump(2);
}

std::string forest_to_svg(const SteinerForest& forest) {
  double lo = -1.0, hi = 1.0;
  for (const auto& t : forest.trees)
    for (Vec2 p : t.terminals) {
      lo = std::min({lo, p[0] - 1, p[1] - 1});
      hi = std::max({hi, p[0] + 1, p[1] + 1});
    }
  double s = 400.0 / (hi - lo);
  auto X = [&](double v) { return (v - lo) * s; };
  auto Y = [&](double v) { return 400.0 - (v - lo) * s; };
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='400' height='400'>\n";
  for (const auto& t : forest.trees) {
    for (auto [a, b] : t.edges) {
      Vec2 pa = t.node(a), pb = t.node(b);
      svg << "<line x1='" << X(pa[0]) << "' y1='" << Y(pa[1]) << "' x2='" << X(pb[0])
          << "' y2='" << Y(pb[1]) << "' stroke='black' stroke-width='1.5'/>\n";
    }
    for (Vec2 p : t.terminals)
      svg << "<circle cx='" << X(p[0]) << "' cy='" << Y(p[1])
          << "' r='4' fill='crimson'/>\n";
    for (Vec2 p : t.inner)
      svg << "<circle cx='" << X(p[0]) << "' cy='" << Y(p[1])
          << "' r='3' fill='steelblue'/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace potts::steiner
