#include "seqbound/vertexenum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "seqbound/tolerances.hpp"

namespace seqbound {

namespace {

struct V3 {
  double x = 0, y = 0, z = 0;
};

V3 operator-(const V3& a, const V3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
V3 operator+(const V3& a, const V3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
V3 operator*(const V3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double dot(const V3& a, const V3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
V3 cross(const V3& a, const V3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const V3& a) { return std::sqrt(dot(a, a)); }

// Raised on any degeneracy the exact-arithmetic-free hull cannot resolve;
// the caller retries once with joggled offsets.
struct HullError : std::runtime_error {
  explicit HullError(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic 3-D quickhull with conflict lists. Point order is fixed by
// the caller, every tie breaks toward the earlier index, and containers are
// only grown, so repeated runs produce identical facet lists.
class QuickHull {
 public:
  QuickHull(std::vector<V3> pts, double eps) : p_(std::move(pts)), eps_(eps) {}

  std::vector<std::array<int, 3>> run() {
    if (p_.size() < 4) throw HullError("hull needs at least 4 points");
    build_initial_simplex();
    std::size_t cones = 0;
    const std::size_t cone_cap = 4 * p_.size() + 64;
    while (!work_.empty()) {
      const int fi = work_.back();
      work_.pop_back();
      if (!faces_[fi].alive || faces_[fi].pts.empty()) continue;
      if (++cones > cone_cap) throw HullError("hull did not terminate");
      expand(fi);
    }
    std::vector<std::array<int, 3>> out;
    for (const Face& f : faces_) {
      if (!f.alive) continue;
      std::array<int, 3> t = f.v;
      std::sort(t.begin(), t.end());
      out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Face {
    std::array<int, 3> v;   // vertex indices, counter-clockwise from outside
    std::array<int, 3> nb;  // nb[i] shares the directed edge v[i] -> v[i+1]
    V3 n;                   // outward unit normal
    double d = 0;           // plane n . x = d
    std::vector<int> pts;   // unresolved points above this face
    bool alive = true;
  };

  std::vector<V3> p_;
  double eps_;
  std::vector<Face> faces_;
  std::vector<int> work_;     // faces that may still own conflict points
  std::vector<int> visit_;    // visit epoch per face, for the visibility walk
  int epoch_ = 0;
  V3 inner_;                  // strictly interior reference point

  double height(const Face& f, int pt) const { return dot(f.n, p_[pt]) - f.d; }

  // Plane through three points, oriented away from inner_.
  void set_plane(Face& f) {
    const V3 a = p_[f.v[0]];
    V3 n = cross(p_[f.v[1]] - a, p_[f.v[2]] - a);
    const double len = norm(n);
    if (!(len > 1e-30)) throw HullError("degenerate facet");
    n = n * (1.0 / len);
    double d = dot(n, a);
    if (dot(n, inner_) - d > 0) {
      std::swap(f.v[1], f.v[2]);
      n = n * -1.0;
      d = -d;
    }
    f.n = n;
    f.d = d;
  }

  int edge_index(const Face& f, int from, int to) const {
    for (int i = 0; i < 3; ++i) {
      if (f.v[i] == from && f.v[(i + 1) % 3] == to) return i;
    }
    throw HullError("broken adjacency");
  }

  void build_initial_simplex() {
    const int n = static_cast<int>(p_.size());
    // Two extremes along the widest axis-aligned spread.
    int i0 = 0, i1 = 0;
    double best = -1;
    for (int axis = 0; axis < 3; ++axis) {
      int lo = 0, hi = 0;
      for (int i = 1; i < n; ++i) {
        const double v = axis == 0 ? p_[i].x : axis == 1 ? p_[i].y : p_[i].z;
        const double vlo = axis == 0 ? p_[lo].x : axis == 1 ? p_[lo].y : p_[lo].z;
        const double vhi = axis == 0 ? p_[hi].x : axis == 1 ? p_[hi].y : p_[hi].z;
        if (v < vlo) lo = i;
        if (v > vhi) hi = i;
      }
      const double spread = norm(p_[hi] - p_[lo]);
      if (spread > best) {
        best = spread;
        i0 = lo;
        i1 = hi;
      }
    }
    if (!(best > 1e-12)) throw HullError("all points coincide");
    // Farthest from the line (i0, i1), then farthest from the plane.
    const V3 dir = (p_[i1] - p_[i0]) * (1.0 / best);
    int i2 = -1;
    double best2 = 1e-12;
    for (int i = 0; i < n; ++i) {
      const V3 r = p_[i] - p_[i0];
      const double h = norm(r - dir * dot(r, dir));
      if (h > best2) {
        best2 = h;
        i2 = i;
      }
    }
    if (i2 < 0) throw HullError("input is collinear");
    V3 pn = cross(p_[i1] - p_[i0], p_[i2] - p_[i0]);
    pn = pn * (1.0 / norm(pn));
    const double pd = dot(pn, p_[i0]);
    int i3 = -1;
    double best3 = 1e-12;
    for (int i = 0; i < n; ++i) {
      const double h = std::abs(dot(pn, p_[i]) - pd);
      if (h > best3) {
        best3 = h;
        i3 = i;
      }
    }
    if (i3 < 0) throw HullError("input is coplanar");

    inner_ = (p_[i0] + p_[i1] + p_[i2] + p_[i3]) * 0.25;
    const std::array<std::array<int, 3>, 4> tris = {{
        {i0, i1, i2}, {i0, i1, i3}, {i0, i2, i3}, {i1, i2, i3}}};
    for (const auto& t : tris) {
      Face f;
      f.v = t;
      set_plane(f);
      f.nb = {-1, -1, -1};
      faces_.push_back(f);
    }
    // Link the four faces by matching opposite directed edges.
    for (int a = 0; a < 4; ++a) {
      for (int i = 0; i < 3; ++i) {
        if (faces_[a].nb[i] >= 0) continue;
        const int from = faces_[a].v[i], to = faces_[a].v[(i + 1) % 3];
        for (int b = 0; b < 4; ++b) {
          if (b == a) continue;
          for (int j = 0; j < 3; ++j) {
            if (faces_[b].v[j] == to && faces_[b].v[(j + 1) % 3] == from) {
              faces_[a].nb[i] = b;
              faces_[b].nb[j] = a;
            }
          }
        }
        if (faces_[a].nb[i] < 0) throw HullError("initial simplex not closed");
      }
    }
    // Seed conflict lists.
    for (int i = 0; i < n; ++i) {
      if (i == i0 || i == i1 || i == i2 || i == i3) continue;
      int bf = -1;
      double bh = eps_;
      for (int f = 0; f < 4; ++f) {
        const double h = height(faces_[f], i);
        if (h > bh) {
          bh = h;
          bf = f;
        }
      }
      if (bf >= 0) faces_[bf].pts.push_back(i);
    }
    visit_.assign(faces_.size(), 0);
    for (int f = 0; f < 4; ++f) {
      if (!faces_[f].pts.empty()) work_.push_back(f);
    }
  }

  void expand(int start) {
    // Eye point: farthest conflict point of the starting face.
    const Face& sf = faces_[start];
    int eye = sf.pts[0];
    double bh = height(sf, eye);
    for (std::size_t k = 1; k < sf.pts.size(); ++k) {
      const double h = height(sf, sf.pts[k]);
      if (h > bh) {
        bh = h;
        eye = sf.pts[k];
      }
    }

    // Flood-fill the faces visible from the eye.
    ++epoch_;
    std::vector<int> visible;
    std::vector<int> stack = {start};
    visit_[start] = epoch_;
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      visible.push_back(f);
      for (int i = 0; i < 3; ++i) {
        const int g = faces_[f].nb[i];
        if (visit_[g] == epoch_) continue;
        if (height(faces_[g], eye) > eps_) {
          visit_[g] = epoch_;
          stack.push_back(g);
        }
      }
    }

    // Horizon: directed edges of visible faces whose neighbor stays hidden.
    struct HorizonEdge {
      int from, to, outside;
    };
    std::vector<HorizonEdge> horizon;
    for (const int f : visible) {
      for (int i = 0; i < 3; ++i) {
        const int g = faces_[f].nb[i];
        if (visit_[g] == epoch_) continue;
        horizon.push_back({faces_[f].v[i], faces_[f].v[(i + 1) % 3], g});
      }
    }
    if (horizon.size() < 3) throw HullError("horizon collapsed");

    // One new face per horizon edge, stitched to the hidden neighbor now and
    // to its siblings through shared eye edges afterwards.
    std::unordered_map<int, int> face_from, face_to;  // horizon endpoint -> new face
    std::vector<int> created;
    for (const HorizonEdge& e : horizon) {
      Face f;
      f.v = {e.from, e.to, eye};
      set_plane(f);
      if (f.v[2] != eye) throw HullError("inverted cone facet");
      f.nb = {e.outside, -1, -1};
      const int nf = static_cast<int>(faces_.size());
      faces_.push_back(f);
      visit_.push_back(0);
      faces_[e.outside].nb[edge_index(faces_[e.outside], e.to, e.from)] = nf;
      if (!face_from.emplace(e.from, nf).second) throw HullError("pinched horizon");
      if (!face_to.emplace(e.to, nf).second) throw HullError("pinched horizon");
      created.push_back(nf);
    }
    for (const int nf : created) {
      Face& f = faces_[nf];
      const auto next = face_from.find(f.v[1]);  // shares edge (to, eye)
      const auto prev = face_to.find(f.v[0]);    // shares edge (eye, from)
      if (next == face_from.end() || prev == face_to.end()) {
        throw HullError("open horizon");
      }
      f.nb[1] = next->second;
      f.nb[2] = prev->second;
    }

    // Re-home conflict points of the dead faces onto the cone.
    for (const int f : visible) {
      for (const int pt : faces_[f].pts) {
        if (pt == eye) continue;
        int bf = -1;
        double h_best = eps_;
        for (const int nf : created) {
          const double h = height(faces_[nf], pt);
          if (h > h_best) {
            h_best = h;
            bf = nf;
          }
        }
        if (bf >= 0) faces_[bf].pts.push_back(pt);
      }
      faces_[f].alive = false;
      faces_[f].pts.clear();
      faces_[f].pts.shrink_to_fit();
    }
    for (const int nf : created) {
      if (!faces_[nf].pts.empty()) work_.push_back(nf);
    }
  }
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Spatial hash over cells of the dedup radius; candidate pairs only need to
// check the 27 surrounding cells.
struct CellHash {
  double cell;
  std::unordered_map<std::uint64_t, std::vector<int>> bins;

  static std::uint64_t key(std::int64_t qx, std::int64_t qy, std::int64_t qz) {
    std::uint64_t h = static_cast<std::uint64_t>(qx) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<std::uint64_t>(qy) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(qz) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }

  bool has_near(const std::array<double, 3>& p,
                const std::vector<std::array<double, 3>>& stored) const {
    const std::int64_t qx = static_cast<std::int64_t>(std::floor(p[0] / cell));
    const std::int64_t qy = static_cast<std::int64_t>(std::floor(p[1] / cell));
    const std::int64_t qz = static_cast<std::int64_t>(std::floor(p[2] / cell));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const auto it = bins.find(key(qx + dx, qy + dy, qz + dz));
          if (it == bins.end()) continue;
          for (const int j : it->second) {
            const double ex = p[0] - stored[j][0];
            const double ey = p[1] - stored[j][1];
            const double ez = p[2] - stored[j][2];
            if (ex * ex + ey * ey + ez * ez <= cell * cell) return true;
          }
        }
      }
    }
    return false;
  }

  void insert(const std::array<double, 3>& p, int idx) {
    const std::int64_t qx = static_cast<std::int64_t>(std::floor(p[0] / cell));
    const std::int64_t qy = static_cast<std::int64_t>(std::floor(p[1] / cell));
    const std::int64_t qz = static_cast<std::int64_t>(std::floor(p[2] / cell));
    bins[key(qx, qy, qz)].push_back(idx);
  }
};

}  // namespace

VertexSet enumerate_vertices(QPolytope& p) {
  const auto& hs = p.halfspaces;
  const int h = static_cast<int>(hs.size());
  if (h < 4) throw std::invalid_argument("enumerate_vertices: fewer than 4 halfspaces");

  // Interior point for the dual transform: measure the minimum slack at the
  // half-shrunk simplex centroid, then place the origin at (1,1,1)*t/3 with
  // t = slack/2. Trivial one-outcome strategies keep that point strictly
  // inside every certified halfspace.
  const std::array<double, 3> c0 = {1.0 / 6, 1.0 / 6, 1.0 / 6};
  double min_slack = std::numeric_limits<double>::infinity();
  for (const Halfspace3& f : hs) {
    const double s = f.offset -
        (f.normal[0] * c0[0] + f.normal[1] * c0[1] + f.normal[2] * c0[2]);
    min_slack = std::min(min_slack, s);
  }
  if (!(min_slack > 0)) {
    throw std::runtime_error("enumerate_vertices: no interior point found");
  }
  const double t = 0.5 * min_slack;
  const std::array<double, 3> c = {t / 3, t / 3, t / 3};

  VertexSet vs;
  std::vector<double> offsets(h);
  for (int i = 0; i < h; ++i) offsets[i] = hs[i].offset;

  std::vector<std::array<int, 3>> facets;
  for (int attempt = 0;; ++attempt) {
    // Polar duality about c: halfspace a.x <= b maps to point a / (b - a.c).
    std::vector<V3> duals(h);
    double scale = 1.0;
    bool ok = true;
    for (int i = 0; i < h; ++i) {
      const auto& a = hs[i].normal;
      const double bp = offsets[i] -
          (a[0] * c[0] + a[1] * c[1] + a[2] * c[2]);
      if (!(bp > 1e-13)) {
        ok = false;
        break;
      }
      duals[i] = {a[0] / bp, a[1] / bp, a[2] / bp};
      scale = std::max({scale, std::abs(duals[i].x), std::abs(duals[i].y),
                        std::abs(duals[i].z)});
    }
    try {
      if (!ok) throw HullError("interior point too close to a plane");
      facets = QuickHull(duals, 1e-9 * scale).run();
      break;
    } catch (const HullError& err) {
      if (attempt >= 1) {
        throw std::runtime_error(std::string("enumerate_vertices: ") + err.what());
      }
      // Joggle strictly upward so the perturbed region contains the original
      // one; the feasibility filter below still checks original offsets.
      for (int i = 0; i < h; ++i) {
        const double u = static_cast<double>(
            splitmix64(static_cast<std::uint64_t>(i)) >> 11) * 0x1.0p-53;
        offsets[i] = hs[i].offset + (0.5 + 0.5 * u) * tol::joggle_magnitude;
      }
      vs.joggled = true;
    }
  }

  // Hull facets correspond to plane triples meeting at a primal vertex.
  // Solve each 3x3 system by Cramer's rule on the (possibly joggled) offsets.
  std::vector<std::array<double, 3>> cand_pts;
  std::vector<std::array<int, 3>> cand_tri;
  for (const auto& f : facets) {
    const auto& n0 = hs[f[0]].normal;
    const auto& n1 = hs[f[1]].normal;
    const auto& n2 = hs[f[2]].normal;
    const V3 a{n0[0], n0[1], n0[2]}, b{n1[0], n1[1], n1[2]}, d{n2[0], n2[1], n2[2]};
    const V3 bxd = cross(b, d), dxa = cross(d, a), axb = cross(a, b);
    const double det = dot(a, bxd);
    const double sc = std::max(1.0, norm(a) * norm(b) * norm(d));
    if (std::abs(det) <= 1e-12 * sc) continue;
    const V3 x = (bxd * offsets[f[0]] + dxa * offsets[f[1]] + axb * offsets[f[2]]) *
        (1.0 / det);
    cand_pts.push_back({x.x, x.y, x.z});
    cand_tri.push_back(f);
  }

  // Merge near-coincident intersection points (several triples of a degenerate
  // vertex resolve to the same location); keep the first triple seen.
  CellHash dedup{tol::vertex_dedup, {}};
  std::vector<std::array<double, 3>> pts;
  std::vector<std::array<int, 3>> tris;
  for (std::size_t i = 0; i < cand_pts.size(); ++i) {
    if (dedup.has_near(cand_pts[i], pts)) continue;
    dedup.insert(cand_pts[i], static_cast<int>(pts.size()));
    pts.push_back(cand_pts[i]);
    tris.push_back(cand_tri[i]);
  }

  // Drop hull artifacts that violate the original system beyond tolerance.
  std::vector<double> a0(h), a1(h), a2(h), bb(h);
  for (int i = 0; i < h; ++i) {
    a0[i] = hs[i].normal[0];
    a1[i] = hs[i].normal[1];
    a2[i] = hs[i].normal[2];
    bb[i] = hs[i].offset;
  }
  std::vector<std::array<double, 3>> kept_pts;
  std::vector<std::array<int, 3>> kept_tris;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool feasible = true;
    for (int j = 0; j < h; ++j) {
      const double v = a0[j] * pts[i][0] + a1[j] * pts[i][1] + a2[j] * pts[i][2];
      if (v > bb[j] + tol::vertex_feasibility) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      kept_pts.push_back(pts[i]);
      kept_tris.push_back(tris[i]);
    } else {
      ++vs.dropped_infeasible;
    }
  }

  // A coordinate permutation that maps the halfspace set onto itself exactly
  // maps vertices to vertices with exactly the same slacks. The hull can
  // still resolve a near-degenerate corner differently in each orientation,
  // so close the kept set under every detected permutation.
  {
    std::map<std::pair<std::array<double, 3>, double>, int> plane_index;
    for (int i = 0; i < h; ++i)
      plane_index.emplace(std::make_pair(hs[i].normal, hs[i].offset), i);
    constexpr std::array<std::array<int, 3>, 5> perms{{
        {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    std::vector<std::pair<std::array<int, 3>, std::vector<int>>> syms;
    for (const auto& perm : perms) {
      std::vector<int> sigma(h);
      bool closed = true;
      for (int i = 0; i < h && closed; ++i) {
        const auto& n = hs[i].normal;
        const std::array<double, 3> image{n[perm[0]], n[perm[1]], n[perm[2]]};
        const auto it = plane_index.find({image, hs[i].offset});
        if (it == plane_index.end()) closed = false;
        else sigma[i] = it->second;
      }
      if (closed) syms.emplace_back(perm, std::move(sigma));
    }
    if (!syms.empty()) {
      CellHash keep{tol::vertex_dedup, {}};
      for (std::size_t i = 0; i < kept_pts.size(); ++i)
        keep.insert(kept_pts[i], static_cast<int>(i));
      for (std::size_t i = 0; i < kept_pts.size(); ++i) {
        for (const auto& [perm, sigma] : syms) {
          const std::array<double, 3> v = kept_pts[i];
          const std::array<double, 3> image{v[perm[0]], v[perm[1]], v[perm[2]]};
          if (keep.has_near(image, kept_pts)) continue;
          std::array<int, 3> tri{sigma[kept_tris[i][0]], sigma[kept_tris[i][1]],
                                 sigma[kept_tris[i][2]]};
          std::sort(tri.begin(), tri.end());
          keep.insert(image, static_cast<int>(kept_pts.size()));
          kept_pts.push_back(image);
          kept_tris.push_back(tri);
        }
      }
    }
  }

  std::vector<int> order(kept_pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int l, int r) {
    if (kept_pts[l] != kept_pts[r]) return kept_pts[l] < kept_pts[r];
    return kept_tris[l] < kept_tris[r];
  });
  for (const int i : order) {
    vs.points.push_back(kept_pts[i]);
    vs.generating_triples.push_back(kept_tris[i]);
  }

  p.vertices = vs.points;
  return vs;
}

}  // namespace seqbound
