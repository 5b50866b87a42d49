#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "nsurf/normal_coords.hpp"

namespace nsurf {

/// A point where the surface meets an edge class; `index` counts from the
/// start of the edge in its positive direction.
struct SurfaceVertex {
  std::size_t edge_class;
  std::size_t index;
  friend auto operator<=>(const SurfaceVertex&, const SurfaceVertex&) = default;
};

/// A normal arc in a face class. `corner` is the cut-off vertex in the local
/// numbering of the face class's front side; `depth` counts arcs of the same
/// type outward from that corner. ends[0] lies on the front edge (corner, u)
/// and ends[1] on (corner, w), where u < w are the other face vertices.
struct SurfaceArc {
  std::size_t face_class;
  int corner;
  std::size_t depth;
  std::array<std::size_t, 2> ends;
  std::vector<std::pair<std::size_t, int>> disks;  // (disk id, +1 if traversed ends[0] -> ends[1])
  bool boundary = false;
};

/// A disk instance: copy `copy` of `kind` in tetrahedron `tet`. Its boundary
/// lists arc ids in cycle order together with traversal directions.
struct SurfaceDisk {
  std::size_t tet;
  int kind;
  std::size_t copy;
  std::vector<std::pair<std::size_t, int>> boundary;
};

/// The surface carried by an admissible vector as an explicit 2-complex.
class CellComplex {
 public:
  const std::vector<SurfaceVertex>& vertices() const { return vertices_; }
  const std::vector<SurfaceArc>& arcs() const { return arcs_; }
  const std::vector<SurfaceDisk>& disks() const { return disks_; }
  long euler() const {
    return static_cast<long>(vertices_.size()) - static_cast<long>(arcs_.size()) +
           static_cast<long>(disks_.size());
  }
  bool empty() const { return disks_.empty(); }

 private:
  friend CellComplex build_cell_complex(const Triangulation&, const NormalVector&);
  std::vector<SurfaceVertex> vertices_;
  std::vector<SurfaceArc> arcs_;
  std::vector<SurfaceDisk> disks_;
};

namespace detail {

inline std::vector<std::size_t> small_counts(const NormalVector& v) {
  static const Integer kLimit = 1'000'000;
  std::vector<std::size_t> out;
  out.reserve(v.size());
  for (const auto& c : v.coords) {
    if (c > kLimit)
      throw GuardError("coordinate " + c.str() + " too large to build an explicit cell complex");
    out.push_back(static_cast<std::size_t>(c));
  }
  return out;
}

/// Depth of the arc of disk (kind, copy) on face f cutting off `corner`,
/// counted outward from the corner among all arcs of that type in the tet.
inline std::size_t arc_depth(const std::vector<std::size_t>& counts, std::size_t base, int kind, std::size_t copy,
                             int corner) {
  if (disk::is_triangle(kind)) return copy;
  const std::size_t triangles = counts[base + static_cast<std::size_t>(corner)];
  if (disk::is_octagon(kind)) return triangles;
  const std::size_t n = counts[base + static_cast<std::size_t>(kind)];
  return triangles + (disk::on_low_edge(disk::pairing(kind), corner) ? copy : n - 1 - copy);
}

}  // namespace detail

/// Instantiates every normal disk with multiplicity and glues arcs across
/// faces. Parallel copies are numbered outward from the cut-off vertex
/// (triangles) or from the pairing edge containing vertex 0 (quads).
inline CellComplex build_cell_complex(const Triangulation& tri, const NormalVector& v) {
  if (!is_admissible(tri, v)) throw AdmissibilityError("vector is not admissible");
  const Skeleton sk(tri);
  const auto counts = detail::small_counts(v);
  std::vector<std::size_t> weights;
  for (const auto& w : edge_weights(tri, v)) weights.push_back(static_cast<std::size_t>(w));
  const int per = coords_per_tet(v.system);

  CellComplex cx;
  std::map<SurfaceVertex, std::size_t> vertex_id;
  std::map<std::tuple<std::size_t, int, std::size_t>, std::size_t> arc_id;

  // Point on tet-edge (from, to) at distance `depth` from `from`.
  auto point = [&](std::size_t t, int from, int to, std::size_t depth) {
    const int e = edge_index(from, to);
    const std::size_t cls = sk.edge_class(t, e);
    const std::size_t w = weights[cls];
    const std::size_t from_low = from < to ? depth : w - 1 - depth;
    const std::size_t idx = sk.edge_sign(t, e) > 0 ? from_low : w - 1 - from_low;
    SurfaceVertex key{cls, idx};
    auto [it, inserted] = vertex_id.emplace(key, cx.vertices_.size());
    if (inserted) cx.vertices_.push_back(key);
    return it->second;
  };

  for (std::size_t t = 0; t < tri.size(); ++t) {
    const std::size_t base = t * static_cast<std::size_t>(per);
    for (int kind = 0; kind < per; ++kind) {
      const auto cycle = disk::boundary_cycle(kind);
      for (std::size_t copy = 0; copy < counts[base + static_cast<std::size_t>(kind)]; ++copy) {
        const std::size_t did = cx.disks_.size();
        SurfaceDisk d{t, kind, copy, {}};
        for (const auto& step : cycle) {
          const std::size_t depth = detail::arc_depth(counts, base, kind, copy, step.corner);
          const std::size_t fc_id = sk.face_class(t, step.face);
          const FaceClass& fc = sk.face(fc_id);
          // Express the arc on the front side of its face class.
          const bool front = fc.front == FaceRef{t, step.face};
          const Perm4 to_front = front ? Perm4::identity() : fc.perm.inverse();
          const int corner = to_front[step.corner];
          const int from = to_front[step.from];
          const int to = to_front[step.to];
          const int dir = from < to ? 1 : -1;
          auto key = std::make_tuple(fc_id, corner, depth);
          auto found = arc_id.find(key);
          std::size_t aid;
          if (found == arc_id.end()) {
            aid = cx.arcs_.size();
            arc_id.emplace(key, aid);
            auto [ft, ff] = fc.front;
            auto others = face_vertices(ff);
            std::array<int, 2> uw{};
            int n = 0;
            for (int x : others)
              if (x != corner) uw[static_cast<std::size_t>(n++)] = x;
            SurfaceArc arc{fc_id, corner, depth,
                           {point(ft, corner, uw[0], depth), point(ft, corner, uw[1], depth)},
                           {},
                           fc.boundary()};
            cx.arcs_.push_back(std::move(arc));
          } else {
            aid = found->second;
          }
          cx.arcs_[aid].disks.emplace_back(did, dir);
          d.boundary.emplace_back(aid, dir);
        }
        cx.disks_.push_back(std::move(d));
      }
    }
  }
  for (const auto& a : cx.arcs_) {
    const std::size_t expect = a.boundary ? 1 : 2;
    if (a.disks.size() != expect)
      throw AdmissibilityError("arc in face class " + std::to_string(a.face_class) + " meets " +
                               std::to_string(a.disks.size()) + " disks");
  }
  return cx;
}

// ---------------------------------------------------------------------------
// Analysis

struct ComponentReport {
  long euler = 0;
  bool orientable = true;
  bool closed = true;
  std::size_t boundary_curves = 0;
  /// Orientable genus, or the number of cross-caps when non-orientable.
  long genus = 0;
  bool vertex_linking = false;
  std::size_t disk_count = 0;
  std::vector<std::size_t> disks;  // disk ids in the cell complex
};

struct SurfaceReport {
  std::vector<ComponentReport> components;
  bool connected = false;  // false for the empty surface
  std::size_t tube_candidates = 0;
  long euler() const {
    long s = 0;
    for (const auto& c : components) s += c.euler;
    return s;
  }
};

struct TubeCandidate {
  std::size_t tet;
  int kind;
  std::size_t copy;  // tube joins copies `copy` and `copy + 1`
  friend bool operator==(const TubeCandidate&, const TubeCandidate&) = default;
};

/// Adjacent parallel copies of one disk type: the places an unknotted tube
/// could join two normal disks. Vectors that already carry an octagon have
/// no room for a tube and yield no candidates.
inline std::vector<TubeCandidate> tube_candidates(const Triangulation& tri, const NormalVector& v) {
  if (!is_admissible(tri, v)) throw AdmissibilityError("vector is not admissible");
  std::vector<TubeCandidate> out;
  if (octagon_total(v) > 0) return out;
  const auto counts = detail::small_counts(v);
  const int per = coords_per_tet(v.system);
  for (std::size_t t = 0; t < tri.size(); ++t)
    for (int k = 0; k < std::min(per, 7); ++k) {
      const std::size_t n = counts[t * static_cast<std::size_t>(per) + static_cast<std::size_t>(k)];
      for (std::size_t c = 0; c + 1 < n; ++c) out.push_back({t, k, c});
    }
  return out;
}

inline SurfaceReport analyze(const Triangulation& tri, const NormalVector& v, const CellComplex& cx) {
  SurfaceReport report;
  const Skeleton sk(tri);
  const auto& disks = cx.disks();
  const auto& arcs = cx.arcs();

  // Components, with a transverse orientation propagated across arcs: two
  // disks sharing an arc must traverse it in opposite directions.
  std::vector<std::size_t> comp(disks.size(), SIZE_MAX);
  std::vector<int> orient(disks.size(), 0);
  std::vector<bool> comp_orientable;
  for (std::size_t s = 0; s < disks.size(); ++s) {
    if (comp[s] != SIZE_MAX) continue;
    const std::size_t c = comp_orientable.size();
    comp_orientable.push_back(true);
    comp[s] = c;
    orient[s] = 1;
    std::vector<std::size_t> stack{s};
    while (!stack.empty()) {
      const std::size_t d = stack.back();
      stack.pop_back();
      for (const auto& step : disks[d].boundary) {
        const std::size_t aid = step.first;
        const auto& arc = arcs[aid];
        if (arc.disks.size() != 2) continue;
        // Both incidences of the arc, including a disk meeting itself.
        auto [d0, s0] = arc.disks[0];
        auto [d1, s1] = arc.disks[1];
        for (auto [me, my_dir, other, other_dir] :
             {std::tuple{d0, s0, d1, s1}, std::tuple{d1, s1, d0, s0}}) {
          if (me != d) continue;
          const int want = -orient[d] * my_dir * other_dir;
          if (orient[other] == 0) {
            orient[other] = want;
            comp[other] = c;
            stack.push_back(other);
          } else if (orient[other] != want) {
            comp_orientable[c] = false;
          }
        }
      }
    }
  }

  report.components.resize(comp_orientable.size());
  for (std::size_t d = 0; d < disks.size(); ++d) {
    auto& cr = report.components[comp[d]];
    cr.disks.push_back(d);
    ++cr.disk_count;
  }

  // Arcs and vertices per component; boundary curves via shared vertices.
  std::vector<std::size_t> arc_comp(arcs.size());
  std::vector<long> comp_arcs(report.components.size(), 0), comp_vertices(report.components.size(), 0);
  std::vector<std::size_t> vertex_comp(cx.vertices().size(), SIZE_MAX);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const std::size_t c = comp[arcs[a].disks.front().first];
    arc_comp[a] = c;
    ++comp_arcs[c];
    for (auto vid : arcs[a].ends)
      if (vertex_comp[vid] == SIZE_MAX) {
        vertex_comp[vid] = c;
        ++comp_vertices[c];
      }
  }
  std::vector<std::size_t> parent(arcs.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::size_t> first_arc_at(cx.vertices().size(), SIZE_MAX);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    if (!arcs[a].boundary) continue;
    for (auto vid : arcs[a].ends) {
      if (first_arc_at[vid] == SIZE_MAX)
        first_arc_at[vid] = a;
      else
        parent[find(a)] = find(first_arc_at[vid]);
    }
  }
  for (std::size_t a = 0; a < arcs.size(); ++a)
    if (arcs[a].boundary && find(a) == a) ++report.components[arc_comp[a]].boundary_curves;

  for (std::size_t c = 0; c < report.components.size(); ++c) {
    auto& cr = report.components[c];
    cr.euler = comp_vertices[c] - comp_arcs[c] + static_cast<long>(cr.disk_count);
    cr.orientable = comp_orientable[c];
    cr.closed = cr.boundary_curves == 0;
    const long b = static_cast<long>(cr.boundary_curves);
    cr.genus = cr.orientable ? (2 - cr.euler - b) / 2 : 2 - cr.euler - b;

    // Vertex linking: only triangles, all at corners of one vertex class,
    // with equal multiplicity at every corner of that class.
    std::map<std::pair<std::size_t, int>, std::size_t> corner_count;
    bool triangles_only = true;
    for (auto d : cr.disks) {
      const auto& disk = disks[d];
      if (!disk::is_triangle(disk.kind)) {
        triangles_only = false;
        break;
      }
      ++corner_count[{disk.tet, disk.kind}];
    }
    if (triangles_only && !corner_count.empty()) {
      const std::size_t vc = sk.vertex_class(corner_count.begin()->first.first, corner_count.begin()->first.second);
      const std::size_t mult = corner_count.begin()->second;
      bool ok = true;
      for (auto [t, corner] : sk.vertex_reps(vc)) {
        auto it = corner_count.find({t, corner});
        if (it == corner_count.end() || it->second != mult) ok = false;
      }
      ok = ok && corner_count.size() == sk.vertex_reps(vc).size();
      cr.vertex_linking = ok;
    }
  }
  report.connected = report.components.size() == 1;
  report.tube_candidates = tube_candidates(tri, v).size();
  return report;
}

inline SurfaceReport analyze(const Triangulation& tri, const NormalVector& v) {
  return analyze(tri, v, build_cell_complex(tri, v));
}

}  // namespace nsurf
