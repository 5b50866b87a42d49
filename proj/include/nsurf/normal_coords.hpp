#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nsurf/error.hpp"
#include "nsurf/triangulation.hpp"

namespace nsurf {

using Integer = boost::multiprecision::cpp_int;

enum class CoordSystem { Normal, AlmostNormal };

constexpr int coords_per_tet(CoordSystem s) { return s == CoordSystem::Normal ? 7 : 10; }

inline std::string to_string(CoordSystem s) {
  return s == CoordSystem::Normal ? "normal" : "almost-normal";
}

// Disk kinds within a tetrahedron, in coordinate order:
//   0..3  Triangle(v)
//   4..6  Quad(01|23), Quad(02|13), Quad(03|12)
//   7..9  Octagon(01|23), Octagon(02|13), Octagon(03|12)
// A pairing q in {0,1,2} pairs vertex 0 with vertex q+1.
namespace disk {

constexpr bool is_triangle(int k) { return k < 4; }
constexpr bool is_quad(int k) { return k >= 4 && k < 7; }
constexpr bool is_octagon(int k) { return k >= 7; }
constexpr int pairing(int k) { return is_quad(k) ? k - 4 : k - 7; }

/// Vertex paired with v under pairing q.
constexpr int partner(int q, int v) {
  const int mate0 = q + 1;
  if (v == 0) return mate0;
  if (v == mate0) return 0;
  for (int w = 1; w < 4; ++w)
    if (w != v && w != mate0) return w;
  return -1;
}

/// True if v lies on the pairing edge that contains vertex 0.
constexpr bool on_low_edge(int q, int v) { return v == 0 || v == q + 1; }

/// Number of times disk kind k meets tetrahedron edge e.
constexpr int edge_incidence(int k, int e) {
  const int a = kEdgeVertices[static_cast<std::size_t>(e)][0];
  const int b = kEdgeVertices[static_cast<std::size_t>(e)][1];
  if (is_triangle(k)) return (a == k || b == k) ? 1 : 0;
  const bool paired = partner(pairing(k), a) == b;
  if (is_quad(k)) return paired ? 0 : 1;
  return paired ? 2 : 1;
}

/// Number of arcs of disk kind k on face f that cut off vertex v (v != f).
constexpr int arc_count(int k, int f, int v) {
  if (v == f) return 0;
  if (is_triangle(k)) return v == k ? 1 : 0;
  const int q = pairing(k);
  if (is_quad(k)) return v == partner(q, f) ? 1 : 0;
  return partner(q, v) != f ? 1 : 0;
}

/// One boundary arc of a disk: it lies on face `face`, cuts off `corner`, and
/// is traversed from tet-edge (corner,from) to tet-edge (corner,to).
struct ArcStep {
  int face;
  int corner;
  int from;
  int to;
};

/// The boundary cycle of disk kind k as a cyclic sequence of arcs.
inline std::vector<ArcStep> boundary_cycle(int k) {
  auto step = [](int v, int x, int y) { return ArcStep{6 - v - x - y, v, x, y}; };
  if (is_triangle(k)) {
    std::array<int, 3> o{};
    int n = 0;
    for (int w = 0; w < 4; ++w)
      if (w != k) o[static_cast<std::size_t>(n++)] = w;
    return {step(k, o[0], o[1]), step(k, o[1], o[2]), step(k, o[2], o[0])};
  }
  const int q = pairing(k);
  const int a = 0, b = q + 1;
  const int c = b == 1 ? 2 : 1;
  const int d = partner(q, c);
  if (is_quad(k)) {
    // corners ac -> ad -> bd -> bc
    return {step(a, c, d), step(d, a, b), step(b, d, c), step(c, b, a)};
  }
  // corners ab_a -> ac -> cd_c -> bc -> ab_b -> bd -> cd_d -> ad
  return {step(a, b, c), step(c, a, d), step(c, d, b), step(b, c, a),
          step(b, a, d), step(d, b, c), step(d, c, a), step(a, d, b)};
}

inline std::string name(int k) {
  static const char* pairs[] = {"01|23", "02|13", "03|12"};
  if (is_triangle(k)) return "T" + std::to_string(k);
  return std::string(is_quad(k) ? "Q" : "O") + pairs[pairing(k)];
}

}  // namespace disk

/// A coordinate vector in the normal (7 per tet) or almost-normal (10 per
/// tet) system. Coordinates are ordered per tetrahedron as triangles, quads,
/// then octagons.
struct NormalVector {
  CoordSystem system = CoordSystem::Normal;
  std::vector<Integer> coords;

  NormalVector() = default;
  NormalVector(CoordSystem s, std::vector<Integer> c) : system(s), coords(std::move(c)) {}
  static NormalVector zero(CoordSystem s, std::size_t tets) {
    return {s, std::vector<Integer>(tets * static_cast<std::size_t>(coords_per_tet(s)))};
  }

  std::size_t size() const { return coords.size(); }
  std::size_t tet_count() const { return coords.size() / static_cast<std::size_t>(coords_per_tet(system)); }
  const Integer& at(std::size_t tet, int kind) const {
    return coords[tet * static_cast<std::size_t>(coords_per_tet(system)) + static_cast<std::size_t>(kind)];
  }
  Integer& at(std::size_t tet, int kind) {
    return coords[tet * static_cast<std::size_t>(coords_per_tet(system)) + static_cast<std::size_t>(kind)];
  }
  bool is_zero() const {
    for (const auto& c : coords)
      if (c != 0) return false;
    return true;
  }

  friend bool operator==(const NormalVector& a, const NormalVector& b) {
    return a.system == b.system && a.coords == b.coords;
  }
  friend bool operator<(const NormalVector& a, const NormalVector& b) {
    if (a.system != b.system) return a.system < b.system;
    return a.coords < b.coords;
  }
};

using IntMatrix = std::vector<std::vector<std::int64_t>>;

inline std::size_t coord_count(const Triangulation& tri, CoordSystem s) {
  return tri.size() * static_cast<std::size_t>(coords_per_tet(s));
}

inline void require_dimension(const Triangulation& tri, const NormalVector& v) {
  if (v.size() != coord_count(tri, v.system))
    throw DimensionError("vector has " + std::to_string(v.size()) + " coordinates, expected " +
                         std::to_string(coord_count(tri, v.system)));
}

/// One row per (interior face class, arc type); arc types are the three
/// vertices of the front face in ascending order.
inline IntMatrix matching_matrix(const Triangulation& tri, CoordSystem s) {
  const Skeleton sk(tri);
  const int per = coords_per_tet(s);
  IntMatrix rows;
  for (const auto& fc : sk.faces()) {
    if (fc.boundary()) continue;
    auto [t, f] = fc.front;
    auto [u, g] = *fc.back;
    for (int v : face_vertices(f)) {
      std::vector<std::int64_t> row(coord_count(tri, s), 0);
      for (int k = 0; k < per; ++k) {
        row[t * per + k] += disk::arc_count(k, f, v);
        row[u * per + k] -= disk::arc_count(k, g, fc.perm[v]);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline bool satisfies_matching(const Triangulation& tri, const NormalVector& v) {
  require_dimension(tri, v);
  for (const auto& row : matching_matrix(tri, v.system)) {
    Integer acc = 0;
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] != 0) acc += row[i] * v.coords[i];
    if (acc != 0) return false;
  }
  return true;
}

inline Integer octagon_total(const NormalVector& v) {
  Integer total = 0;
  if (v.system != CoordSystem::AlmostNormal) return total;
  for (std::size_t t = 0; t < v.tet_count(); ++t)
    for (int k = 7; k < 10; ++k) total += v.at(t, k);
  return total;
}

/// The nonzero quad/octagon kind in a tetrahedron, -1 if none, -2 if several.
inline int exceptional_kind(const NormalVector& v, std::size_t tet) {
  int found = -1;
  for (int k = 4; k < coords_per_tet(v.system); ++k) {
    if (v.at(tet, k) == 0) continue;
    if (found != -1) return -2;
    found = k;
  }
  return found;
}

inline bool is_admissible(const Triangulation& tri, const NormalVector& v) {
  require_dimension(tri, v);
  for (const auto& c : v.coords)
    if (c < 0) return false;
  for (std::size_t t = 0; t < v.tet_count(); ++t)
    if (exceptional_kind(v, t) == -2) return false;
  if (octagon_total(v) > 1) return false;
  return satisfies_matching(tri, v);
}

/// Intersection count with each edge class.
inline std::vector<Integer> edge_weights(const Triangulation& tri, const NormalVector& v) {
  require_dimension(tri, v);
  const Skeleton sk(tri);
  const int per = coords_per_tet(v.system);
  std::vector<std::optional<Integer>> out(sk.edge_count());
  for (std::size_t t = 0; t < tri.size(); ++t) {
    for (int e = 0; e < 6; ++e) {
      Integer w = 0;
      for (int k = 0; k < per; ++k) w += disk::edge_incidence(k, e) * v.at(t, k);
      auto& slot = out[sk.edge_class(t, e)];
      if (!slot)
        slot = w;
      else if (*slot != w)
        throw InconsistentWeightsError("edge class " + std::to_string(sk.edge_class(t, e)) +
                                       " has representatives with weights " + slot->str() +
                                       " and " + w.str());
    }
  }
  std::vector<Integer> weights;
  weights.reserve(out.size());
  for (auto& w : out) weights.push_back(w.value_or(0));
  return weights;
}

/// Number of normal arcs on each face class (counted once per class).
inline std::vector<Integer> face_arc_counts(const Triangulation& tri, const NormalVector& v) {
  require_dimension(tri, v);
  const Skeleton sk(tri);
  const int per = coords_per_tet(v.system);
  std::vector<Integer> out;
  out.reserve(sk.face_count());
  for (const auto& fc : sk.faces()) {
    auto [t, f] = fc.front;
    Integer n = 0;
    for (int k = 0; k < per; ++k)
      for (int c : face_vertices(f)) n += disk::arc_count(k, f, c) * v.at(t, k);
    out.push_back(n);
  }
  return out;
}

/// V - E + F of the carried surface.
inline Integer euler_characteristic(const Triangulation& tri, const NormalVector& v) {
  Integer vertices = 0, edges = 0, faces = 0;
  for (const auto& w : edge_weights(tri, v)) vertices += w;
  for (const auto& a : face_arc_counts(tri, v)) edges += a;
  for (const auto& c : v.coords) faces += c;
  return vertices - edges + faces;
}

/// Total weight on boundary edge classes: the number of points where the
/// surface boundary crosses the 1-skeleton of the boundary.
inline Integer boundary_weight(const Triangulation& tri, const NormalVector& v) {
  const Skeleton sk(tri);
  auto w = edge_weights(tri, v);
  Integer total = 0;
  for (std::size_t e = 0; e < w.size(); ++e)
    if (sk.edge_on_boundary(e)) total += w[e];
  return total;
}

/// First tetrahedron where the two vectors carry different quad/octagon
/// kinds, or nullopt when they are compatible there.
inline std::optional<std::size_t> incompatible_tet(const NormalVector& a, const NormalVector& b) {
  for (std::size_t t = 0; t < a.tet_count(); ++t) {
    int ka = exceptional_kind(a, t), kb = exceptional_kind(b, t);
    if (ka == -2 || kb == -2) return t;
    if (ka >= 0 && kb >= 0 && ka != kb) return t;
  }
  return std::nullopt;
}

inline NormalVector haken_sum(const Triangulation& tri, const NormalVector& a, const NormalVector& b) {
  require_dimension(tri, a);
  require_dimension(tri, b);
  if (a.system != b.system) throw DimensionError("Haken sum of vectors in different systems");
  if (auto t = incompatible_tet(a, b))
    throw IncompatibleError(*t, "vectors carry different quad/octagon types in tetrahedron " +
                                    std::to_string(*t));
  if (octagon_total(a) + octagon_total(b) > 1)
    throw IncompatibleError(0, "Haken sum would carry more than one octagon");
  NormalVector out = a;
  for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += b.coords[i];
  return out;
}

/// The vertex-linking vector of a vertex class: one triangle at every corner
/// in the class.
inline NormalVector vertex_link(const Triangulation& tri, CoordSystem s, std::size_t vertex_class) {
  const Skeleton sk(tri);
  auto v = NormalVector::zero(s, tri.size());
  for (auto [t, corner] : sk.vertex_reps(vertex_class)) v.at(t, corner) += 1;
  return v;
}

}  // namespace nsurf
