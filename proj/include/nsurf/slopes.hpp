#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nsurf/enumeration.hpp"

namespace nsurf {

// Local edges of a face with ascending vertices (i, j, k):
//   0: (i, j)   1: (j, k)   2: (i, k)
// Walking the face boundary i -> j -> k -> i traverses edges 0, 1 forwards
// and edge 2 backwards.

/// The single boundary component of a triangulation, when it is a torus
/// built from two triangles with one vertex.
struct BoundaryTorus {
  struct Face {
    std::size_t face_class;
    std::size_t tet;
    int face;
    std::array<int, 3> verts;         // ascending tet-local vertices
    int orientation;                  // +1 if i -> j -> k is the induced boundary orientation
    std::array<std::size_t, 3> edge;  // slot in `edges` for each local edge
    std::array<int, 3> edge_sign;     // +1 if local low -> high agrees with the edge class
  };
  std::array<Face, 2> faces;
  std::array<std::size_t, 3> edges;  // boundary edge classes, ascending
  std::size_t vertex;
  // Basis: the two lowest boundary edge classes, i.e. edges[0] and edges[1].
  std::size_t e1() const { return edges[0]; }
  std::size_t e2() const { return edges[1]; }

  static constexpr std::array<std::array<int, 2>, 3> kLocalEdge{{{0, 1}, {1, 2}, {0, 2}}};

  /// Local edge index of the face edge joining tet vertices x and y.
  int local_edge(int face_index, int x, int y) const {
    const auto& v = faces[static_cast<std::size_t>(face_index)].verts;
    for (int e = 0; e < 3; ++e) {
      const int a = v[static_cast<std::size_t>(kLocalEdge[static_cast<std::size_t>(e)][0])];
      const int b = v[static_cast<std::size_t>(kLocalEdge[static_cast<std::size_t>(e)][1])];
      if ((a == x && b == y) || (a == y && b == x)) return e;
    }
    return -1;
  }
};

inline BoundaryTorus boundary_torus(const Triangulation& tri) {
  const Skeleton sk(tri);
  const auto& comps = sk.boundary_components();
  if (comps.empty()) throw PreconditionError("no_torus_boundary", "triangulation has no torus boundary");
  if (comps.size() != 1)
    throw PreconditionError("no_torus_boundary", "expected one boundary component, found " + std::to_string(comps.size()));
  const auto& bc = comps.front();
  if (!bc.one_vertex_torus())
    throw PreconditionError("no_torus_boundary", "boundary is not a one-vertex torus");
  const auto orient = tet_orientation(tri);
  if (!orient) throw PreconditionError("non_orientable", "slopes need an orientable triangulation");

  BoundaryTorus torus{};
  auto edges = bc.edges;
  std::sort(edges.begin(), edges.end());
  std::copy(edges.begin(), edges.end(), torus.edges.begin());
  torus.vertex = bc.vertices.front();
  auto faces = bc.faces;
  std::sort(faces.begin(), faces.end());
  for (std::size_t i = 0; i < 2; ++i) {
    const FaceClass& fc = sk.face(faces[i]);
    auto& f = torus.faces[i];
    f.face_class = faces[i];
    f.tet = fc.front.tet;
    f.face = fc.front.face;
    f.verts = face_vertices(f.face);
    f.orientation = (*orient)[f.tet] * (f.face % 2 == 0 ? 1 : -1);
    for (std::size_t e = 0; e < 3; ++e) {
      const int x = f.verts[static_cast<std::size_t>(BoundaryTorus::kLocalEdge[e][0])];
      const int y = f.verts[static_cast<std::size_t>(BoundaryTorus::kLocalEdge[e][1])];
      const int te = edge_index(x, y);
      const std::size_t cls = sk.edge_class(f.tet, te);
      f.edge[e] = static_cast<std::size_t>(std::find(torus.edges.begin(), torus.edges.end(), cls) - torus.edges.begin());
      f.edge_sign[e] = sk.edge_sign(f.tet, te);
    }
  }
  return torus;
}

/// Unoriented slope (p, q): signed intersection numbers with e1 and e2,
/// normalized so that p > 0, or p == 0 and q > 0.
struct Slope {
  long p = 0;
  long q = 0;
  long multiplicity = 0;
  friend auto operator<=>(const Slope&, const Slope&) = default;
};

/// A system of disjoint chords in the two boundary triangles whose endpoints
/// pair up across boundary edges into closed curves.
class CurveSystem {
 public:
  struct Point {
    std::size_t edge;   // slot in BoundaryTorus::edges
    std::size_t index;  // position along the edge class direction
    friend auto operator<=>(const Point&, const Point&) = default;
  };
  struct End {
    std::size_t point;
    int local_edge;
    std::size_t param;  // position around the face boundary i -> j -> k
    int exit_sign;      // intersection sign with the edge class when leaving the face here
  };
  struct Chord {
    int face;
    std::array<End, 2> ends;
  };
  /// One closed curve: chords with traversal direction (+1: ends[0] -> ends[1]).
  using Cycle = std::vector<std::pair<std::size_t, int>>;

  const std::vector<Point>& points() const { return points_; }
  const std::vector<Chord>& chords() const { return chords_; }
  const std::array<std::size_t, 3>& weights() const { return weights_; }
  bool empty() const { return chords_.empty(); }

  /// Chords as (face, endpoint points) with slot order forgotten.
  std::vector<std::array<std::size_t, 3>> canonical() const {
    std::vector<std::array<std::size_t, 3>> out;
    for (const auto& c : chords_) {
      auto [lo, hi] = std::minmax(c.ends[0].point, c.ends[1].point);
      out.push_back({static_cast<std::size_t>(c.face), lo, hi});
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  friend bool operator==(const CurveSystem& a, const CurveSystem& b) {
    return a.points_ == b.points_ && a.canonical() == b.canonical();
  }
  std::size_t chords_in_face(int face) const {
    return static_cast<std::size_t>(std::count_if(chords_.begin(), chords_.end(),
                                                  [&](const Chord& c) { return c.face == face; }));
  }

  std::vector<Cycle> cycles() const {
    std::vector<std::array<std::pair<std::size_t, int>, 2>> at(points_.size(),
                                                                {std::pair{SIZE_MAX, 0}, std::pair{SIZE_MAX, 0}});
    for (std::size_t c = 0; c < chords_.size(); ++c)
      for (int e = 0; e < 2; ++e) {
        auto& slot = at[chords_[c].ends[static_cast<std::size_t>(e)].point];
        (slot[0].first == SIZE_MAX ? slot[0] : slot[1]) = {c, e};
      }
    std::vector<bool> seen(chords_.size(), false);
    std::vector<Cycle> out;
    for (std::size_t start = 0; start < chords_.size(); ++start) {
      if (seen[start]) continue;
      Cycle cyc;
      std::size_t c = start;
      int from = 0;
      while (!seen[c]) {
        seen[c] = true;
        cyc.emplace_back(c, from == 0 ? 1 : -1);
        const std::size_t p = chords_[c].ends[static_cast<std::size_t>(1 - from)].point;
        const auto& slot = at[p];
        const auto next = slot[0] == std::pair{c, 1 - from} ? slot[1] : slot[0];
        c = next.first;
        from = next.second;
      }
      out.push_back(std::move(cyc));
    }
    return out;
  }

 private:
  friend CurveSystem curves_from_arc_counts(const BoundaryTorus&, const std::array<std::array<std::size_t, 3>, 2>&);
  friend CurveSystem band_sum(const CurveSystem&, std::size_t, std::size_t);
  std::vector<Point> points_;
  std::vector<Chord> chords_;
  std::array<std::size_t, 3> weights_{};
};

/// Builds normal curves from arc counts: counts[i][c] arcs in boundary face i
/// cut off the face vertex verts[c]. Arcs are stacked outward from their corner.
inline CurveSystem curves_from_arc_counts(const BoundaryTorus& torus,
                                          const std::array<std::array<std::size_t, 3>, 2>& counts) {
  CurveSystem cs;
  std::array<std::optional<std::size_t>, 3> weight;
  std::array<std::array<std::size_t, 3>, 2> local_weight{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t e = 0; e < 3; ++e) {
      const auto [a, b] = BoundaryTorus::kLocalEdge[e];
      const std::size_t w = counts[i][static_cast<std::size_t>(a)] + counts[i][static_cast<std::size_t>(b)];
      local_weight[i][e] = w;
      auto& slot = weight[torus.faces[i].edge[e]];
      if (slot && *slot != w)
        throw InconsistentWeightsError("boundary edge class " + std::to_string(torus.edges[torus.faces[i].edge[e]]) +
                                       " has weights " + std::to_string(*slot) + " and " + std::to_string(w));
      slot = w;
    }
  for (std::size_t s = 0; s < 3; ++s) cs.weights_[s] = weight[s].value_or(0);

  std::map<CurveSystem::Point, std::size_t> ids;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& f = torus.faces[i];
    const auto& lw = local_weight[i];
    // Point at distance d from local vertex `from` along local edge e.
    auto end = [&](int e, int from, std::size_t d) {
      const std::size_t w = lw[static_cast<std::size_t>(e)];
      const int lo = BoundaryTorus::kLocalEdge[static_cast<std::size_t>(e)][0];
      const std::size_t pos_low = from == lo ? d : w - 1 - d;
      const std::size_t idx = f.edge_sign[static_cast<std::size_t>(e)] > 0 ? pos_low : w - 1 - pos_low;
      CurveSystem::Point pt{f.edge[static_cast<std::size_t>(e)], idx};
      auto [it, inserted] = ids.emplace(pt, cs.points_.size());
      if (inserted) cs.points_.push_back(pt);
      std::size_t param = 0;
      if (e == 0) param = pos_low;
      if (e == 1) param = lw[0] + pos_low;
      if (e == 2) param = lw[0] + lw[1] + (w - 1 - pos_low);
      const int forward = e == 2 ? -1 : 1;
      return CurveSystem::End{it->second, e, param, f.orientation * forward * f.edge_sign[static_cast<std::size_t>(e)]};
    };
    for (int c = 0; c < 3; ++c) {
      std::array<int, 2> at{};  // the two local edges meeting corner c
      int n = 0;
      for (int e = 0; e < 3; ++e) {
        auto [a, b] = BoundaryTorus::kLocalEdge[static_cast<std::size_t>(e)];
        if (a == c || b == c) at[static_cast<std::size_t>(n++)] = e;
      }
      for (std::size_t d = 0; d < counts[i][static_cast<std::size_t>(c)]; ++d)
        cs.chords_.push_back({static_cast<int>(i), {end(at[0], c, d), end(at[1], c, d)}});
    }
  }
  return cs;
}

/// Normal curves cut out on the boundary torus by an admissible vector.
inline CurveSystem boundary_curves(const Triangulation& tri, const NormalVector& v) {
  const BoundaryTorus torus = boundary_torus(tri);
  if (!is_admissible(tri, v)) throw AdmissibilityError("vector is not admissible");
  const int per = coords_per_tet(v.system);
  std::array<std::array<std::size_t, 3>, 2> counts{};
  static const Integer kLimit = 1'000'000;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& f = torus.faces[i];
    for (std::size_t c = 0; c < 3; ++c) {
      Integer n = 0;
      for (int k = 0; k < per; ++k) n += disk::arc_count(k, f.face, f.verts[c]) * v.at(f.tet, k);
      if (n > kLimit) throw GuardError("boundary arc count " + n.str() + " too large to trace");
      counts[i][c] = static_cast<std::size_t>(n);
    }
  }
  return curves_from_arc_counts(torus, counts);
}

/// Homology class (signed intersections with e1, e2) of one traversed cycle.
inline std::pair<long, long> cycle_class(const CurveSystem& cs, const CurveSystem::Cycle& cycle) {
  long p = 0, q = 0;
  for (auto [c, dir] : cycle) {
    const auto& exit = cs.chords()[c].ends[dir > 0 ? 1 : 0];
    const std::size_t slot = cs.points()[exit.point].edge;
    if (slot == 0) p += exit.exit_sign;
    if (slot == 1) q += exit.exit_sign;
  }
  return {p, q};
}

inline std::pair<long, long> canonical_sign(long p, long q) {
  if (p < 0 || (p == 0 && q < 0)) return {-p, -q};
  return {p, q};
}

/// Classes of all components, sign-normalized; (0, 0) marks a curve that
/// bounds a disk.
inline std::vector<std::pair<long, long>> component_classes(const CurveSystem& cs) {
  std::vector<std::pair<long, long>> out;
  for (const auto& cyc : cs.cycles()) {
    auto [p, q] = cycle_class(cs, cyc);
    out.push_back(canonical_sign(p, q));
  }
  return out;
}

/// Strict slope of a curve system whose components are parallel and essential.
inline Slope slope_of(const BoundaryTorus&, const CurveSystem& cs) {
  if (cs.empty()) throw SlopeError("empty_system", "curve system is empty");
  const auto classes = component_classes(cs);
  for (const auto& c : classes)
    if (c == std::pair<long, long>{0, 0}) throw SlopeError("null_homotopic", "curve system has an inessential component");
  for (const auto& c : classes)
    if (c != classes.front()) throw SlopeError("mixed_slopes", "components have different slopes");
  auto [p, q] = classes.front();
  const long g = std::gcd(p, q);
  if (g != 1) throw SlopeError("not_simple", "component class is not primitive");
  return {p, q, static_cast<long>(classes.size())};
}

/// Slope of the essential components, ignoring inessential ones; nullopt if
/// every component is inessential.
inline std::optional<Slope> essential_slope(const BoundaryTorus& torus, const CurveSystem& cs) {
  auto classes = component_classes(cs);
  std::erase(classes, std::pair<long, long>{0, 0});
  if (classes.empty()) return std::nullopt;
  for (const auto& c : classes)
    if (c != classes.front()) throw SlopeError("mixed_slopes", "components have different slopes");
  (void)torus;
  auto [p, q] = classes.front();
  return Slope{p, q, static_cast<long>(classes.size())};
}

namespace detail {

// u strictly inside the cyclic interval running forward from lo to hi.
inline bool cyclic_between(std::size_t u, std::size_t lo, std::size_t hi) {
  if (lo < hi) return lo < u && u < hi;
  return u > lo || u < hi;
}

// Chord endpoints ordered (a_x, a_y, b_x, b_y) around the face boundary.
inline std::array<std::size_t, 4> band_order(const CurveSystem& cs, std::size_t a, std::size_t b) {
  const auto& A = cs.chords()[a].ends;
  const auto& B = cs.chords()[b].ends;
  // Pick a_x so that walking forward from a_y meets B before a_x.
  const bool b_after_0 = cyclic_between(B[0].param, A[0].param, A[1].param);
  const std::array<std::size_t, 2> ax_ay = b_after_0 ? std::array<std::size_t, 2>{1, 0} : std::array<std::size_t, 2>{0, 1};
  const std::size_t ay = A[ax_ay[1]].param;
  const std::size_t bx_first = cyclic_between(B[1].param, ay, B[0].param) ? 1 : 0;
  return {ax_ay[0], ax_ay[1], bx_first, 1 - bx_first};
}

}  // namespace detail

/// True if chords a and b lie in the same face and together cobound a
/// complementary region there (no other chord separates them).
inline bool cobound(const CurveSystem& cs, std::size_t a, std::size_t b) {
  const auto& chords = cs.chords();
  if (a == b || chords[a].face != chords[b].face) return false;
  const auto o = detail::band_order(cs, a, b);
  const auto& A = chords[a].ends;
  const auto& B = chords[b].ends;
  const std::size_t ax = A[o[0]].param, ay = A[o[1]].param, bx = B[o[2]].param, by = B[o[3]].param;
  for (std::size_t c = 0; c < chords.size(); ++c) {
    if (c == a || c == b || chords[c].face != chords[a].face) continue;
    const auto& C = chords[c].ends;
    const bool in1[2] = {detail::cyclic_between(C[0].param, ay, bx), detail::cyclic_between(C[1].param, ay, bx)};
    const bool in2[2] = {detail::cyclic_between(C[0].param, by, ax), detail::cyclic_between(C[1].param, by, ax)};
    if ((in1[0] && in2[1]) || (in1[1] && in2[0])) return false;
  }
  return true;
}

/// Unordered chord pairs that can be joined by a band inside their face.
inline std::vector<std::pair<std::size_t, std::size_t>> band_pairs(const CurveSystem& cs) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < cs.chords().size(); ++a)
    for (std::size_t b = a + 1; b < cs.chords().size(); ++b)
      if (cobound(cs, a, b)) out.emplace_back(a, b);
  return out;
}

/// Band sum of chords a and b across the region between them. The two
/// chords (a_x a_y), (b_x b_y) become (a_y b_x), (b_y a_x), stored in slots
/// a and b. Banding the same slots again restores the original chords, up
/// to which slot holds which.
inline CurveSystem band_sum(const CurveSystem& cs, std::size_t a, std::size_t b) {
  if (!cobound(cs, a, b)) throw SlopeError("invalid_band", "chords do not cobound a region in one face");
  const auto o = detail::band_order(cs, a, b);
  CurveSystem out = cs;
  const auto A = cs.chords()[a].ends;
  const auto B = cs.chords()[b].ends;
  out.chords_[a].ends = {A[o[1]], B[o[2]]};
  out.chords_[b].ends = {B[o[3]], A[o[0]]};
  return out;
}

/// Slopes of the essential parts of every single band sum.
inline std::set<Slope> band_sum_slopes(const BoundaryTorus& torus, const CurveSystem& cs) {
  std::set<Slope> out;
  for (auto [a, b] : band_pairs(cs))
    if (auto s = essential_slope(torus, band_sum(cs, a, b))) out.insert(*s);
  return out;
}

// ---------------------------------------------------------------------------
// Survey

enum class SlopeProvenance { Normal, BandSum };

inline std::string to_string(SlopeProvenance p) { return p == SlopeProvenance::Normal ? "normal" : "band-sum"; }

struct SurveyEntry {
  long p;
  long q;
  SlopeProvenance provenance;
  NormalVector witness;
};

struct SurveyOptions {
  CandidateBounds bounds;
  unsigned threads = 1;
};

/// Slopes of bounded almost-normal candidates and of their single band sums.
/// A slope is tagged normal when some candidate realizes it directly.
inline std::vector<SurveyEntry> slope_survey(const Triangulation& tri, const SurveyOptions& opts) {
  const BoundaryTorus torus = boundary_torus(tri);
  EnumerationOptions eo;
  eo.threads = std::max(1u, opts.threads);
  const auto basis = vertex_solutions(tri, CoordSystem::AlmostNormal, eo);
  const auto candidates = bounded_candidates(tri, basis, opts.bounds);

  struct Found {
    std::optional<Slope> direct;
    std::set<Slope> banded;
  };
  std::vector<Found> found(candidates.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto cs = boundary_curves(tri, candidates[i]);
      found[i].direct = essential_slope(torus, cs);
      found[i].banded = band_sum_slopes(torus, cs);
    }
  };
  const std::size_t n = candidates.size();
  const std::size_t workers = std::min<std::size_t>(eo.threads, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, n * w / workers, n * (w + 1) / workers);
  }

  std::map<std::pair<long, long>, SurveyEntry> normal, banded;
  for (std::size_t i = 0; i < n; ++i) {
    if (const auto& s = found[i].direct)
      normal.try_emplace({s->p, s->q}, SurveyEntry{s->p, s->q, SlopeProvenance::Normal, candidates[i]});
    for (const auto& s : found[i].banded)
      banded.try_emplace({s.p, s.q}, SurveyEntry{s.p, s.q, SlopeProvenance::BandSum, candidates[i]});
  }
  for (auto& [k, e] : banded) normal.try_emplace(k, std::move(e));
  std::vector<SurveyEntry> out;
  for (auto& [k, e] : normal) out.push_back(std::move(e));
  return out;
}

}  // namespace nsurf
