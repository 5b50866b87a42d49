#pragma once

#include <array>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nsurf.hpp"

namespace testing_support {

using namespace nsurf;
using Q = boost::multiprecision::cpp_rational;

inline std::string data_path(const std::string& name) { return std::string(NSURF_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Triangulation load_tri(const std::string& name) { return parse_triangulation(slurp(data_path(name))); }
inline MorseWord load_word(const std::string& name) { return parse_morse(slurp(data_path(name))); }

inline const std::vector<std::string>& bundled_triangulations() {
  static const std::vector<std::string> names = {
      "ball_1tet.tri",     "s3_1tet.tri",        "l41_1tet.tri",         "solid_torus_1tet.tri", "s3_2tet.tri",
      "rp3_2tet.tri",      "solid_torus_2tet.tri", "s3_3tet.tri",        "torus_bounded_3tet.tri"};
  return names;
}

inline const std::vector<std::string>& bundled_closed() {
  static const std::vector<std::string> names = {"s3_1tet.tri", "l41_1tet.tri", "s3_2tet.tri", "rp3_2tet.tri",
                                                 "s3_3tet.tri"};
  return names;
}

inline const std::vector<std::string>& bundled_torus_bounded() {
  static const std::vector<std::string> names = {"solid_torus_1tet.tri", "solid_torus_2tet.tri",
                                                 "torus_bounded_3tet.tri"};
  return names;
}

/// Rank over Q by plain Gaussian elimination.
inline std::size_t rank_q(std::vector<std::vector<Q>> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Q f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

/// Matching rows rebuilt from disk edge incidences: for every interior face
/// and each of its corners, the arc counts cut off at that corner agree on
/// both sides. Written against the raw gluing table.
inline std::vector<std::vector<Q>> oracle_matching(const Triangulation& tri, CoordSystem s) {
  const int per = coords_per_tet(s);
  const std::size_t n = tri.size() * static_cast<std::size_t>(per);
  std::vector<std::vector<Q>> rows;
  for (std::size_t t = 0; t < tri.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (!g) continue;
      const int f2 = g->perm[f];
      if (std::pair{g->tet, f2} < std::pair{t, f}) continue;
      for (int v = 0; v < 4; ++v) {
        if (v == f) continue;
        std::vector<Q> row(n, 0);
        for (int k = 0; k < per; ++k) {
          row[t * static_cast<std::size_t>(per) + static_cast<std::size_t>(k)] += disk::arc_count(k, f, v);
          row[g->tet * static_cast<std::size_t>(per) + static_cast<std::size_t>(k)] -= disk::arc_count(k, f2, g->perm[v]);
        }
        rows.push_back(std::move(row));
      }
    }
  return rows;
}

/// A nonzero admissible solution is an extreme ray iff the matching rows
/// restricted to its support have rank |support| - 1.
inline bool oracle_is_extreme(const Triangulation& tri, const NormalVector& v) {
  const auto rows = oracle_matching(tri, v.system);
  std::vector<std::size_t> supp;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.coords[i] != 0) supp.push_back(i);
  if (supp.empty()) return false;
  std::vector<std::vector<Q>> sub;
  for (const auto& r : rows) {
    std::vector<Q> s;
    for (auto i : supp) s.push_back(r[i]);
    sub.push_back(std::move(s));
  }
  return rank_q(sub) + 1 == supp.size();
}

// ---------------------------------------------------------------------------
// Boundary torus oracles, written from the gluing table and skeleton only.

/// Homology boundary of a face class as a vector over edge classes:
/// d[ijk] = [ij] + [jk] - [ik] with each tet edge mapped to its class.
inline std::vector<Q> face_boundary(const Skeleton& sk, std::size_t tet, int face) {
  std::vector<Q> d(sk.edge_count(), 0);
  const auto v = face_vertices(face);
  auto add = [&](int a, int b, int coef) {
    const int e = edge_index(a, b);
    d[sk.edge_class(tet, e)] += coef * sk.edge_sign(tet, e);
  };
  add(v[0], v[1], 1);
  add(v[1], v[2], 1);
  add(v[0], v[2], -1);
  return d;
}

/// True if the edge-class chain c is a boundary over Q (needs one vertex so
/// every edge is a cycle).
inline bool null_in_h1(const Triangulation& tri, const std::vector<Q>& c) {
  const Skeleton sk(tri);
  std::vector<std::vector<Q>> rows;
  for (const auto& fc : sk.faces()) rows.push_back(face_boundary(sk, fc.front.tet, fc.front.face));
  const std::size_t r = rank_q(rows);
  rows.push_back(c);
  return rank_q(rows) == r;
}

/// Unsigned crossings with the three boundary edge classes, ascending.
inline std::array<long, 3> boundary_edge_weights(const Triangulation& tri, const NormalVector& v) {
  const Skeleton sk(tri);
  const auto w = edge_weights(tri, v);
  const auto& bc = sk.boundary_components().front();
  auto edges = bc.edges;
  std::sort(edges.begin(), edges.end());
  return {static_cast<long>(w[edges[0]]), static_cast<long>(w[edges[1]]), static_cast<long>(w[edges[2]])};
}

/// Writes e3 = a*e1 + b*e2 from the first boundary face's relation.
inline std::pair<long, long> third_edge_relation(const Triangulation& tri) {
  const Skeleton sk(tri);
  const auto& bc = sk.boundary_components().front();
  auto edges = bc.edges;
  std::sort(edges.begin(), edges.end());
  const auto& fc = sk.face(*std::min_element(bc.faces.begin(), bc.faces.end()));
  const auto d = face_boundary(sk, fc.front.tet, fc.front.face);
  const Q c1 = d[edges[0]], c2 = d[edges[1]], c3 = d[edges[2]];
  return {static_cast<long>(-c1 / c3), static_cast<long>(-c2 / c3)};
}

/// Candidate dual slopes of a single essential normal curve with the given
/// edge weights: (p, q) = (+-w1, +-w2) up to sign with |a p + b q| = w3.
inline std::vector<std::pair<long, long>> oracle_slopes(const Triangulation& tri, std::array<long, 3> w) {
  const auto [a, b] = third_edge_relation(tri);
  std::vector<std::pair<long, long>> out;
  for (long sq : {1L, -1L}) {
    long p = w[0], q = sq * w[1];
    if (p == 0 && q < 0) q = -q;
    if (std::abs(a * p + b * q) == w[2] && std::gcd(p, q) == 1 &&
        std::find(out.begin(), out.end(), std::pair{p, q}) == out.end())
      out.emplace_back(p, q);
  }
  return out;
}

/// Arc counts per boundary face and corner realizing boundary edge weights
/// w (indexed by slot), or nullopt if the weights violate a triangle rule.
inline std::optional<std::array<std::array<std::size_t, 3>, 2>> arc_counts_for(const BoundaryTorus& torus,
                                                                                std::array<long, 3> w) {
  std::array<std::array<std::size_t, 3>, 2> counts{};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& f = torus.faces[i];
    for (int c = 0; c < 3; ++c) {
      long sum = 0;
      long opp = 0;
      for (int e = 0; e < 3; ++e) {
        auto [x, y] = BoundaryTorus::kLocalEdge[static_cast<std::size_t>(e)];
        const long we = w[f.edge[static_cast<std::size_t>(e)]];
        if (x == c || y == c)
          sum += we;
        else
          opp = we;
      }
      const long twice = sum - opp;
      if (twice < 0 || twice % 2 != 0) return std::nullopt;
      counts[i][static_cast<std::size_t>(c)] = static_cast<std::size_t>(twice / 2);
    }
  }
  return counts;
}

/// Random admissible vector: a random nonnegative combination of vertex
/// solutions respecting compatibility.
inline NormalVector random_admissible(const Triangulation& tri, const VertexSolutionSet& set, std::mt19937& rng,
                                      int max_terms = 3, int max_mult = 3) {
  auto v = NormalVector::zero(set.system, tri.size());
  if (set.solutions.empty()) return v;
  std::uniform_int_distribution<std::size_t> pick(0, set.solutions.size() - 1);
  std::uniform_int_distribution<int> mult(1, max_mult);
  std::uniform_int_distribution<int> terms(1, max_terms);
  const int k = terms(rng);
  for (int i = 0; i < k; ++i) {
    const auto& s = set.solutions[pick(rng)];
    if (incompatible_tet(v, s) || octagon_total(v) + octagon_total(s) > 1) continue;
    const int m = octagon_total(s) > 0 ? 1 : mult(rng);
    for (std::size_t c = 0; c < v.size(); ++c) v.coords[c] += m * s.coords[c];
  }
  return v;
}

}  // namespace testing_support
