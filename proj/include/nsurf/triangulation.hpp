#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nsurf/error.hpp"
#include "nsurf/perm.hpp"

namespace nsurf {

struct Gluing {
  std::size_t tet;
  Perm4 perm;  // vertex k of the source tet maps to vertex perm[k] of `tet`
  friend bool operator==(const Gluing&, const Gluing&) = default;
};

struct FaceRef {
  std::size_t tet;
  int face;
  friend bool operator==(const FaceRef&, const FaceRef&) = default;
  friend auto operator<=>(const FaceRef&, const FaceRef&) = default;
};

/// Tetrahedra with face gluings. Face f of a tetrahedron is the face opposite
/// vertex f. Immutable once constructed; construction checks involutivity.
class Triangulation {
 public:
  using Row = std::array<std::optional<Gluing>, 4>;

  Triangulation() = default;

  explicit Triangulation(std::vector<Row> table) : table_(std::move(table)) { check(); }

  /// `count` tetrahedra with every face on the boundary.
  static Triangulation unglued(std::size_t count) { return Triangulation(std::vector<Row>(count)); }

  std::size_t size() const noexcept { return table_.size(); }
  const std::optional<Gluing>& gluing(std::size_t tet, int face) const {
    return table_[tet][static_cast<std::size_t>(face)];
  }
  bool is_boundary(std::size_t tet, int face) const { return !gluing(tet, face).has_value(); }
  const std::vector<Row>& table() const noexcept { return table_; }

  std::size_t boundary_face_count() const {
    std::size_t n = 0;
    for (const auto& row : table_)
      for (const auto& g : row) n += g ? 0 : 1;
    return n;
  }

  /// Returns a copy with the given pair of faces glued (both directions).
  Triangulation with_gluing(std::size_t tet, int face, std::size_t target, Perm4 perm) const {
    auto table = table_;
    table.at(tet)[static_cast<std::size_t>(face)] = Gluing{target, perm};
    table.at(target)[static_cast<std::size_t>(perm[face])] = Gluing{tet, perm.inverse()};
    return Triangulation(std::move(table));
  }

  friend bool operator==(const Triangulation&, const Triangulation&) = default;

 private:
  void check() const {
    const std::size_t n = table_.size();
    for (std::size_t t = 0; t < n; ++t) {
      for (int f = 0; f < 4; ++f) {
        const auto& g = gluing(t, f);
        if (!g) continue;
        const std::string here = "tet " + std::to_string(t) + " face " + std::to_string(f);
        if (g->tet >= n) throw GluingError(here + ": target tetrahedron out of range");
        if (!g->perm.is_bijection()) throw GluingError(here + ": permutation is not a bijection");
        const int back_face = g->perm[f];
        if (g->tet == t && back_face == f)
          throw GluingError(here + ": face glued to itself");
        const auto& back = gluing(g->tet, back_face);
        if (!back || back->tet != t || back->perm != g->perm.inverse())
          throw GluingError(here + ": gluing is not involutive (partner tet " +
                            std::to_string(g->tet) + " face " + std::to_string(back_face) + ")");
      }
    }
  }

  std::vector<Row> table_;
};

// ---------------------------------------------------------------------------
// Text format

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

inline std::optional<std::size_t> parse_index(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Splits text into lines with comments stripped; keeps 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string_view>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) out.emplace_back(lineno, line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

}  // namespace detail

/// Parses the `tets <n>` / `tet <i>: g0 g1 g2 g3` format.
inline Triangulation parse_triangulation(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty input, expected 'tets <n>'");

  auto [hline, header] = lines.front();
  auto htok = detail::tokenize(header);
  if (htok.size() != 2 || htok[0].text != "tets")
    throw ParseError(hline, htok.empty() ? 1 : htok[0].column, "expected 'tets <n>'");
  auto count = detail::parse_index(htok[1].text);
  if (!count) throw ParseError(hline, htok[1].column, "invalid tetrahedron count");

  std::vector<Triangulation::Row> table(*count);
  std::vector<bool> seen(*count, false);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto [lineno, line] = lines[li];
    auto tok = detail::tokenize(line);
    if (tok.size() != 6 || tok[0].text != "tet")
      throw ParseError(lineno, tok[0].column, "expected 'tet <i>: g0 g1 g2 g3'");
    std::string_view idx = tok[1].text;
    if (idx.empty() || idx.back() != ':')
      throw ParseError(lineno, tok[1].column, "expected '<i>:'");
    auto t = detail::parse_index(idx.substr(0, idx.size() - 1));
    if (!t) throw ParseError(lineno, tok[1].column, "invalid tetrahedron index");
    if (*t >= *count) throw ParseError(lineno, tok[1].column, "tetrahedron index out of range");
    if (seen[*t]) throw ParseError(lineno, tok[1].column, "duplicate tetrahedron line");
    seen[*t] = true;
    for (int f = 0; f < 4; ++f) {
      const auto& g = tok[static_cast<std::size_t>(2 + f)];
      if (g.text == "bdry") continue;
      auto open = g.text.find('(');
      if (open == std::string_view::npos || g.text.back() != ')' || g.text.size() != open + 6)
        throw ParseError(lineno, g.column, "expected 'bdry' or '<t>(<p0p1p2p3>)'");
      auto target = detail::parse_index(g.text.substr(0, open));
      if (!target) throw ParseError(lineno, g.column, "invalid target tetrahedron");
      if (*target >= *count)
        throw ParseError(lineno, g.column, "target tetrahedron out of range");
      auto perm = Perm4::parse(g.text.substr(open + 1, 4));
      if (!perm) throw ParseError(lineno, g.column + open + 1, "invalid permutation");
      table[*t][static_cast<std::size_t>(f)] = Gluing{*target, *perm};
    }
  }
  for (std::size_t t = 0; t < *count; ++t)
    if (!seen[t])
      throw ParseError(lines.back().first, 1, "missing line for tetrahedron " + std::to_string(t));
  return Triangulation(std::move(table));
}

inline std::string serialize(const Triangulation& tri) {
  std::ostringstream out;
  out << "tets " << tri.size() << '\n';
  for (std::size_t t = 0; t < tri.size(); ++t) {
    out << "tet " << t << ':';
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (g)
        out << ' ' << g->tet << '(' << g->perm.str() << ')';
      else
        out << " bdry";
    }
    out << '\n';
  }
  return out.str();
}

/// FNV-1a over the canonical serialization; identifies a triangulation in
/// enumeration output.
inline std::string digest(const Triangulation& tri) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : serialize(tri)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xF];
    h >>= 4;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Skeleton

/// A face class: either an interior pair (front glued to back via `perm`) or
/// a single boundary face. `front` is the lexicographically smaller side.
struct FaceClass {
  FaceRef front;
  std::optional<FaceRef> back;
  Perm4 perm;  // front tet vertices -> back tet vertices
  bool boundary() const { return !back.has_value(); }
};

struct BoundaryComponent {
  std::vector<std::size_t> faces;  // face class ids
  std::vector<std::size_t> edges;  // edge class ids
  std::vector<std::size_t> vertices;
  long euler() const {
    return static_cast<long>(vertices.size()) - static_cast<long>(edges.size()) +
           static_cast<long>(faces.size());
  }
  bool one_vertex_torus() const {
    return vertices.size() == 1 && edges.size() == 3 && faces.size() == 2;
  }
};

/// Vertex, edge and face classes of a triangulation. Class ids are assigned
/// in order of their lowest (tet, local index) representative; that
/// representative's low-to-high direction is the positive edge direction.
class Skeleton {
 public:
  explicit Skeleton(const Triangulation& tri) : tets_(tri.size()) { build(tri); }

  std::size_t tet_count() const { return tets_; }
  std::size_t vertex_count() const { return vertex_reps_.size(); }
  std::size_t edge_count() const { return edge_reps_.size(); }
  std::size_t face_count() const { return faces_.size(); }

  std::size_t vertex_class(std::size_t tet, int v) const { return vertex_of_[tet * 4 + v]; }
  std::size_t edge_class(std::size_t tet, int e) const { return edge_of_[tet * 6 + e]; }
  /// +1 if the local low->high direction of tet-edge e agrees with its class.
  int edge_sign(std::size_t tet, int e) const { return edge_sign_[tet * 6 + e]; }
  std::size_t face_class(std::size_t tet, int f) const { return face_of_[tet * 4 + f]; }
  const FaceClass& face(std::size_t cls) const { return faces_[cls]; }
  const std::vector<FaceClass>& faces() const { return faces_; }

  /// Tet-edge representatives (tet, edge index) of an edge class, ascending.
  const std::vector<std::pair<std::size_t, int>>& edge_reps(std::size_t cls) const {
    return edge_reps_[cls];
  }
  const std::vector<std::pair<std::size_t, int>>& vertex_reps(std::size_t cls) const {
    return vertex_reps_[cls];
  }

  bool edge_on_boundary(std::size_t cls) const { return edge_boundary_[cls]; }
  bool vertex_on_boundary(std::size_t cls) const { return vertex_boundary_[cls]; }
  /// False if some edge is identified with itself in reverse.
  bool edges_valid() const { return edges_valid_; }

  std::vector<std::size_t> boundary_faces() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < faces_.size(); ++i)
      if (faces_[i].boundary()) out.push_back(i);
    return out;
  }
  const std::vector<BoundaryComponent>& boundary_components() const { return components_; }

  long euler() const {
    return static_cast<long>(vertex_count()) - static_cast<long>(edge_count()) +
           static_cast<long>(face_count()) - static_cast<long>(tets_);
  }

 private:
  struct UnionFind {
    std::vector<std::size_t> parent;
    std::vector<int> parity;  // relative orientation to parent
    explicit UnionFind(std::size_t n) : parent(n), parity(n, 0) {
      std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::pair<std::size_t, int> find(std::size_t x) {
      int p = 0;
      std::size_t r = x;
      while (parent[r] != r) {
        p ^= parity[r];
        r = parent[r];
      }
      // path compression, keeping parities relative to the root
      int acc = p;
      while (parent[x] != x) {
        std::size_t next = parent[x];
        int px = parity[x];
        parent[x] = r;
        parity[x] = acc;
        acc ^= px;
        x = next;
      }
      return {r, p};
    }
    /// Returns false if the union contradicts an existing parity.
    bool unite(std::size_t a, std::size_t b, int rel) {
      auto [ra, pa] = find(a);
      auto [rb, pb] = find(b);
      if (ra == rb) return (pa ^ pb) == rel;
      if (rb < ra) {
        std::swap(ra, rb);
      }
      parent[rb] = ra;
      parity[rb] = pa ^ pb ^ rel;
      return true;
    }
  };

  void build(const Triangulation& tri) {
    const std::size_t n = tri.size();
    UnionFind vuf(4 * n), euf(6 * n);
    for (std::size_t t = 0; t < n; ++t) {
      for (int f = 0; f < 4; ++f) {
        const auto& g = tri.gluing(t, f);
        if (!g) continue;
        for (int v = 0; v < 4; ++v)
          if (v != f) vuf.unite(t * 4 + v, g->tet * 4 + g->perm[v], 0);
        for (int e = 0; e < 6; ++e) {
          auto [a, b] = kEdgeVertices[e];
          if (a == f || b == f) continue;
          int pa = g->perm[a], pb = g->perm[b];
          int rel = pa < pb ? 0 : 1;
          if (!euf.unite(t * 6 + e, g->tet * 6 + edge_index(pa, pb), rel)) edges_valid_ = false;
        }
      }
    }

    vertex_of_.assign(4 * n, 0);
    std::vector<std::size_t> root_id(4 * n, SIZE_MAX);
    for (std::size_t i = 0; i < 4 * n; ++i) {
      auto r = vuf.find(i).first;
      if (root_id[r] == SIZE_MAX) {
        root_id[r] = vertex_reps_.size();
        vertex_reps_.emplace_back();
      }
      vertex_of_[i] = root_id[r];
      vertex_reps_[root_id[r]].emplace_back(i / 4, static_cast<int>(i % 4));
    }

    edge_of_.assign(6 * n, 0);
    edge_sign_.assign(6 * n, 1);
    std::vector<std::size_t> eroot(6 * n, SIZE_MAX);
    std::vector<int> root_parity_of_first(6 * n, 0);
    for (std::size_t i = 0; i < 6 * n; ++i) {
      auto [r, p] = euf.find(i);
      if (eroot[r] == SIZE_MAX) {
        eroot[r] = edge_reps_.size();
        root_parity_of_first[r] = p;
        edge_reps_.emplace_back();
      }
      edge_of_[i] = eroot[r];
      edge_sign_[i] = (p ^ root_parity_of_first[r]) == 0 ? 1 : -1;
      edge_reps_[eroot[r]].emplace_back(i / 6, static_cast<int>(i % 6));
    }

    face_of_.assign(4 * n, SIZE_MAX);
    for (std::size_t t = 0; t < n; ++t) {
      for (int f = 0; f < 4; ++f) {
        if (face_of_[t * 4 + f] != SIZE_MAX) continue;
        FaceClass fc{{t, f}, std::nullopt, Perm4::identity()};
        face_of_[t * 4 + f] = faces_.size();
        if (const auto& g = tri.gluing(t, f)) {
          fc.back = FaceRef{g->tet, g->perm[f]};
          fc.perm = g->perm;
          face_of_[g->tet * 4 + g->perm[f]] = faces_.size();
        }
        faces_.push_back(fc);
      }
    }

    edge_boundary_.assign(edge_count(), false);
    vertex_boundary_.assign(vertex_count(), false);
    for (const auto& fc : faces_) {
      if (!fc.boundary()) continue;
      auto [t, f] = fc.front;
      for (int v : face_vertices(f)) vertex_boundary_[vertex_class(t, v)] = true;
      for (int e = 0; e < 6; ++e) {
        auto [a, b] = kEdgeVertices[e];
        if (a != f && b != f) edge_boundary_[edge_class(t, e)] = true;
      }
    }
    build_boundary_components();
  }

  void build_boundary_components() {
    // Boundary faces sharing an edge class lie in the same component.
    auto bfaces = boundary_faces();
    UnionFind uf(bfaces.size());
    std::vector<std::size_t> first_face_of_edge(edge_count(), SIZE_MAX);
    for (std::size_t i = 0; i < bfaces.size(); ++i) {
      auto [t, f] = faces_[bfaces[i]].front;
      for (int e = 0; e < 6; ++e) {
        auto [a, b] = kEdgeVertices[e];
        if (a == f || b == f) continue;
        auto ec = edge_class(t, e);
        if (first_face_of_edge[ec] == SIZE_MAX)
          first_face_of_edge[ec] = i;
        else
          uf.unite(first_face_of_edge[ec], i, 0);
      }
    }
    std::vector<std::size_t> comp_of_root(bfaces.size(), SIZE_MAX);
    for (std::size_t i = 0; i < bfaces.size(); ++i) {
      auto r = uf.find(i).first;
      if (comp_of_root[r] == SIZE_MAX) {
        comp_of_root[r] = components_.size();
        components_.emplace_back();
      }
      auto& comp = components_[comp_of_root[r]];
      comp.faces.push_back(bfaces[i]);
      auto [t, f] = faces_[bfaces[i]].front;
      for (int v : face_vertices(f)) comp.vertices.push_back(vertex_class(t, v));
      for (int e = 0; e < 6; ++e) {
        auto [a, b] = kEdgeVertices[e];
        if (a != f && b != f) comp.edges.push_back(edge_class(t, e));
      }
    }
    for (auto& c : components_) {
      for (auto* v : {&c.vertices, &c.edges}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
      }
    }
  }

  std::size_t tets_;
  std::vector<std::size_t> vertex_of_, edge_of_, face_of_;
  std::vector<int> edge_sign_;
  std::vector<std::vector<std::pair<std::size_t, int>>> vertex_reps_, edge_reps_;
  std::vector<FaceClass> faces_;
  std::vector<bool> edge_boundary_, vertex_boundary_;
  std::vector<BoundaryComponent> components_;
  bool edges_valid_ = true;
};

inline Skeleton skeleton(const Triangulation& tri) { return Skeleton(tri); }

// ---------------------------------------------------------------------------
// Diagnostics

/// Tetrahedron orientations (+1/-1) making every gluing orientation-reversing,
/// or nullopt if none exist. Each connected component starts at +1 on its
/// lowest tetrahedron.
inline std::optional<std::vector<int>> tet_orientation(const Triangulation& tri) {
  std::vector<int> sign(tri.size(), 0);
  for (std::size_t start = 0; start < tri.size(); ++start) {
    if (sign[start] != 0) continue;
    sign[start] = 1;
    std::vector<std::size_t> stack{start};
    while (!stack.empty()) {
      auto t = stack.back();
      stack.pop_back();
      for (int f = 0; f < 4; ++f) {
        const auto& g = tri.gluing(t, f);
        if (!g) continue;
        int want = -sign[t] * g->perm.sign();
        if (sign[g->tet] == 0) {
          sign[g->tet] = want;
          stack.push_back(g->tet);
        } else if (sign[g->tet] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return sign;
}

inline std::size_t connected_components(const Triangulation& tri) {
  std::vector<bool> seen(tri.size(), false);
  std::size_t comps = 0;
  for (std::size_t s = 0; s < tri.size(); ++s) {
    if (seen[s]) continue;
    ++comps;
    seen[s] = true;
    std::vector<std::size_t> stack{s};
    while (!stack.empty()) {
      auto t = stack.back();
      stack.pop_back();
      for (int f = 0; f < 4; ++f)
        if (const auto& g = tri.gluing(t, f); g && !seen[g->tet]) {
          seen[g->tet] = true;
          stack.push_back(g->tet);
        }
    }
  }
  return comps;
}

struct ValidationReport {
  std::size_t tetrahedra = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t faces = 0;
  std::size_t boundary_faces = 0;
  bool connected = false;
  bool orientable = false;
  bool closed = false;
  bool valid_edges = true;
  long euler = 0;  // V - E + F - T
  std::vector<BoundaryComponent> boundary;
};

inline ValidationReport validate(const Triangulation& tri) {
  Skeleton sk(tri);
  ValidationReport r;
  r.tetrahedra = tri.size();
  r.vertices = sk.vertex_count();
  r.edges = sk.edge_count();
  r.faces = sk.face_count();
  r.boundary_faces = tri.boundary_face_count();
  r.connected = connected_components(tri) == 1;
  r.orientable = tet_orientation(tri).has_value();
  r.closed = r.boundary_faces == 0;
  r.valid_edges = sk.edges_valid();
  r.euler = sk.euler();
  r.boundary = sk.boundary_components();
  return r;
}

/// Throws unless the triangulation is orientable with valid edges; used by
/// modules that rely on a global orientation.
inline void require_orientable(const Triangulation& tri) {
  if (!tet_orientation(tri))
    throw PreconditionError("non_orientable", "triangulation is not orientable");
  if (!Skeleton(tri).edges_valid())
    throw PreconditionError("invalid_edge", "an edge is identified with itself in reverse");
}

}  // namespace nsurf
