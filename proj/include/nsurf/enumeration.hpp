#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <boost/integer/common_factor.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "nsurf/normal_coords.hpp"

namespace nsurf {

// ---------------------------------------------------------------------------
// Support sets

/// Fixed-width bitset over coordinate indices.
class Support {
 public:
  Support() = default;
  explicit Support(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool subset_of(const Support& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  Support operator|(const Support& o) const {
    Support out = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] |= o.words_[i];
    return out;
  }
  Support operator&(const Support& o) const {
    Support out = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= o.words_[i];
    return out;
  }
  friend bool operator==(const Support&, const Support&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

/// Support-level admissibility: at most one quad/octagon kind per tet and at
/// most one octagon coordinate overall. Closed under taking subsets.
class SupportFilter {
 public:
  SupportFilter(std::size_t tets, CoordSystem s) {
    const int per = coords_per_tet(s);
    const std::size_t dim = tets * static_cast<std::size_t>(per);
    octagons_ = Support(dim);
    for (std::size_t t = 0; t < tets; ++t) {
      Support m(dim);
      for (int k = 4; k < per; ++k) {
        m.set(t * per + k);
        if (k >= 7) octagons_.set(t * per + k);
      }
      per_tet_.push_back(m);
    }
  }

  bool admissible(const Support& s) const {
    for (const auto& m : per_tet_)
      if ((s & m).count() > 1) return false;
    return (s & octagons_).count() <= 1;
  }

 private:
  std::vector<Support> per_tet_;
  Support octagons_;
};

namespace detail {

inline Support support_of(const std::vector<Integer>& v) {
  Support s(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.set(i);
  return s;
}

inline void make_primitive(std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& x : v)
    if (x != 0) g = boost::multiprecision::gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
}

/// Rank of the given rows restricted to the columns in `cols` (all columns
/// when `cols` is empty), by fraction-free elimination.
inline std::size_t rank(const IntMatrix& rows, std::size_t row_count, const std::vector<std::size_t>& cols) {
  std::vector<std::vector<Integer>> m;
  m.reserve(row_count);
  for (std::size_t r = 0; r < row_count; ++r) {
    std::vector<Integer> row;
    row.reserve(cols.size());
    for (auto c : cols) row.emplace_back(rows[r][c]);
    m.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols.size() && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      Integer a = m[rank][c], b = m[r][c];
      for (std::size_t k = c; k < cols.size(); ++k) m[r][k] = m[r][k] * a - m[rank][k] * b;
      make_primitive(m[r]);
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Vertex enumeration

enum class AdjacencyTest { Combinatorial, Algebraic };

struct EnumerationOptions {
  unsigned threads = 1;
  AdjacencyTest adjacency = AdjacencyTest::Combinatorial;
};

struct VertexSolutionSet {
  std::string triangulation_digest;
  CoordSystem system = CoordSystem::Normal;
  std::vector<NormalVector> solutions;  // primitive, admissible, ascending
};

namespace detail {

struct Ray {
  std::vector<Integer> coords;
  Support support;
};

class DoubleDescription {
 public:
  DoubleDescription(const IntMatrix& rows, std::size_t dim, const SupportFilter& filter,
                    EnumerationOptions opts)
      : rows_(rows), dim_(dim), filter_(filter), opts_(opts) {}

  std::vector<Ray> run() {
    std::vector<Ray> rays;
    for (std::size_t i = 0; i < dim_; ++i) {
      std::vector<Integer> c(dim_);
      c[i] = 1;
      Support s(dim_);
      s.set(i);
      rays.push_back({std::move(c), s});
    }
    std::vector<std::size_t> all_cols(dim_);
    std::iota(all_cols.begin(), all_cols.end(), std::size_t{0});
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t processed_rank = rank(rows_, k, all_cols);
      rays = intersect(rays, k, processed_rank);
    }
    return rays;
  }

 private:
  Integer dot(std::size_t row, const Ray& r) const {
    Integer acc = 0;
    for (std::size_t i = 0; i < dim_; ++i)
      if (rows_[row][i] != 0 && r.coords[i] != 0) acc += rows_[row][i] * r.coords[i];
    return acc;
  }

  bool adjacent(const std::vector<Ray>& rays, std::size_t p, std::size_t n, const Support& u,
                std::size_t k) const {
    if (opts_.adjacency == AdjacencyTest::Algebraic) {
      std::vector<std::size_t> cols;
      for (std::size_t i = 0; i < dim_; ++i)
        if (u.test(i)) cols.push_back(i);
      return rank(rows_, k, cols) + 2 == cols.size();
    }
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (r == p || r == n) continue;
      if (rays[r].support.subset_of(u)) return false;
    }
    return true;
  }

  std::vector<Ray> intersect(const std::vector<Ray>& rays, std::size_t k, std::size_t processed_rank) {
    std::vector<Integer> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(k, rays[i]);
      if (val[i] > 0)
        pos.push_back(i);
      else if (val[i] < 0)
        neg.push_back(i);
      else
        next.push_back(rays[i]);
    }
    if (pos.empty() && neg.empty()) return next;

    auto combine_range = [&](std::size_t lo, std::size_t hi, std::vector<Ray>& out) {
      for (std::size_t pi = lo; pi < hi; ++pi) {
        const std::size_t p = pos[pi];
        for (std::size_t n : neg) {
          Support u = rays[p].support | rays[n].support;
          // A 2-face of the current cone has |support| <= rank + 2.
          if (u.count() > processed_rank + 2) continue;
          if (!filter_.admissible(u)) continue;
          if (!adjacent(rays, p, n, u, k)) continue;
          std::vector<Integer> c(dim_);
          const Integer a = val[p], b = -val[n];
          for (std::size_t i = 0; i < dim_; ++i) c[i] = a * rays[n].coords[i] + b * rays[p].coords[i];
          make_primitive(c);
          Support s = support_of(c);
          out.push_back({std::move(c), std::move(s)});
        }
      }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(opts_.threads, static_cast<unsigned>(pos.size())));
    if (threads == 1) {
      combine_range(0, pos.size(), next);
    } else {
      std::vector<std::vector<Ray>> parts(threads);
      {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (pos.size() + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
          const std::size_t lo = std::min(pos.size(), w * chunk);
          const std::size_t hi = std::min(pos.size(), lo + chunk);
          workers.emplace_back([&, lo, hi, w] { combine_range(lo, hi, parts[w]); });
        }
      }
      for (auto& part : parts)
        for (auto& r : part) next.push_back(std::move(r));
    }
    return next;
  }

  const IntMatrix& rows_;
  std::size_t dim_;
  const SupportFilter& filter_;
  EnumerationOptions opts_;
};

}  // namespace detail

/// Primitive admissible extreme rays of the matching-equation cone, by the
/// double-description method with support-level admissibility pruning.
inline VertexSolutionSet vertex_solutions(const Triangulation& tri, CoordSystem system,
                                          EnumerationOptions opts = {}) {
  const auto rows = matching_matrix(tri, system);
  const std::size_t dim = coord_count(tri, system);
  SupportFilter filter(tri.size(), system);
  auto rays = detail::DoubleDescription(rows, dim, filter, opts).run();

  VertexSolutionSet out{digest(tri), system, {}};
  for (auto& r : rays) {
    NormalVector v(system, std::move(r.coords));
    if (octagon_total(v) > 1) continue;
    out.solutions.push_back(std::move(v));
  }
  std::sort(out.solutions.begin(), out.solutions.end());
  out.solutions.erase(std::unique(out.solutions.begin(), out.solutions.end()), out.solutions.end());
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

/// Every solution of the matching equations with coordinates in [0, bound]
/// that satisfies the per-tet and global support constraints. Octagon
/// coordinates are allowed up to `bound`; callers filter for admissibility.
/// Enumerates one sub-system per choice of quad/octagon kind per tet, solving
/// for pivot variables over a box of free variables.
class BruteForce {
 public:
  static constexpr std::size_t kMaxCoords = 30;
  static constexpr int kMaxBound = 10;

  BruteForce(const Triangulation& tri, CoordSystem system, int bound)
      : tri_(tri), system_(system), bound_(bound) {
    const std::size_t dim = coord_count(tri, system);
    if (dim > kMaxCoords)
      throw GuardError("brute force limited to " + std::to_string(kMaxCoords) + " coordinates, got " +
                       std::to_string(dim));
    if (bound < 1 || bound > kMaxBound)
      throw GuardError("brute force bound must lie in [1, " + std::to_string(kMaxBound) + "]");
    rows_ = matching_matrix(tri, system);
    std::vector<int> choice(tri.size(), -1);
    recurse_choice(choice, 0, false);
    std::sort(solutions_.begin(), solutions_.end());
  }

  /// Support-admissible solutions, including zero.
  const std::vector<std::vector<int>>& raw() const { return solutions_; }

  std::vector<NormalVector> admissible() const {
    std::vector<NormalVector> out;
    for (const auto& s : solutions_) {
      auto v = to_vector(s);
      if (octagon_total(v) <= 1) out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Primitive solutions v such that no other enumerated nonzero solution
  /// has support contained in supp(v) without being parallel to v.
  std::vector<NormalVector> extreme_primitives() const {
    std::map<std::uint32_t, std::set<std::vector<int>>> by_support;
    for (const auto& s : solutions_) {
      std::uint32_t mask = 0;
      int g = 0;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] != 0) {
          mask |= std::uint32_t{1} << i;
          g = std::gcd(g, s[i]);
        }
      if (mask == 0) continue;
      std::vector<int> prim = s;
      for (auto& x : prim) x /= g;
      by_support[mask].insert(prim);
    }
    std::vector<NormalVector> out;
    for (const auto& [mask, prims] : by_support) {
      if (prims.size() != 1) continue;
      bool minimal = true;
      for (const auto& [other, unused] : by_support) {
        (void)unused;
        if (other != mask && (other & ~mask) == 0) {
          minimal = false;
          break;
        }
      }
      if (!minimal) continue;
      auto v = to_vector(*prims.begin());
      if (octagon_total(v) <= 1) out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  NormalVector to_vector(const std::vector<int>& s) const {
    std::vector<Integer> c(s.begin(), s.end());
    return {system_, std::move(c)};
  }

  void recurse_choice(std::vector<int>& choice, std::size_t t, bool octagon_used) {
    if (t == tri_.size()) {
      solve(choice);
      return;
    }
    const int per = coords_per_tet(system_);
    for (int k = -1; k < per; ++k) {
      if (k >= 0 && k < 4) continue;
      const bool oct = k >= 7;
      if (oct && octagon_used) continue;
      choice[t] = k;
      recurse_choice(choice, t + 1, octagon_used || oct);
    }
    choice[t] = -1;
  }

  void solve(const std::vector<int>& choice) {
    using Rational = boost::multiprecision::cpp_rational;
    const int per = coords_per_tet(system_);
    std::vector<std::size_t> vars;
    std::vector<bool> forced_positive;
    for (std::size_t t = 0; t < tri_.size(); ++t) {
      for (int k = 0; k < 4; ++k) {
        vars.push_back(t * per + k);
        forced_positive.push_back(false);
      }
      if (choice[t] >= 0) {
        vars.push_back(t * per + choice[t]);
        forced_positive.push_back(true);
      }
    }
    const std::size_t m = vars.size();

    // Reduced row echelon form of the restricted system.
    std::vector<std::vector<Rational>> a;
    for (const auto& row : rows_) {
      std::vector<Rational> r(m);
      bool any = false;
      for (std::size_t j = 0; j < m; ++j) {
        r[j] = row[vars[j]];
        any = any || row[vars[j]] != 0;
      }
      if (any) a.push_back(std::move(r));
    }
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m && rank < a.size(); ++c) {
      std::size_t piv = rank;
      while (piv < a.size() && a[piv][c] == 0) ++piv;
      if (piv == a.size()) continue;
      std::swap(a[piv], a[rank]);
      const Rational lead = a[rank][c];
      for (auto& x : a[rank]) x /= lead;
      for (std::size_t r = 0; r < a.size(); ++r) {
        if (r == rank || a[r][c] == 0) continue;
        const Rational f = a[r][c];
        for (std::size_t j = 0; j < m; ++j) a[r][j] -= f * a[rank][j];
      }
      pivots.push_back(c);
      ++rank;
    }
    std::vector<bool> is_pivot(m, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < m; ++j)
      if (!is_pivot[j]) free.push_back(j);

    // Integer form: den[r] * x_pivot = -sum coef[r][f] * x_free
    std::vector<long long> den(rank);
    std::vector<std::vector<long long>> coef(rank, std::vector<long long>(free.size()));
    for (std::size_t r = 0; r < rank; ++r) {
      Integer l = 1;
      for (auto f : free) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(a[r][f]));
      den[r] = static_cast<long long>(l);
      for (std::size_t i = 0; i < free.size(); ++i) {
        Rational scaled = a[r][free[i]] * Rational(l);
        coef[r][i] = static_cast<long long>(boost::multiprecision::numerator(scaled));
      }
    }

    std::vector<int> x(m, 0);
    std::vector<int> lo(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) {
      lo[i] = forced_positive[free[i]] ? 1 : 0;
      x[free[i]] = lo[i];
    }
    const std::size_t dim = coord_count(tri_, system_);
    while (true) {
      bool ok = true;
      for (std::size_t r = 0; r < rank && ok; ++r) {
        long long s = 0;
        for (std::size_t i = 0; i < free.size(); ++i) s += coef[r][i] * x[free[i]];
        s = -s;
        if (s % den[r] != 0) {
          ok = false;
          break;
        }
        long long val = s / den[r];
        const int minimum = forced_positive[pivots[r]] ? 1 : 0;
        if (val < minimum || val > bound_) ok = false;
        else x[pivots[r]] = static_cast<int>(val);
      }
      if (ok) {
        std::vector<int> sol(dim, 0);
        for (std::size_t j = 0; j < m; ++j) sol[vars[j]] = x[j];
        solutions_.push_back(std::move(sol));
      }
      // odometer over free variables
      std::size_t i = 0;
      for (; i < free.size(); ++i) {
        if (x[free[i]] < bound_) {
          ++x[free[i]];
          break;
        }
        x[free[i]] = lo[i];
      }
      if (i == free.size()) break;
    }
  }

  const Triangulation& tri_;
  CoordSystem system_;
  int bound_;
  IntMatrix rows_;
  std::vector<std::vector<int>> solutions_;
};

/// All admissible solutions with every coordinate at most `bound`.
inline std::vector<NormalVector> brute_force_solutions(const Triangulation& tri, CoordSystem system, int bound) {
  return BruteForce(tri, system, bound).admissible();
}

/// Extreme primitive admissible solutions found by exhaustive enumeration.
inline std::vector<NormalVector> brute_force_vertex_solutions(const Triangulation& tri, CoordSystem system,
                                                              int bound) {
  return BruteForce(tri, system, bound).extreme_primitives();
}

// ---------------------------------------------------------------------------
// Bounded candidates

struct CandidateBounds {
  long chi_min = 0;
  long max_boundary_points = 0;
  long zero_chi_cap = 2;
};

/// Compatible nonnegative combinations of vertex solutions with chi >= chi_min
/// and boundary weight <= max_boundary_points. Vertex-linking summands are
/// excluded. Summands with chi >= 0 and no boundary weight, and every summand
/// with chi == 0, have multiplicity at most zero_chi_cap.
inline std::vector<NormalVector> bounded_candidates(const Triangulation& tri, const VertexSolutionSet& basis,
                                                    CandidateBounds bounds) {
  struct Summand {
    NormalVector v;
    Integer chi;
    Integer bdry;
    Integer max_mult;
  };
  const Skeleton sk(tri);
  std::set<NormalVector> links;
  for (std::size_t c = 0; c < sk.vertex_count(); ++c) links.insert(vertex_link(tri, basis.system, c));

  std::vector<Summand> summands;
  for (const auto& v : basis.solutions) {
    if (links.contains(v)) continue;
    Summand s{v, euler_characteristic(tri, v), boundary_weight(tri, v), 0};
    if (s.bdry > bounds.max_boundary_points) continue;
    Integer m = -1;  // -1: unbounded so far
    if (s.bdry > 0) m = Integer(bounds.max_boundary_points) / s.bdry;
    if (s.chi == 0 || (s.chi > 0 && s.bdry == 0)) m = m < 0 ? Integer(bounds.zero_chi_cap) : std::min(m, Integer(bounds.zero_chi_cap));
    if (octagon_total(v) > 0) m = m < 0 ? Integer(1) : std::min(m, Integer(1));
    s.max_mult = m;
    summands.push_back(std::move(s));
  }
  // Positive chi first, then zero, then negative, so negative summands are
  // bounded by the chi budget accumulated so far.
  std::stable_sort(summands.begin(), summands.end(),
                   [](const Summand& a, const Summand& b) { return a.chi > b.chi; });

  std::set<NormalVector> found;
  auto current = NormalVector::zero(basis.system, tri.size());
  Integer chi = 0, bdry = 0;
  bool nonempty = false;

  auto fits = [&](const NormalVector& add) {
    return !incompatible_tet(current, add) && octagon_total(current) + octagon_total(add) <= 1;
  };

  auto dfs = [&](auto&& self, std::size_t i) -> void {
    if (i == summands.size()) {
      if (nonempty && chi >= bounds.chi_min && bdry <= bounds.max_boundary_points) found.insert(current);
      return;
    }
    const auto& s = summands[i];
    Integer limit = s.max_mult;
    if (s.chi < 0) {
      // Remaining summands all have chi < 0.
      if (chi < bounds.chi_min) return;
      Integer slack = (chi - bounds.chi_min) / (-s.chi);
      limit = limit < 0 ? slack : std::min(limit, slack);
    }
    if (s.bdry > 0) {
      Integer room = (bounds.max_boundary_points - bdry) / s.bdry;
      limit = limit < 0 ? room : std::min(limit, room);
    }
    if (limit < 0) limit = 0;

    self(self, i + 1);
    if (limit == 0 || !fits(s.v)) return;
    const bool was_nonempty = nonempty;
    Integer used = 0;
    for (Integer m = 1; m <= limit; ++m) {
      for (std::size_t c = 0; c < current.coords.size(); ++c) current.coords[c] += s.v.coords[c];
      chi += s.chi;
      bdry += s.bdry;
      nonempty = true;
      used = m;
      self(self, i + 1);
    }
    for (std::size_t c = 0; c < current.coords.size(); ++c) current.coords[c] -= used * s.v.coords[c];
    chi -= used * s.chi;
    bdry -= used * s.bdry;
    nonempty = was_nonempty;
  };
  dfs(dfs, 0);
  return {found.begin(), found.end()};
}

}  // namespace nsurf
