#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace nsurf;
using namespace testing_support;

namespace {

NormalVector vec(CoordSystem s, std::vector<int> xs) {
  NormalVector v{s, {}};
  for (int x : xs) v.coords.emplace_back(x);
  return v;
}

// Weight triples on the torus edges that satisfy the triangle rules.
std::vector<std::array<long, 3>> realizable_weights(const BoundaryTorus& torus, long max) {
  std::vector<std::array<long, 3>> out;
  for (long a = 0; a <= max; ++a)
    for (long b = 0; b <= max; ++b)
      for (long c = 0; c <= max; ++c)
        if (arc_counts_for(torus, {a, b, c})) out.push_back({a, b, c});
  return out;
}

CurveSystem curves_for(const BoundaryTorus& torus, std::array<long, 3> w) {
  return curves_from_arc_counts(torus, *arc_counts_for(torus, w));
}

// Edge chain (x e1 + y e2) of a curve with dual coordinates (p, q).
std::vector<Q> chain_of(const Triangulation& tri, const BoundaryTorus& torus, long p, long q) {
  std::vector<Q> c(Skeleton(tri).edge_count(), 0);
  c[torus.e1()] = q;
  c[torus.e2()] = -p;
  return c;
}

long gcd_of(std::array<long, 3> w) { return std::gcd(std::gcd(w[0], w[1]), w[2]); }

}  // namespace

TEST(BoundaryTorus, Preconditions) {
  for (const auto& name : bundled_closed()) {
    try {
      boundary_torus(load_tri(name));
      FAIL() << name;
    } catch (const PreconditionError& e) {
      EXPECT_EQ(e.kind(), "no_torus_boundary");
    }
  }
  EXPECT_THROW(boundary_torus(load_tri("ball_1tet.tri")), PreconditionError);
  for (const auto& name : bundled_torus_bounded()) {
    const auto torus = boundary_torus(load_tri(name));
    EXPECT_LT(torus.e1(), torus.e2());
    EXPECT_LT(torus.edges[1], torus.edges[2]);
  }
}

TEST(BoundaryCurves, ZeroVectorGivesEmptySystem) {
  const auto tri = load_tri("solid_torus_1tet.tri");
  const auto cs = boundary_curves(tri, NormalVector::zero(CoordSystem::Normal, 1));
  EXPECT_TRUE(cs.empty());
  try {
    slope_of(boundary_torus(tri), cs);
    FAIL();
  } catch (const SlopeError& e) {
    EXPECT_EQ(e.kind(), "empty_system");
  }
  EXPECT_FALSE(essential_slope(boundary_torus(tri), cs));
}

TEST(BoundaryCurves, VertexLinkIsInessential) {
  for (const auto& name : bundled_torus_bounded()) {
    const auto tri = load_tri(name);
    const auto cs = boundary_curves(tri, vertex_link(tri, CoordSystem::Normal, 0));
    const auto classes = component_classes(cs);
    ASSERT_EQ(classes.size(), 1u) << name;
    EXPECT_EQ(classes[0], (std::pair<long, long>{0, 0})) << name;
    try {
      slope_of(boundary_torus(tri), cs);
      FAIL();
    } catch (const SlopeError& e) {
      EXPECT_EQ(e.kind(), "null_homotopic");
    }
  }
}

TEST(BoundaryCurves, InadmissibleRejected) {
  const auto tri = load_tri("solid_torus_1tet.tri");
  EXPECT_THROW(boundary_curves(tri, vec(CoordSystem::Normal, {1, 0, 0, 0, 0, 0, 0})), AdmissibilityError);
}

TEST(BoundaryCurves, InconsistentArcCountsRejected) {
  const auto torus = boundary_torus(load_tri("solid_torus_1tet.tri"));
  EXPECT_THROW(curves_from_arc_counts(torus, {{{1, 0, 0}, {0, 0, 0}}}), InconsistentWeightsError);
}

TEST(Slopes, MeridianMatchesHomologyOracle) {
  for (const auto& name : bundled_torus_bounded()) {
    const auto tri = load_tri(name);
    const auto torus = boundary_torus(tri);
    std::optional<Slope> meridian;
    for (const auto& v : vertex_solutions(tri, CoordSystem::Normal).solutions) {
      if (euler_characteristic(tri, v) != 1) continue;
      const auto r = analyze(tri, v);
      if (!r.connected || r.components[0].boundary_curves != 1) continue;
      const auto s = essential_slope(torus, boundary_curves(tri, v));
      if (!s) continue;
      meridian = s;
      // The pipeline slope is one of the weight-consistent classes.
      const auto cands = oracle_slopes(tri, boundary_edge_weights(tri, v));
      EXPECT_NE(std::find(cands.begin(), cands.end(), std::pair{s->p, s->q}), cands.end()) << name;
      // A disk boundary dies in H1 of the manifold; other classes do not.
      EXPECT_TRUE(null_in_h1(tri, chain_of(tri, torus, s->p, s->q))) << name;
      for (auto [p, q] : cands)
        if (std::pair{p, q} != std::pair{s->p, s->q}) {
          EXPECT_FALSE(null_in_h1(tri, chain_of(tri, torus, p, q))) << name;
        }
      break;
    }
    ASSERT_TRUE(meridian) << name;
    EXPECT_EQ(meridian->multiplicity, 1);
  }
}

TEST(Slopes, SolidTorusMeridianRegression) {
  const auto tri = load_tri("solid_torus_1tet.tri");
  const auto s = slope_of(boundary_torus(tri), boundary_curves(tri, vec(CoordSystem::Normal, {0, 0, 1, 1, 0, 0, 1})));
  EXPECT_EQ(s, (Slope{1, 2, 1}));
}

TEST(Slopes, SingleCurvesMatchWeightOracle) {
  for (const auto& name : bundled_torus_bounded()) {
    const auto tri = load_tri(name);
    const auto torus = boundary_torus(tri);
    for (const auto& w : realizable_weights(torus, 5)) {
      const auto cs = curves_for(torus, w);
      EXPECT_EQ(cs.weights()[0], static_cast<std::size_t>(w[0]));
      const auto classes = component_classes(cs);
      std::size_t essential = 0;
      for (const auto& c : classes) essential += c != std::pair<long, long>{0, 0};
      if (classes.size() != 1 || essential != 1) continue;
      const auto s = slope_of(torus, cs);
      const auto cands = oracle_slopes(tri, w);
      EXPECT_NE(std::find(cands.begin(), cands.end(), std::pair{s.p, s.q}), cands.end()) << name;
      // Doubling gives two parallel copies.
      const auto two = slope_of(torus, curves_for(torus, {2 * w[0], 2 * w[1], 2 * w[2]}));
      EXPECT_EQ(two, (Slope{s.p, s.q, 2})) << name;
    }
  }
}

TEST(Slopes, BasisCurve) {
  const auto tri = load_tri("solid_torus_1tet.tri");
  const auto torus = boundary_torus(tri);
  // A curve crossing e1 once and e2 never has dual class (1, 0).
  std::optional<std::array<long, 3>> w;
  for (const auto& cand : realizable_weights(torus, 2))
    if (cand[0] == 1 && cand[1] == 0) w = cand;
  ASSERT_TRUE(w);
  EXPECT_EQ(slope_of(torus, curves_for(torus, *w)), (Slope{1, 0, 1}));
  EXPECT_EQ(slope_of(torus, curves_for(torus, {2, 0, 2 * (*w)[2]})), (Slope{1, 0, 2}));
}

TEST(Slopes, WeightsEqualBoundaryEdgeWeights) {
  std::mt19937 rng(3);
  for (const auto& name : bundled_torus_bounded()) {
    const auto tri = load_tri(name);
    const auto set = vertex_solutions(tri, CoordSystem::AlmostNormal);
    for (int i = 0; i < 40; ++i) {
      const auto v = random_admissible(tri, set, rng);
      const auto cs = boundary_curves(tri, v);
      const auto w = boundary_edge_weights(tri, v);
      for (std::size_t s = 0; s < 3; ++s) EXPECT_EQ(static_cast<long>(cs.weights()[s]), w[s]) << name;
      std::size_t pts = 0;
      for (auto x : w) pts += static_cast<std::size_t>(x);
      EXPECT_EQ(cs.points().size(), pts) << name;
    }
  }
}

TEST(CycleClass, RotationAndReversal) {
  for (const auto& name : bundled_torus_bounded()) {
    const auto torus = boundary_torus(load_tri(name));
    for (const auto& w : realizable_weights(torus, 4)) {
      const auto cs = curves_for(torus, w);
      for (const auto& cyc : cs.cycles()) {
        const auto base = cycle_class(cs, cyc);
        auto rot = cyc;
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        EXPECT_EQ(cycle_class(cs, rot), base);
        CurveSystem::Cycle rev(cyc.rbegin(), cyc.rend());
        for (auto& [c, d] : rev) d = -d;
        const auto back = cycle_class(cs, rev);
        EXPECT_EQ(back, (std::pair{-base.first, -base.second}));
      }
    }
  }
}

TEST(CycleClass, ComponentsArePrimitive) {
  // Every simple closed curve on a torus is trivial or primitive.
  for (const auto& name : bundled_torus_bounded()) {
    const auto torus = boundary_torus(load_tri(name));
    for (const auto& w : realizable_weights(torus, 6))
      for (auto [p, q] : component_classes(curves_for(torus, w)))
        if (p != 0 || q != 0) {
          EXPECT_EQ(std::gcd(p, q), 1) << name;
        }
  }
}

TEST(BandSum, EmptyAndSingleArcSystems) {
  const auto torus = boundary_torus(load_tri("solid_torus_1tet.tri"));
  EXPECT_TRUE(band_sum_slopes(torus, curves_for(torus, {0, 0, 0})).empty());
  for (const auto& w : realizable_weights(torus, 2)) {
    const auto cs = curves_for(torus, w);
    if (cs.chords_in_face(0) > 1 || cs.chords_in_face(1) > 1) continue;
    EXPECT_TRUE(band_pairs(cs).empty());
    EXPECT_TRUE(band_sum_slopes(torus, cs).empty());
  }
}

TEST(BandSum, ParallelCopiesMergeToTrivialCurve) {
  const auto torus = boundary_torus(load_tri("solid_torus_1tet.tri"));
  std::optional<std::array<long, 3>> w;
  for (const auto& cand : realizable_weights(torus, 2))
    if (cand[0] == 1 && cand[1] == 0) w = cand;
  ASSERT_TRUE(w);
  const auto cs = curves_for(torus, {2, 0, 2 * (*w)[2]});
  const auto pairs = band_pairs(cs);
  ASSERT_FALSE(pairs.empty());
  for (auto [a, b] : pairs) {
    const auto classes = component_classes(band_sum(cs, a, b));
    ASSERT_EQ(classes.size(), 1u);
    EXPECT_EQ(classes[0], (std::pair<long, long>{0, 0}));
  }
  EXPECT_TRUE(band_sum_slopes(torus, cs).empty());
}

TEST(BandSum, InvalidPairRejected) {
  const auto torus = boundary_torus(load_tri("solid_torus_1tet.tri"));
  const auto cs = curves_for(torus, realizable_weights(torus, 3).back());
  try {
    band_sum(cs, 0, 0);
    FAIL();
  } catch (const SlopeError& e) {
    EXPECT_EQ(e.kind(), "invalid_band");
  }
}

TEST(BandSum, DoubleBandInversion) {
  for (const auto& name : bundled_torus_bounded()) {
    const auto torus = boundary_torus(load_tri(name));
    for (const auto& w : realizable_weights(torus, 4)) {
      const auto cs = curves_for(torus, w);
      const auto before = component_classes(cs);
      for (auto [a, b] : band_pairs(cs)) {
        const auto once = band_sum(cs, a, b);
        ASSERT_TRUE(cobound(once, a, b)) << name;
        const auto twice = band_sum(once, a, b);
        EXPECT_EQ(twice, cs) << name;
        auto after = component_classes(twice);
        auto sorted_before = before;
        std::sort(after.begin(), after.end());
        std::sort(sorted_before.begin(), sorted_before.end());
        EXPECT_EQ(after, sorted_before) << name;
      }
    }
  }
}

TEST(BandSum, PreservesWeightsAndChordCount) {
  for (const auto& name : bundled_torus_bounded()) {
    const auto torus = boundary_torus(load_tri(name));
    for (const auto& w : realizable_weights(torus, 4)) {
      const auto cs = curves_for(torus, w);
      if (gcd_of(w) == 0) continue;
      for (auto [a, b] : band_pairs(cs)) {
        const auto out = band_sum(cs, a, b);
        EXPECT_EQ(out.weights(), cs.weights());
        EXPECT_EQ(out.chords().size(), cs.chords().size());
        // Each point still has exactly two chord ends.
        std::vector<int> deg(out.points().size(), 0);
        for (const auto& c : out.chords())
          for (const auto& e : c.ends) ++deg[e.point];
        for (int d : deg) EXPECT_EQ(d, 2);
      }
    }
  }
}

namespace {

std::set<std::pair<long, long>> slope_set(const std::vector<SurveyEntry>& es) {
  std::set<std::pair<long, long>> out;
  for (const auto& e : es) out.emplace(e.p, e.q);
  return out;
}

}  // namespace

TEST(Survey, ClosedTriangulationRejected) {
  try {
    slope_survey(load_tri("s3_1tet.tri"), {{0, 6, 2}, 1});
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.kind(), "no_torus_boundary");
  }
}

TEST(Survey, SolidTorusFindsMeridian) {
  const auto es = slope_survey(load_tri("solid_torus_1tet.tri"), {{1, 6, 2}, 1});
  ASSERT_FALSE(es.empty());
  const auto it = std::find_if(es.begin(), es.end(), [](const SurveyEntry& e) { return e.p == 1 && e.q == 2; });
  ASSERT_NE(it, es.end());
  EXPECT_EQ(it->provenance, SlopeProvenance::Normal);
}

TEST(Survey, DeterministicAndThreadIndependent) {
  for (const auto& name : bundled_torus_bounded()) {
    const auto tri = load_tri(name);
    const auto a = slope_survey(tri, {{-1, 8, 2}, 1});
    const auto b = slope_survey(tri, {{-1, 8, 2}, 1});
    const auto c = slope_survey(tri, {{-1, 8, 2}, 4});
    ASSERT_EQ(a.size(), b.size()) << name;
    ASSERT_EQ(a.size(), c.size()) << name;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (const auto* o : {&b[i], &c[i]}) {
        EXPECT_EQ(a[i].p, o->p);
        EXPECT_EQ(a[i].q, o->q);
        EXPECT_EQ(a[i].provenance, o->provenance);
        EXPECT_EQ(a[i].witness, o->witness);
      }
    }
  }
}

TEST(Survey, MonotoneInChiMin) {
  for (const auto& name : bundled_torus_bounded()) {
    const auto tri = load_tri(name);
    std::set<std::pair<long, long>> prev;
    for (long chi_min : {1L, 0L, -1L, -2L}) {
      const auto cur = slope_set(slope_survey(tri, {{chi_min, 8, 2}, 2}));
      for (const auto& s : prev) EXPECT_TRUE(cur.contains(s)) << name;
      prev = cur;
    }
  }
}

TEST(Survey, WitnessesRealizeTheirSlopes) {
  for (const auto& name : bundled_torus_bounded()) {
    const auto tri = load_tri(name);
    const auto torus = boundary_torus(tri);
    for (const auto& e : slope_survey(tri, {{-1, 8, 2}, 2})) {
      EXPECT_EQ(std::gcd(e.p, e.q), 1) << name;
      const auto cs = boundary_curves(tri, e.witness);
      if (e.provenance == SlopeProvenance::Normal) {
        const auto s = essential_slope(torus, cs);
        ASSERT_TRUE(s) << name;
        EXPECT_EQ(std::pair(s->p, s->q), std::pair(e.p, e.q)) << name;
      } else {
        EXPECT_TRUE(std::ranges::any_of(band_sum_slopes(torus, cs),
                                        [&](const Slope& s) { return s.p == e.p && s.q == e.q; }))
            << name;
      }
    }
  }
}
