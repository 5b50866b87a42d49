#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace nsurf;
using namespace testing_support;

namespace {

using E = MorseEvent;

MorseWord word(std::initializer_list<MorseEvent> es) { return MorseWord(std::vector<MorseEvent>(es)); }

LmaxProfile profile(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return LmaxProfile(std::move(v));
}

// Six strands, then an independent Birth above a Death.
MorseWord six_strand_word() {
  return word({E::birth(0), E::birth(2), E::birth(4), E::birth(5), E::death(1), E::death(0), E::death(0), E::death(0)});
}

}  // namespace

TEST(Parse, BundledWords) {
  EXPECT_EQ(load_word("unknot.morse"), word({E::birth(0), E::death(0)}));
  const auto t = load_word("trefoil.morse");
  EXPECT_EQ(t.size(), 7u);
  EXPECT_EQ(serialize(parse_morse(serialize(t))), serialize(t));
}

TEST(Parse, Errors) {
  try {
    parse_morse("min 0\nfoo 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 1u);
  }
  EXPECT_THROW(parse_morse("min x\n"), ParseError);
  EXPECT_THROW(parse_morse("min 0 1\nmax 0\n"), ParseError);
  try {
    parse_morse("min 0\n");
    FAIL();
  } catch (const MorseError& e) {
    EXPECT_EQ(e.kind(), "invalid_word");
  }
  EXPECT_THROW(parse_morse("min 0\nmax 1\n"), MorseError);
  EXPECT_THROW(word({E::vertex(0, 0, 2), E::death(0)}), MorseError);  // valence 2
}

TEST(Width, Examples) {
  EXPECT_EQ(width(load_word("unknot.morse")), 2);
  EXPECT_EQ(width(load_word("trefoil.morse")), 8);
  EXPECT_EQ(width(load_word("trefoil_fat.morse")), 14);
  // Extra crossings between the same critical events change nothing.
  const auto more = word({E::birth(0), E::birth(2), E::crossing(1, 1), E::crossing(1, -1), E::crossing(1, 1),
                          E::crossing(2, 1), E::crossing(1, 1), E::death(0), E::death(0)});
  EXPECT_EQ(width(more), 8);
}

TEST(Width, LowerBounds) {
  for (const auto& name : {"unknot.morse", "trefoil.morse", "trefoil_fat.morse"}) {
    const auto w = load_word(name);
    const auto gaps = w.gap_counts();
    EXPECT_GE(width(w), static_cast<long>(*std::max_element(gaps.begin(), gaps.end())));
    const auto r = bridge_report(w);
    if (r.is_bridge) {
      EXPECT_GE(width(w), 2 * r.bridge_number);
    }
  }
}

TEST(Lmax, Examples) {
  EXPECT_EQ(lmax_profile(load_word("trefoil.morse"), LmaxMode::RelativeToK), profile({4}));
  EXPECT_EQ(lmax_profile(load_word("trefoil_fat.morse"), LmaxMode::RelativeToK), profile({4, 4}));
  EXPECT_LT(profile({4}), profile({4, 4}));
  EXPECT_EQ(lmax_profile(load_word("trefoil.morse"), LmaxMode::Ambient), profile({0}));
  EXPECT_LT(profile({3, 3}), profile({4}));
}

TEST(Lmax, BridgeWordsHaveOneThickLevel) {
  for (const auto& name : {"unknot.morse", "trefoil.morse"}) {
    const auto w = load_word(name);
    EXPECT_EQ(lmax_profile(w, LmaxMode::RelativeToK), profile({2 * bridge_report(w).bridge_number}));
  }
}

TEST(Lmax, ExplicitLeaves) {
  const LeafComponent torus{true, false, 0}, genus2{true, false, -2};
  const std::vector<LeafDescriptor> leaves = {LeafDescriptor{{torus}}, LeafDescriptor{{genus2}}, LeafDescriptor{{torus}}};
  EXPECT_EQ(lmax_profile(leaves, Ambient::Closed), profile({3}));
}

TEST(Lmax, TotalPreorder) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> len(0, 3), val(0, 3);
  std::vector<LmaxProfile> ps;
  for (int i = 0; i < 40; ++i) {
    std::vector<Rational> v(static_cast<std::size_t>(len(rng)));
    for (auto& x : v) x = val(rng);
    ps.emplace_back(std::move(v));
  }
  for (const auto& a : ps)
    for (const auto& b : ps) {
      EXPECT_TRUE(a <= b || b <= a);
      if (a <= b && b <= a) {
        EXPECT_EQ(a, b);
      }
      for (const auto& c : ps)
        if (a <= b && b <= c) {
          EXPECT_LE(a, c);
        }
    }
}

TEST(LeafComplexity, Examples) {
  const LeafComponent sphere{true, true, 2}, torus{true, false, 0}, annulus{false, false, 0}, disk{false, true, 1},
      genus2{true, false, -2};
  EXPECT_EQ(leaf_complexity(LeafDescriptor{{sphere}}, Ambient::Closed), Rational(0));
  EXPECT_EQ(leaf_complexity(LeafDescriptor{{torus}}, Ambient::Closed), Rational(1));
  EXPECT_EQ(leaf_complexity(LeafDescriptor{{annulus}}, Ambient::Bounded), Rational(1, 2));
  EXPECT_EQ(leaf_complexity(LeafDescriptor{{sphere}, 4}, Ambient::RelativeToK), Rational(4));
  EXPECT_EQ(leaf_complexity(LeafDescriptor{{disk, genus2}}, Ambient::Bounded), Rational(3));
}

TEST(LeafComplexity, InconsistentDescriptors) {
  const LeafComponent bad_sphere{true, true, 0}, bad_closed{true, false, 2}, bad_bounded{false, false, 2},
      sphere{true, true, 2};
  for (const LeafDescriptor& d : {LeafDescriptor{{bad_sphere}}, LeafDescriptor{{bad_closed}},
                                  LeafDescriptor{{bad_bounded}}, LeafDescriptor{{sphere}, -1}}) {
    try {
      leaf_complexity(d, Ambient::Bounded);
      FAIL();
    } catch (const MorseError& e) {
      EXPECT_EQ(e.kind(), "inconsistent_descriptor");
    }
  }
  const LeafComponent disk{false, true, 1};
  EXPECT_THROW(leaf_complexity(LeafDescriptor{{disk}}, Ambient::Closed), MorseError);
}

TEST(Bridge, Reports) {
  auto r = bridge_report(load_word("unknot.morse"));
  EXPECT_TRUE(r.is_bridge);
  EXPECT_EQ(r.bridge_number, 1);
  r = bridge_report(load_word("trefoil.morse"));
  EXPECT_TRUE(r.is_bridge);
  EXPECT_EQ(r.bridge_number, 2);
  r = bridge_report(word({E::birth(0), E::death(0), E::birth(0), E::death(0)}));
  EXPECT_FALSE(r.is_bridge);
  EXPECT_EQ(r.bridge_number, 2);
  try {
    bridge_report(word({E::vertex(0, 0, 4), E::death(0), E::death(0)}));
    FAIL();
  } catch (const MorseError& e) {
    EXPECT_EQ(e.kind(), "vertex_present");
  }
}

TEST(Vertex, GoodPosition) {
  EXPECT_TRUE(vertex_in_good_position(word({E::vertex(0, 0, 4), E::death(0), E::death(0)})));
  EXPECT_FALSE(vertex_in_good_position(word({E::birth(0), E::vertex(1, 1, 3), E::death(0), E::death(0)})));
  try {
    vertex_in_good_position(load_word("unknot.morse"));
    FAIL();
  } catch (const MorseError& e) {
    EXPECT_EQ(e.kind(), "no_vertex");
  }
}

TEST(Commute, DeathBelowIndependentBirth) {
  const auto w = six_strand_word();
  const auto c = commute(w, 3);
  EXPECT_EQ(c[3], E::death(1));
  EXPECT_EQ(c[4], E::birth(3));
  // The gap between the two swapped events drops from 8 to 4 strands.
  EXPECT_EQ(w.gap_counts()[3], 8u);
  EXPECT_EQ(c.gap_counts()[3], 4u);
  EXPECT_EQ(width(w) - width(c), 4);
}

TEST(Commute, CrossingsOnDisjointStrands) {
  const auto w = word({E::birth(0), E::birth(2), E::crossing(2, 1), E::crossing(0, -1), E::death(0), E::death(0)});
  const auto c = commute(w, 2);
  EXPECT_EQ(c[2], E::crossing(0, -1));
  EXPECT_EQ(c[3], E::crossing(2, 1));
  EXPECT_EQ(width(c), width(w));
}

TEST(Commute, DependentEventsRejected) {
  const auto w = word({E::birth(0), E::birth(1), E::death(1), E::death(0)});
  try {
    commute(w, 1);
    FAIL();
  } catch (const MorseError& e) {
    EXPECT_EQ(e.kind(), "dependent_events");
  }
  EXPECT_THROW(commute(w, 3), MorseError);
}

TEST(Commute, TieUsesSide) {
  const auto w = word({E::birth(0), E::death(0), E::birth(0), E::death(0)});
  EXPECT_EQ(commute(w, 1, CommuteSide::Left), word({E::birth(0), E::birth(0), E::death(2), E::death(0)}));
  EXPECT_EQ(commute(w, 1, CommuteSide::Right), word({E::birth(0), E::birth(2), E::death(0), E::death(0)}));
}

TEST(Commute, InvolutionOnItsDomain) {
  for (const auto& w : {load_word("trefoil.morse"), load_word("trefoil_fat.morse"), six_strand_word(),
                        word({E::birth(0), E::death(0), E::birth(0), E::death(0)})}) {
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
      for (auto side : detail::commute_sides(w, k)) {
        const auto back = side == CommuteSide::Left ? CommuteSide::Right : CommuteSide::Left;
        EXPECT_EQ(commute(commute(w, k, side), k, back), w);
      }
  }
}

TEST(Zigzag, Cancellation) {
  const auto fat = load_word("trefoil_fat.morse");
  EXPECT_FALSE(is_zigzag(fat, 2));
  const auto w = word({E::birth(0), E::birth(2), E::death(1), E::death(0)});
  ASSERT_TRUE(is_zigzag(w, 1));
  EXPECT_EQ(cancel_zigzag(w, 1), load_word("unknot.morse"));
  EXPECT_THROW(cancel_zigzag(w, 0), MorseError);
}

TEST(Minimize, FatTrefoilThinsToEight) {
  const auto r = minimize(load_word("trefoil_fat.morse"), Objective::Width);
  EXPECT_EQ(r.width, 8);
  EXPECT_EQ(width(r.word), 8);
  EXPECT_EQ(bridge_report(r.word).bridge_number, 2);
  const auto l = minimize(load_word("trefoil_fat.morse"), Objective::Lmax);
  EXPECT_EQ(l.lmax, profile({4}));
}

TEST(Minimize, CommutationAloneCannotThinFatTrefoil) {
  MinimizeOptions only;
  only.allow_cancellation = false;
  EXPECT_EQ(minimize(load_word("trefoil_fat.morse"), Objective::Width, only).width, 14);
}

TEST(Minimize, UnknotAlreadyMinimal) {
  const auto r = minimize(load_word("unknot.morse"), Objective::Width);
  EXPECT_EQ(r.width, 2);
  EXPECT_EQ(r.word, load_word("unknot.morse"));
}

TEST(Minimize, IdempotentAndNeverWorse) {
  for (const auto& w : {load_word("trefoil.morse"), load_word("trefoil_fat.morse"), six_strand_word()}) {
    for (auto obj : {Objective::Width, Objective::Lmax}) {
      const auto once = minimize(w, obj);
      const auto twice = minimize(once.word, obj);
      EXPECT_EQ(twice.width, once.width);
      EXPECT_EQ(twice.lmax, once.lmax);
      EXPECT_LE(once.width, obj == Objective::Width ? width(w) : once.width);
      EXPECT_LE(once.lmax, obj == Objective::Lmax ? lmax_profile(w, LmaxMode::RelativeToK) : once.lmax);
    }
  }
}

TEST(Minimize, CapEnforced) {
  std::vector<MorseEvent> es{E::birth(0), E::birth(2)};
  for (int i = 0; i < 12; ++i) es.push_back(E::crossing(1, 1));
  es.push_back(E::death(0));
  es.push_back(E::death(0));
  const MorseWord w(es);
  EXPECT_THROW(minimize(w, Objective::Width), GuardError);
  MinimizeOptions big;
  big.cap = 16;
  EXPECT_NO_THROW(minimize(w, Objective::Width, big));
}
