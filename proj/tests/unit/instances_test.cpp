#include <gtest/gtest.h>

#include "gowers/instances.hpp"
#include "gowers/rng.hpp"

using namespace gowers;

namespace {

PointId find_point(const SpaceInstance& space, const std::vector<int>& coords) {
  for (PointId x = 0; x < space.num_points(); ++x)
    if (space.point_coords[x] == coords) return x;
  return -1;
}

// Projective points are stored by one representative; accept any nonzero multiple.
PointId find_line(const SpaceInstance& space, const std::vector<int>& coords, int field) {
  for (int c = 1; c < field; ++c) {
    std::vector<int> scaled = coords;
    for (int& v : scaled) v = v * c % field;
    if (PointId x = find_point(space, scaled); x >= 0) return x;
  }
  return -1;
}

Bits point_set(const SpaceInstance& space, const std::vector<int>& xs) { return bits_from_list(space.num_points(), xs); }

}  // namespace

TEST(Builders, MathiasSilverMinSizeTwo) {
  auto ms = build_instance({{"kind", "MathiasSilver"}, {"universe", 6}, {"min_size", 2}, {"slack", 1}});
  EXPECT_EQ(ms->num_subspaces(), 64 - 1 - 6);
  for (SubspaceId p = 0; p < ms->num_subspaces(); ++p) EXPECT_GE(ms->members[p].count(), 2u);
  EXPECT_TRUE(check_axioms(*ms, 2).all_pass());
}

TEST(Builders, RosendalTailPaletteClosedUnderIntersection) {
  auto f2 = build_instance({{"kind", "Rosendal"}, {"field", 2}, {"dim", 3}, {"slack", 1}, {"palette", "tail"}});
  ASSERT_EQ(f2->num_subspaces(), 3);
  EXPECT_EQ(f2->rank[0], 3);
  EXPECT_EQ(f2->rank[1], 2);
  EXPECT_EQ(f2->rank[2], 1);
  for (SubspaceId p = 0; p < 3; ++p)
    for (SubspaceId q = 0; q < 3; ++q) EXPECT_TRUE(f2->find_by_members(f2->members[p] & f2->members[q]).has_value());
  EXPECT_TRUE(check_axioms(*f2, 2).all_pass());
}

TEST(Builders, GridSphereHasMetric) {
  auto grid = build_instance({{"kind", "GridSphere"}, {"dim", 2}, {"step", "1/4"}, {"slack", 1}});
  EXPECT_TRUE(grid->has_metric());
  EXPECT_TRUE(grid->point_only);
}

TEST(Builders, RejectsInconsistentParameters) {
  EXPECT_THROW(build_instance({{"kind", "Rosendal"}, {"field", 4}, {"dim", 3}}), SpecInvalid);
  EXPECT_THROW(build_instance({{"kind", "MathiasSilver"}, {"universe", 4}, {"min_size", 5}}), SpecInvalid);
  EXPECT_THROW(build_instance({{"kind", "Banach"}}), SpecInvalid);
}

TEST(Pigeonhole, EvensDecideTheMathiasSilverUniverse) {
  auto ms = make_mathias_silver(8, 1, 1);
  Bits evens = point_set(*ms, {0, 2, 4, 6});
  PigeonholeResult res = pigeonhole(PigeonholeProvider{}, *ms, {}, evens, 0);
  EXPECT_EQ(res.q, ms_subspace(*ms, {0, 2, 4, 6}));
  EXPECT_TRUE(res.side_a);
}

TEST(Pigeonhole, RosendalF2EitherDecidesOrSaysSo) {
  auto f2 = make_rosendal(2, 4, 1);
  SplitRng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    Bits A(f2->num_points());
    for (PointId x = 0; x < f2->num_points(); ++x)
      if (rng.below(2)) A.set(x);
    try {
      PigeonholeResult res = pigeonhole(PigeonholeProvider{}, *f2, {}, A, 0);
      const Bits& inside = f2->members[res.q];
      EXPECT_TRUE(res.side_a ? inside.is_subset_of(A) : !inside.intersects(A));
    } catch (const PigeonholeUnavailable&) {
      for (SubspaceId q = 0; q < f2->num_subspaces(); ++q) {
        EXPECT_TRUE(f2->members[q].intersects(A));
        EXPECT_FALSE(f2->members[q].is_subset_of(A));
      }
    }
  }
}

TEST(Pigeonhole, FirstCoordinateOneIsUnavailableOverF3) {
  auto f3 = make_rosendal(3, 4, 1);
  Bits A = counterexample_set(*f3, "FirstCoordOne");
  EXPECT_THROW(pigeonhole(PigeonholeProvider{}, *f3, {}, A, 0), PigeonholeUnavailable);
  json scan = scan_meets_both(*f3, A, 1);
  EXPECT_TRUE(scan["meets_both_everywhere"].get<bool>());
  EXPECT_EQ(pigeonhole_scan_everywhere(*f3, A)["pigeonhole"], "unavailable_everywhere");
}

TEST(Counterexamples, FirstCoordOneMembership) {
  auto f3 = make_rosendal(3, 4, 1);
  Bits A = counterexample_set(*f3, "FirstCoordOne");
  EXPECT_TRUE(A.test(find_point(*f3, {1, 0, 0, 0})));
  EXPECT_FALSE(A.test(find_point(*f3, {2, 0, 0, 0})));
}

TEST(Counterexamples, ProjectiveFirstLastMembership) {
  auto proj = build_instance({{"kind", "ProjectiveRosendal"}, {"field", 3}, {"dim", 4}, {"slack", 1}});
  Bits A = counterexample_set(*proj, "ProjectiveFirstLast");
  PointId mixed = find_line(*proj, {1, 0, 2, 0}, 3);
  PointId equal = find_line(*proj, {1, 0, 1, 0}, 3);
  ASSERT_GE(mixed, 0);
  ASSERT_GE(equal, 0);
  EXPECT_FALSE(A.test(mixed));
  EXPECT_TRUE(A.test(equal));
  EXPECT_TRUE(scan_meets_both(*proj, A, 2)["meets_both_everywhere"].get<bool>());
}

TEST(Counterexamples, PhiSupportThreshold) {
  auto f5 = make_rosendal(5, 4, 1);
  Payoff phi = phi_support_payoff(*f5);
  PointId x0 = find_point(*f5, {2, 0, 0, 0});
  EXPECT_FALSE(phi({x0, find_point(*f5, {0, 1, 0, 0})}));
  EXPECT_TRUE(phi({x0, find_point(*f5, {0, 0, 1, 0})}));
  EXPECT_TRUE(phi({find_point(*f5, {1, 0, 0, 0}), find_point(*f5, {0, 3, 1, 0})}));
}

TEST(Counterexamples, PhiSupportNeedsRosendal) {
  EXPECT_THROW(phi_support_payoff(*make_mathias_silver(4, 1, 1)), KindMismatch);
}
