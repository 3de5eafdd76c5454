#include <gtest/gtest.h>

#include "gowers/instances.hpp"

using namespace gowers;

namespace {

bool subset_of(const Bits& a, const Bits& b) { return a.is_subset_of(b); }

// Independent reading of compatibility: some palette element lies inside both member sets.
bool compatible_by_search(const SpaceInstance& s, SubspaceId p, SubspaceId q) {
  for (SubspaceId r = 0; r < s.num_subspaces(); ++r)
    if (subset_of(s.members[r], s.members[p]) && subset_of(s.members[r], s.members[q])) return true;
  return false;
}

}  // namespace

TEST(Axioms, MathiasSilverSixPassesAtHorizonTwo) {
  auto ms = make_mathias_silver(6, 1, 1);
  AxiomReport report = check_axioms(*ms, 2);
  EXPECT_TRUE(report.all_pass()) << report.to_json().dump();
  EXPECT_EQ(ms->num_subspaces(), 63);
}

TEST(Axioms, SingleSubspaceIsGaleStewart) {
  auto single = make_single_subspace(3);
  EXPECT_EQ(single->num_subspaces(), 1);
  EXPECT_TRUE(check_axioms(*single, 3).all_pass());
}

TEST(Axioms, StarCollapsedToEqualityBreaksAxiomOne) {
  SpaceInstance broken = *make_mathias_silver(4, 1, 1);
  for (SubspaceId p = 0; p < broken.num_subspaces(); ++p) {
    broken.star[p].reset();
    broken.star[p].set(p);
  }
  AxiomReport report = check_axioms(broken, 1);
  EXPECT_FALSE(report.axioms[0].pass);
  ASSERT_FALSE(report.axioms[0].counterexample.is_null());
  const json& witness = report.axioms[0].counterexample;
  SubspaceId p = resolve_subspace(broken, witness.at("p"));
  SubspaceId q = resolve_subspace(broken, witness.at("q"));
  EXPECT_TRUE(broken.le(p, q));
  EXPECT_FALSE(broken.le_star(p, q));
}

TEST(Relations, CofiniteSubsetWithinSlack) {
  auto ms = make_mathias_silver(6, 1, 1);
  SubspaceId M = ms_subspace(*ms, {0, 1, 2, 3, 4, 5});
  SubspaceId N = ms_subspace(*ms, {0, 1, 2, 4, 5});
  EXPECT_TRUE(ms->lessapprox(N, M));
  SubspaceId smaller = ms_subspace(*ms, {0, 1, 2, 4});
  EXPECT_FALSE(ms->lessapprox(smaller, M));
}

TEST(Relations, LessapproxIsReflexive) {
  for (auto space : {make_mathias_silver(6, 2, 1), make_rosendal(2, 3, 1)})
    for (SubspaceId p = 0; p < space->num_subspaces(); ++p) EXPECT_TRUE(space->lessapprox(p, p));
}

TEST(Relations, CompatibilityMatchesPaletteSearch) {
  auto ms = make_mathias_silver(6, 1, 1);
  SubspaceId low = ms_subspace(*ms, {0, 1, 2});
  SubspaceId high = ms_subspace(*ms, {3, 4, 5});
  SubspaceId overlap = ms_subspace(*ms, {2, 3, 4});
  EXPECT_FALSE(ms->compatible(low, high));
  EXPECT_TRUE(ms->compatible(low, overlap));
  for (SubspaceId p = 0; p < ms->num_subspaces(); p += 5)
    for (SubspaceId q = 0; q < ms->num_subspaces(); q += 3) {
      EXPECT_EQ(ms->compatible(p, q), compatible_by_search(*ms, p, q));
      EXPECT_EQ(ms->compatible(p, q), ms->compatible(q, p));
    }
}

TEST(Relations, MeetWitnessIsLessapproxToFirstArgument) {
  auto ms = make_mathias_silver(5, 1, 1);
  for (SubspaceId p = 0; p < ms->num_subspaces(); ++p)
    for (SubspaceId q = 0; q < ms->num_subspaces(); ++q) {
      if (!ms->le_star(p, q)) continue;
      auto r = ms->meet_witness(p, q);
      if (!r) continue;
      EXPECT_TRUE(ms->le(*r, p));
      EXPECT_TRUE(ms->le(*r, q));
      EXPECT_TRUE(ms->lessapprox(*r, p));
    }
}

TEST(Relations, FusionOfSingletonChainIsStarBelow) {
  auto ms = make_mathias_silver(6, 1, 1);
  for (SubspaceId p = 0; p < ms->num_subspaces(); ++p) {
    auto fused = ms->fusion_witness({p});
    ASSERT_TRUE(fused.has_value());
    EXPECT_TRUE(ms->le_star(*fused, p));
  }
}

TEST(Admission, GridSphereIsPointOnly) {
  auto grid = make_grid_sphere(2, 4, 1);
  ASSERT_TRUE(grid->has_metric());
  EXPECT_TRUE(grid->point_only);
  EXPECT_EQ(grid->num_points(), 32);
  EXPECT_EQ(grid->num_subspaces(), 17);
  for (SubspaceId p = 0; p < grid->num_subspaces(); ++p)
    for (PointId last = 0; last < grid->num_points(); ++last)
      for (PointId earlier = 0; earlier < grid->num_points(); earlier += 7)
        EXPECT_EQ(grid->admits({last}, p), grid->admits({earlier, last}, p));
}
