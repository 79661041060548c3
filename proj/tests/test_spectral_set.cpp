#include <array>

#include <gtest/gtest.h>

#include "bqm/spectral_set.hpp"

using bqm::Interval;
using bqm::SpectralSet;

TEST(SpectralSet, PointAndIntervalMembership) {
  const SpectralSet one = SpectralSet::point(1.0);
  EXPECT_TRUE(one.contains(1.0));
  EXPECT_FALSE(one.contains(1.0 + 1e-6));
  EXPECT_TRUE(one.contains(1.0 + 1e-12, 1e-9));

  const SpectralSet half_open = SpectralSet::interval(0.0, 2.0, true, false);
  EXPECT_TRUE(half_open.contains(0.0));
  EXPECT_TRUE(half_open.contains(1.5));
  EXPECT_FALSE(half_open.contains(2.0));
  EXPECT_FALSE(half_open.contains(-0.1));
}

TEST(SpectralSet, EmptyAndReals) {
  EXPECT_TRUE(SpectralSet::empty_set().empty());
  EXPECT_FALSE(SpectralSet::empty_set().contains(0.0));
  EXPECT_TRUE(SpectralSet::reals().contains(-1e300));
  EXPECT_TRUE(SpectralSet::reals().complement().empty());
  EXPECT_TRUE(SpectralSet::interval(3.0, 1.0).empty());
}

TEST(SpectralSet, MergesOverlappingPieces) {
  const SpectralSet s({Interval{0.0, 1.0, true, true}, Interval{0.5, 2.0, true, false}, Interval{5.0, 5.0, true, true}});
  ASSERT_EQ(s.pieces().size(), 2u);
  EXPECT_TRUE(s.contains(1.7));
  EXPECT_FALSE(s.contains(2.0));
  EXPECT_TRUE(s.contains(5.0));
}

TEST(SpectralSet, ComplementOfPointExcludesOnlyThePoint) {
  const SpectralSet c = SpectralSet::point(1.0).complement();
  EXPECT_FALSE(c.contains(1.0));
  EXPECT_TRUE(c.contains(0.999));
  EXPECT_TRUE(c.contains(1.001));
}

TEST(SpectralSet, BooleanIdentitiesOnProbePoints) {
  const std::array<double, 3> pts{-1.0, 0.5, 3.0};
  const SpectralSet a = SpectralSet::interval(-2.0, 1.0, false, true).unite(SpectralSet::point(3.0));
  const SpectralSet b = SpectralSet::points(pts);
  const std::array<double, 9> probes{-2.0, -1.5, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 4.0};
  for (double x : probes) {
    EXPECT_EQ(a.intersect(b).contains(x), a.contains(x) && b.contains(x)) << x;
    EXPECT_EQ(a.unite(b).contains(x), a.contains(x) || b.contains(x)) << x;
    EXPECT_EQ(a.complement().contains(x), !a.contains(x)) << x;
    EXPECT_EQ(a.minus(b).contains(x), a.contains(x) && !b.contains(x)) << x;
    // De Morgan
    EXPECT_EQ(a.unite(b).complement().contains(x), a.complement().intersect(b.complement()).contains(x)) << x;
  }
}

TEST(SpectralSet, DescribeIsReadable) {
  EXPECT_EQ(SpectralSet::empty_set().describe(), "{}");
  EXPECT_FALSE(SpectralSet::interval(0.0, 1.0).describe().empty());
}
