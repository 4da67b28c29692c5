#include <gtest/gtest.h>

#include "cmfuse/score.hpp"

using cmfuse::Ratio;
using cmfuse::Score;

TEST(Ratio, ReducesToLowestTerms) {
  const Ratio r{6, 8};
  EXPECT_EQ(r.num(), 3u);
  EXPECT_EQ(r.den(), 4u);
  EXPECT_EQ(Ratio(0, 7), Ratio::zero());
  EXPECT_THROW(Ratio(1, 0), std::domain_error);
}

TEST(Ratio, AddAndDivideStayExact) {
  Ratio sum;
  for (int i = 0; i < 3; ++i) sum += Ratio{1, 3};
  EXPECT_EQ(sum, Ratio::one());
  EXPECT_EQ((Ratio{1, 1} + Ratio{0, 1}) / 2, Ratio(1, 2));
  EXPECT_EQ(Ratio(4, 1) / 2, Ratio(2, 1));
  EXPECT_LT(Ratio(1, 3), Ratio(1, 2));
}

TEST(Score, RejectsValuesAboveOne) {
  EXPECT_THROW(Score(3, 2), std::domain_error);
  EXPECT_EQ(Score::clamped(Ratio{4, 2}), Score::one());
  EXPECT_EQ(Score::clamped(Ratio{2, 3}).str(), "2/3");
}

TEST(Score, VerdictIsExactEquality) {
  EXPECT_EQ(cmfuse::verdict_of(Score(4, 4)), cmfuse::Verdict::synonym);
  EXPECT_EQ(cmfuse::verdict_of(Score(1, 2)), cmfuse::Verdict::not_synonym);
  // 999999/1000000 is close to one but still not a synonym.
  EXPECT_EQ(cmfuse::verdict_of(Score(999999, 1000000)), cmfuse::Verdict::not_synonym);
}

TEST(Score, ParsesFractionStrings) {
  EXPECT_EQ(Score::parse("1/2"), Score(1, 2));
  EXPECT_EQ(Score::parse("1"), Score::one());
  EXPECT_EQ(Score::parse("0"), Score::zero());
  EXPECT_EQ(Score::parse("2/4").str(), "1/2");
  EXPECT_THROW(Score::parse("x"), std::invalid_argument);
  EXPECT_THROW(Score::parse("1/"), std::invalid_argument);
  EXPECT_THROW(Score::parse("3/2"), std::domain_error);
}
