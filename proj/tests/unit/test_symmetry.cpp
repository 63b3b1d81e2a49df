#include "qhqr/symmetry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace qhqr;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_angles(std::size_t s, std::uint64_t seed) {
  return TorusElement::random(s, seed).angles();
}

} // namespace

TEST(Torus, AnglesReduced) {
  const TorusElement t({-0.5, 7.0, 2 * kPi, 4 * kPi + 1.0});
  for (double a : t.angles()) {
    EXPECT_GE(a, 0.0);
    EXPECT_LT(a, 2 * kPi);
  }
  EXPECT_NEAR(t.angle(0), 2 * kPi - 0.5, 1e-15);
  EXPECT_EQ(t.angle(2), 0.0);
  EXPECT_NEAR(t.angle(3), 1.0, 1e-14);
}

TEST(Torus, GroupLaws) {
  const auto a = TorusElement::random(3, 1), b = TorusElement::random(3, 2);
  const auto c = TorusElement::random(3, 3);
  EXPECT_LE(angle_distance((a * b) * c, a * (b * c)), 1e-12);
  EXPECT_LE(angle_distance(a * a.inverse(), TorusElement::identity(3)), 1e-12);
  EXPECT_LE(angle_distance(a * b, b * a), 1e-12);
}

TEST(PiP, BallIsIdentity) {
  const DomainSpec d{1, 1, 1};
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto t = TorusElement::random(3, s);
    EXPECT_EQ(pi_p(t, d).angles(), t.angles());
  }
}

TEST(PiP, Homomorphism) {
  const DomainSpec d{1, 2, 4, 3};
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto t = TorusElement::random(4, 2 * s), u = TorusElement::random(4, 2 * s + 1);
    EXPECT_LE(angle_distance(pi_p(t * u, d), pi_p(t, d) * pi_p(u, d)), 1e-12);
  }
}

TEST(PiP, DiagonalExample) {
  const DomainSpec d{1, 2, 4};
  const double th = 0.3;
  const auto g = pi_p(TorusElement({th, th, th}), d);
  EXPECT_LE(angle_distance(g, TorusElement({4 * th, 2 * th, th})), 1e-15);
}

TEST(Embed, Examples) {
  const std::vector<double> one{0.7};
  const auto diag = embed_tks(one, Partition{3});
  EXPECT_EQ(diag.angles(), (std::vector<double>{0.7, 0.7, 0.7}));
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_EQ(embed_tks(zero, Partition{2, 1}).angles(), TorusElement::identity(3).angles());
  const std::vector<double> ab{0.25, 1.5};
  EXPECT_EQ(embed_tks(ab, Partition{2, 1}).angles(),
            (std::vector<double>{0.25, 0.25, 1.5}));
}

TEST(Embed, ImageClosedUnderProduct) {
  const Partition k{2, 2};
  const DomainSpec d{1, 1, 1, 1};
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto w1 = random_angles(2, s), w2 = random_angles(2, s + 100);
    const auto g = embed_tks(w1, k) * embed_tks(w2, k);
    EXPECT_LE(membership_residue(g, d, k), 1e-12);
  }
}

TEST(Invariance, IdentityIsExact) {
  const DomainSpec d{1, 2};
  const QHQRSymbol sym(Partition{2}, QuasiRadialSymbol::monomial({1.0}),
                       {MultiIndex{2, 0}, MultiIndex{0, 1}});
  EXPECT_EQ(invariance_max_dev(sym, TorusElement::identity(2), d, Partition{2}, 1000, 3),
            0.0);
}

TEST(Invariance, ClassSymbolsAreInvariant) {
  const DomainSpec d{1, 2, 1, 3};
  const Partition k{2, 2};
  // Lambda = (6, 3, 6, 2): 6 - 3 * 2 = 0 and 6 - 2 * 3 = 0.
  const QHQRSymbol sym(k, QuasiRadialSymbol::monomial({1.0, 2.0}),
                       {MultiIndex{1, 0, 1, 0}, MultiIndex{0, 2, 0, 3}});
  ASSERT_TRUE(validate_akh(d, k, ClassParams{{1, 1}}, sym).ok);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto g = pi_p(embed_tks(random_angles(2, s), k), d);
    EXPECT_LE(invariance_max_dev(sym, g, d, k, 2000, s), 1e-10);
  }
}

TEST(Invariance, WitnessDeviates) {
  const DomainSpec d{1, 1};
  const Partition k{2};
  const QHQRSymbol sym(k, QuasiRadialSymbol::constant(1.0),
                       {MultiIndex{1, 0}, MultiIndex{0, 1}});
  // |phi| <= |xi_1||xi_2| <= 1/2, so the deviation is at most |e^i - 1| / 2.
  const double dev = invariance_max_dev(sym, TorusElement({1.0, 0.0}), d, k, 10'000, 0);
  EXPECT_GT(dev, 0.45);
  EXPECT_LE(dev, std::sin(0.5) + 1e-12);
}

TEST(Invariance, SkipsUndefinedStrata) {
  const DomainSpec d{1, 1};
  const QHQRSymbol sym(Partition{1, 1}, QuasiRadialSymbol::constant(1.0),
                       {MultiIndex{1, 0}, MultiIndex{0, 0}});
  EXPECT_NO_THROW(invariance_max_dev(sym, TorusElement({0.5, 0.0}), d, Partition{1, 1},
                                     1000, 1));
}

TEST(Membership, ImageOfEmbedding) {
  const std::vector<std::pair<DomainSpec, Partition>> cases{
      {{1, 2, 4}, {3}}, {{2, 3, 1, 1}, {2, 2}}, {{1, 1, 1}, {1, 2}}, {{3, 2}, {2}}};
  for (const auto &[d, k] : cases)
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto g = pi_p(embed_tks(random_angles(k.blocks(), s), k), d);
      EXPECT_TRUE(membership_tkp(g, d, k));
    }
}

TEST(Membership, GenericElementsFail) {
  const DomainSpec d{1, 2, 3};
  const Partition k{3};
  int members = 0;
  for (std::uint64_t s = 0; s < 100; ++s)
    members += membership_tkp(TorusElement::random(3, 1000 + s), d, k);
  EXPECT_LE(members, 1);
}

TEST(Membership, BallMeansBlockConstant) {
  const DomainSpec d{1, 1, 1};
  const Partition k{2, 1};
  EXPECT_TRUE(membership_tkp(TorusElement({0.4, 0.4, 2.0}), d, k));
  EXPECT_FALSE(membership_tkp(TorusElement({0.4, 0.5, 2.0}), d, k));
  EXPECT_TRUE(membership_tkp(TorusElement({0.1, 0.2, 0.3}), d, Partition{1, 1, 1}));
}
