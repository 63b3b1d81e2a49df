#include "qhqr/closed_forms.hpp"
#include "qhqr/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

using namespace qhqr;

namespace {

Complex one(std::span<const Complex>) { return 1.0; }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST(Sampler, DiskAcceptsEverything) {
  MCConfig cfg;
  cfg.sample_count = 10'000;
  const auto s = mc_sample_domain(DomainSpec{1}, cfg);
  EXPECT_EQ(s.acceptance_rate, 1.0);
  EXPECT_FALSE(s.warning);
}

TEST(Sampler, BallAcceptsHalf) {
  MCConfig cfg;
  cfg.sample_count = 400'000;
  cfg.seed = 3;
  const DomainSpec d{1, 1};
  const auto s = mc_sample_domain(d, cfg);
  const double se = std::sqrt(0.25 / cfg.sample_count);
  EXPECT_NEAR(s.acceptance_rate, 0.5, 4 * se);
  for (const auto &z : s.points)
    ASSERT_LT(p_norm(z, d), 1.0);
}

TEST(Sampler, DegenerateAcceptanceWarns) {
  MCConfig cfg;
  cfg.sample_count = 20'000;
  const auto s = mc_sample_domain(DomainSpec(std::vector<int>(8, 1)), cfg);
  ASSERT_TRUE(s.warning.has_value());
  EXPECT_NE(s.warning->find("acceptance rate"), std::string::npos);
}

TEST(Sampler, RejectsTinySampleCounts) {
  MCConfig cfg;
  cfg.sample_count = 999;
  EXPECT_THROW(mc_sample_domain(DomainSpec{1}, cfg), DomainError);
}

TEST(Oracle, VolumeAndOrthogonality) {
  MCConfig cfg;
  cfg.sample_count = 1'000'000;
  cfg.seed = 99;
  for (const DomainSpec &d : {DomainSpec{1}, DomainSpec{1, 2}, DomainSpec{2, 1, 3},
                              DomainSpec{1, 1, 2, 1}}) {
    const auto z0 = MultiIndex::zeros(d.n());
    const auto v = oracle_inner(one, z0, z0, d, cfg);
    EXPECT_LE(std::abs(v.value - domain_volume(d)), 3 * v.std_error);
    std::vector<int> e(d.n(), 0);
    e[0] = 1;
    const auto o = oracle_inner(one, MultiIndex(e), z0, d, cfg);
    EXPECT_LE(std::abs(o.value), 3 * o.std_error);
  }
}

TEST(Oracle, RadialSymbolMatchesClosedForm) {
  const DomainSpec d{1, 2};
  const Partition k{1, 1};
  const QHQRSymbol sym(k, QuasiRadialSymbol::monomial({2.0, 0.0}));
  MCConfig cfg;
  cfg.sample_count = 1'000'000;
  cfg.seed = 5;
  const MultiIndex z0{0, 0};
  const auto e = oracle_inner(sym, z0, z0, d, cfg);
  const double exact =
      gamma_radial(sym.radial, d, k, z0).value * monomial_inner_product(d, z0, z0);
  EXPECT_LE(std::abs(e.value - exact), 3 * e.std_error);
}

TEST(Oracle, NaNNamesThePoint) {
  MCConfig cfg;
  cfg.sample_count = 1000;
  auto bad = [](std::span<const Complex>) {
    return Complex(std::numeric_limits<double>::quiet_NaN());
  };
  try {
    oracle_inner(bad, {0}, {0}, DomainSpec{1}, cfg);
    FAIL();
  } catch (const DomainError &e) {
    EXPECT_NE(std::string(e.what()).find("z = ("), std::string::npos);
  }
}

TEST(Oracle, DeterministicAcrossRunsAndThreads) {
  const DomainSpec d{1, 2, 1};
  MCConfig cfg;
  cfg.sample_count = 300'000;
  cfg.seed = 42;
  cfg.batch_size = 10'000;
  auto f = [](std::span<const Complex> z) { return z[0] * std::conj(z[1]) + 0.5; };
  const auto a = oracle_inner(f, {1, 0, 0}, {0, 0, 1}, d, cfg);
  const auto b = oracle_inner(f, {1, 0, 0}, {0, 0, 1}, d, cfg);
  cfg.threads = 4;
  const auto c = oracle_inner(f, {1, 0, 0}, {0, 0, 1}, d, cfg);
  for (const auto &x : {b, c}) {
    EXPECT_TRUE(same_bits(a.value.real(), x.value.real()));
    EXPECT_TRUE(same_bits(a.value.imag(), x.value.imag()));
    EXPECT_TRUE(same_bits(a.std_error, x.std_error));
  }
  cfg.seed = 43;
  EXPECT_NE(oracle_inner(f, {1, 0, 0}, {0, 0, 1}, d, cfg).value, a.value);
}

TEST(Oracle, StdErrorScalesWithSamples) {
  const DomainSpec d{1, 1};
  MCConfig cfg;
  cfg.seed = 8;
  cfg.sample_count = 100'000;
  const auto a = oracle_inner(one, {1, 0}, {1, 0}, d, cfg);
  cfg.sample_count = 200'000;
  const auto b = oracle_inner(one, {1, 0}, {1, 0}, d, cfg);
  const double ratio = a.std_error / b.std_error;
  EXPECT_NEAR(ratio, std::sqrt(2.0), 0.3 * std::sqrt(2.0));
}

TEST(Gauss, IntegratesPolynomialsExactly) {
  const auto g = gauss_legendre(8);
  for (int k = 0; k < 16; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < 8; ++i)
      s += g.weights[i] * std::pow(g.nodes[i], k);
    EXPECT_NEAR(s, 1.0 / (k + 1), 1e-15);
  }
}

TEST(Gauss, JacobiMomentsExact) {
  const auto g = gauss_jacobi(6, -0.5, 1.5);
  for (int k = 0; k < 12; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
      s += g.weights[i] * std::pow(g.nodes[i], k);
    // int x^(k - 1/2) (1 - x)^(3/2) dx = B(k + 1/2, 5/2)
    const double exact =
        std::exp(std::lgamma(k + 0.5) + std::lgamma(2.5) - std::lgamma(k + 3.0));
    EXPECT_NEAR(s / exact, 1.0, 1e-13);
  }
  EXPECT_THROW(gauss_jacobi(4, -1.0, 0.0), DomainError);
}

TEST(Simplex, WeightedMatchesDirichlet) {
  const std::vector<double> e{0.4, 1.7, 2.0};
  const double q = integrate_simplex_weighted(
      e, 6, [](std::span<const double> r) { return r[0] * r[0] * r[2] * r[2]; });
  EXPECT_NEAR(q, dirichlet_simplex_moment(std::vector<double>{2.4, 1.7, 4.0}), 1e-13);
}

TEST(Simplex, OneDimensional) {
  const double v = integrate_simplex(1, 4, [](std::span<const double> r) { return r[0]; });
  EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(Simplex, ProductMoment) {
  const double v = integrate_simplex(
      2, 8, [](std::span<const double> r) { return r[0] * r[1]; });
  EXPECT_NEAR(v, dirichlet_simplex_moment(std::vector<double>{2.0, 2.0}), 1e-12);
}

TEST(Simplex, WeightsPositiveSumToVolume) {
  for (int s = 1; s <= 4; ++s) {
    const auto nodes = simplex_quadrature(s, 6);
    double sum = 0.0;
    for (const auto &n : nodes) {
      ASSERT_GT(n.weight, 0.0);
      double r2 = 0.0;
      for (double x : n.r) {
        ASSERT_GE(x, 0.0);
        r2 += x * x;
      }
      ASSERT_LT(r2, 1.0);
      sum += n.weight;
    }
    const std::vector<double> ones(static_cast<std::size_t>(s), 1.0);
    EXPECT_NEAR(sum, dirichlet_simplex_moment(ones), 1e-12);
  }
}

TEST(Simplex, PolynomialExactness) {
  // Every monomial prod r_j^(c_j) with |c| <= 2 degree, both parities.
  const int degree = 5;
  for (int s = 1; s <= 4; ++s)
    for (const auto &c : enumerate_basis(static_cast<std::size_t>(s), 2 * degree)) {
      auto f = [&](std::span<const double> r) {
        double v = 1.0;
        for (std::size_t j = 0; j < r.size(); ++j)
          v *= std::pow(r[j], c[j]);
        return v;
      };
      std::vector<double> b(static_cast<std::size_t>(s));
      for (std::size_t j = 0; j < b.size(); ++j)
        b[j] = c[j] + 1.0;
      EXPECT_NEAR(integrate_simplex(s, degree, f), dirichlet_simplex_moment(b), 1e-13)
          << "s=" << s << " c=" << c.to_string();
    }
}

TEST(Simplex, RangeChecks) {
  EXPECT_THROW(simplex_quadrature(0, 4), DomainError);
  EXPECT_THROW(simplex_quadrature(5, 4), DomainError);
  EXPECT_THROW(simplex_quadrature(2, 65), DomainError);
  EXPECT_THROW(simplex_quadrature(2, 0), DomainError);
}
