#pragma once

#include "qhqr/domain.hpp"
#include "qhqr/symbol.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qhqr {

/// Counter-addressable SplitMix64 stream: draw i of a seed is the i-th
/// SplitMix64 output, so any sample can be regenerated independently of
/// how the counter space is split into batches.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const {
    std::uint64_t z = seed_ + (counter + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

private:
  std::uint64_t seed_;
};

struct MCConfig {
  std::uint64_t sample_count = 1'000'000; ///< proposals drawn
  std::uint64_t seed = 0;
  std::uint64_t batch_size = 1 << 16;
  unsigned threads = 1; ///< 0 = hardware concurrency

  /// Throws DomainError when sample_count < 1000 or batch_size == 0.
  void check() const;
};

/// Monte Carlo estimate of an integral over the domain.
struct Estimate {
  Complex value;
  double std_error = 0.0;
  std::uint64_t samples_used = 0;
};

/// Rejection sampler: every coordinate uniform on the unit disk, accepted
/// iff the p-norm is below one. Proposal i consumes counters
/// [2 n i, 2 n (i + 1)) of the seed's stream.
class DomainSampler {
public:
  DomainSampler(DomainSpec d, std::uint64_t seed);

  /// Writes proposal i into z and returns whether it lies in the domain.
  bool propose(std::uint64_t i, std::span<Complex> z) const;
  const DomainSpec &domain() const { return d_; }

private:
  DomainSpec d_;
  CounterRng rng_;
};

struct SampleSet {
  std::vector<ComplexVector> points;
  std::uint64_t proposals = 0;
  double acceptance_rate = 0.0;
  std::optional<std::string> warning; ///< set when acceptance < 0.1%
};

/// Accepted points among cfg.sample_count proposals.
SampleSet mc_sample_domain(const DomainSpec &d, const MCConfig &cfg);

/// Draws proposals until `count` points are accepted.
SampleSet draw_domain_points(const DomainSpec &d, std::uint64_t count,
                             std::uint64_t seed);

/// Fills `out` with integrand values at an accepted point.
using VectorIntegrand =
    std::function<void(std::span<const Complex> z, std::span<Complex> out)>;

/// Estimates the integrals over the domain (Lebesgue measure dV) of
/// `outputs` integrands simultaneously. The value is pi^n times the mean
/// over all proposals of the indicator times the integrand. Batches are
/// reduced in batch order, so results are bit-identical for any thread
/// count. A NaN integrand value throws DomainError naming the point.
std::vector<Estimate> oracle_integrate(const DomainSpec &d, std::size_t outputs,
                                       const VectorIntegrand &f,
                                       const MCConfig &cfg);

using ScalarFunction = std::function<Complex(std::span<const Complex>)>;

/// Estimate of the integral of f z^alpha conj(z^beta) dV.
Estimate oracle_inner(const ScalarFunction &f, const MultiIndex &alpha,
                      const MultiIndex &beta, const DomainSpec &d,
                      const MCConfig &cfg);
Estimate oracle_inner(const QHQRSymbol &sym, const MultiIndex &alpha,
                      const MultiIndex &beta, const DomainSpec &d,
                      const MCConfig &cfg);

/// z^alpha evaluated from log-magnitudes and phases.
Complex monomial_value(std::span<const double> log_abs,
                       std::span<const double> arg, const MultiIndex &alpha);

/// Gauss rule on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int points);
/// Gauss-Jacobi rule on [0, 1] for the weight x^a (1 - x)^b, a, b > -1.
GaussRule gauss_jacobi(int points, double a, double b);

struct SimplexNode {
  std::vector<double> r;
  double weight = 0.0;
};

/// Product rule over {r in R_+^s : sum r_j^2 < 1} in hyperspherical
/// coordinates: Gauss-Jacobi with degree + 1 points on the radius and
/// degree + 8 points per angle. Integrates monomials prod r_j^(c_j) with
/// |c| <= 2 degree to round-off. 1 <= s <= 4, 1 <= degree <= 64.
std::vector<SimplexNode> simplex_quadrature(int s, int degree);

/// Same rule applied without materializing the node list.
double integrate_simplex(int s, int degree,
                         const std::function<double(std::span<const double>)> &f);

/// Integral of f(r) prod_j r_j^(e_j - 1) over the region, with the power
/// weight built into the rule (e_j > 0).
double integrate_simplex_weighted(std::span<const double> e, int degree,
                                  const std::function<double(std::span<const double>)> &f);

} // namespace qhqr
