#include "qhqr/symmetry.hpp"
#include "qhqr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qhqr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_length(std::size_t got, std::size_t n) {
  if (got != n)
    throw DomainError("torus element has " + std::to_string(got) +
                      " angles, expected " + std::to_string(n));
}

} // namespace

double reduce_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0)
    r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

double wrap_angle(double x) {
  double r = reduce_angle(x);
  return r > std::numbers::pi ? r - kTwoPi : r;
}

TorusElement::TorusElement(std::vector<double> angles) : angles_(std::move(angles)) {
  for (auto &a : angles_) {
    if (!std::isfinite(a))
      throw DomainError("torus angle must be finite");
    a = reduce_angle(a);
  }
}

TorusElement TorusElement::random(std::size_t n, std::uint64_t seed) {
  const CounterRng rng(seed);
  std::vector<double> a(n);
  for (std::size_t j = 0; j < n; ++j)
    a[j] = kTwoPi * rng.uniform(j);
  return TorusElement(std::move(a));
}

TorusElement TorusElement::operator*(const TorusElement &o) const {
  check_length(o.n(), n());
  std::vector<double> a(n());
  for (std::size_t j = 0; j < n(); ++j)
    a[j] = angles_[j] + o.angles_[j];
  return TorusElement(std::move(a));
}

TorusElement TorusElement::inverse() const {
  std::vector<double> a(n());
  for (std::size_t j = 0; j < n(); ++j)
    a[j] = -angles_[j];
  return TorusElement(std::move(a));
}

ComplexVector TorusElement::act(std::span<const Complex> z) const {
  check_length(z.size(), n());
  ComplexVector out(n());
  for (std::size_t j = 0; j < n(); ++j)
    out[j] = tau(j) * z[j];
  return out;
}

double angle_distance(const TorusElement &a, const TorusElement &b) {
  check_length(b.n(), a.n());
  double m = 0.0;
  for (std::size_t j = 0; j < a.n(); ++j)
    m = std::max(m, std::abs(wrap_angle(a.angle(j) - b.angle(j))));
  return m;
}

TorusElement pi_p(const TorusElement &t, const DomainSpec &d) {
  check_length(t.n(), d.n());
  const auto L = lambda_p(d);
  std::vector<double> a(t.n());
  for (std::size_t j = 0; j < t.n(); ++j)
    a[j] = L[j] * t.angle(j);
  return TorusElement(std::move(a));
}

TorusElement embed_tks(std::span<const double> omega, const Partition &part) {
  if (omega.size() != part.blocks())
    throw DomainError("embedding needs one angle per block");
  std::vector<double> a(part.total());
  for (std::size_t j = 0; j < part.blocks(); ++j)
    for (std::size_t t = part.begin(j); t < part.end(j); ++t)
      a[t] = omega[j];
  return TorusElement(std::move(a));
}

double invariance_max_dev(const QHQRSymbol &sym, const TorusElement &g,
                          const DomainSpec &d, const Partition &part,
                          std::uint64_t sample_count, std::uint64_t seed) {
  part.check_compatible(d);
  if (!(sym.part == part))
    throw DomainError("symbol partition differs from the requested partition");
  check_length(g.n(), d.n());
  const auto pts = draw_domain_points(d, sample_count, seed);
  double m = 0.0;
  for (const auto &z : pts.points) {
    const auto gz = g.act(z);
    if (!symbol_defined_at(sym, z, d) || !symbol_defined_at(sym, gz, d))
      continue;
    m = std::max(m, std::abs(eval_symbol(sym, gz, d) - eval_symbol(sym, z, d)));
  }
  return m;
}

double membership_residue(const TorusElement &g, const DomainSpec &d,
                          const Partition &part) {
  part.check_compatible(d);
  check_length(g.n(), d.n());
  double m = 0.0;
  for (std::size_t j = 0; j < part.blocks(); ++j)
    for (std::size_t t1 = part.begin(j); t1 < part.end(j); ++t1)
      for (std::size_t t2 = t1 + 1; t2 < part.end(j); ++t2) {
        const double r = d.p(t1) * g.angle(t1) - d.p(t2) * g.angle(t2);
        m = std::max(m, std::abs(wrap_angle(r)));
      }
  return m;
}

bool membership_tkp(const TorusElement &g, const DomainSpec &d, const Partition &part,
                    double tol) {
  return membership_residue(g, d, part) <= tol;
}

} // namespace qhqr
