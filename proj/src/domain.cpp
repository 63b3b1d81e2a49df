#include "qhqr/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qhqr {

DomainSpec::DomainSpec(std::vector<int> p) : p_(std::move(p)) {
  if (p_.empty())
    throw DomainError("domain dimension n must be at least 1");
  for (std::size_t j = 0; j < p_.size(); ++j)
    if (p_[j] < 1)
      throw DomainError("exponent p_" + std::to_string(j + 1) +
                        " must be a positive integer, got " +
                        std::to_string(p_[j]));
}

double DomainSpec::inverse_exponent_sum() const {
  double s = 0.0;
  for (int pj : p_)
    s += 1.0 / pj;
  return s;
}

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_)
    if (v < 0)
      throw DomainError("multi-index entries must be nonnegative");
}

int MultiIndex::degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }

long dot(const MultiIndex &a, const MultiIndex &b) {
  if (a.size() != b.size())
    throw DomainError("multi-index length mismatch");
  long s = 0;
  for (std::size_t j = 0; j < a.size(); ++j)
    s += static_cast<long>(a[j]) * b[j];
  return s;
}

bool graded_less(const MultiIndex &a, const MultiIndex &b) {
  const int da = a.degree(), db = b.degree();
  if (da != db)
    return da < db;
  return std::lexicographical_compare(b.e_.begin(), b.e_.end(), a.e_.begin(),
                                      a.e_.end());
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < e_.size(); ++j)
    os << (j ? "," : "") << e_[j];
  os << ')';
  return os.str();
}

std::optional<MultiIndex> shifted(const MultiIndex &alpha, const MultiIndex &nu,
                                  const MultiIndex &mu) {
  if (alpha.size() != nu.size() || alpha.size() != mu.size())
    throw DomainError("multi-index length mismatch");
  std::vector<int> out(alpha.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    out[j] = alpha[j] + nu[j] - mu[j];
    if (out[j] < 0)
      return std::nullopt;
  }
  return MultiIndex(std::move(out));
}

Partition::Partition(std::vector<int> k) : k_(std::move(k)) {
  if (k_.empty())
    throw DomainError("partition must have at least one block");
  khat_.assign(1, 0);
  for (int kj : k_) {
    if (kj < 1)
      throw DomainError("partition blocks must be positive");
    khat_.push_back(khat_.back() + kj);
  }
}

std::size_t Partition::block_of(std::size_t coordinate) const {
  for (std::size_t j = 0; j < blocks(); ++j)
    if (coordinate < end(j))
      return j;
  throw DomainError("coordinate outside partition");
}

void Partition::check_compatible(const DomainSpec &d) const {
  if (total() != d.n())
    throw DomainError("partition sums to " + std::to_string(total()) +
                      " but n = " + std::to_string(d.n()));
}

namespace {

void check_length(std::span<const Complex> z, const DomainSpec &d) {
  if (z.size() != d.n())
    throw DomainError("point has " + std::to_string(z.size()) +
                      " coordinates, domain has n = " + std::to_string(d.n()));
}

double weighted_power(Complex zj, int pj) {
  return std::pow(std::norm(zj), pj); // |z_j|^(2 p_j)
}

} // namespace

double p_norm(std::span<const Complex> z, const DomainSpec &d) {
  check_length(z, d);
  double s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j)
    s += weighted_power(z[j], d.p(j));
  return std::sqrt(s);
}

PPolarPoint to_p_polar(std::span<const Complex> z, const DomainSpec &d) {
  const double r = p_norm(z, d);
  if (r == 0.0)
    throw DomainError("origin has no p-polar form");
  PPolarPoint pp{r, ComplexVector(z.size())};
  for (std::size_t j = 0; j < z.size(); ++j)
    pp.xi[j] = z[j] / std::pow(r, 1.0 / d.p(j));
  return pp;
}

ComplexVector from_p_polar(const PPolarPoint &pp, const DomainSpec &d) {
  check_length(pp.xi, d);
  ComplexVector z(pp.xi.size());
  for (std::size_t j = 0; j < z.size(); ++j)
    z[j] = std::pow(pp.r, 1.0 / d.p(j)) * pp.xi[j];
  return z;
}

std::vector<double> group_radii(std::span<const Complex> z, const DomainSpec &d,
                                const Partition &part) {
  check_length(z, d);
  part.check_compatible(d);
  std::vector<double> r(part.blocks());
  for (std::size_t j = 0; j < part.blocks(); ++j) {
    double s = 0.0;
    for (std::size_t t = part.begin(j); t < part.end(j); ++t)
      s += weighted_power(z[t], d.p(t));
    r[j] = std::sqrt(s);
  }
  return r;
}

long lcm_p(const DomainSpec &d) {
  long l = 1;
  for (int pj : d.exponents())
    l = std::lcm(l, static_cast<long>(pj));
  return l;
}

MultiIndex lambda_p(const DomainSpec &d) {
  const long l = lcm_p(d);
  std::vector<int> lam(d.n());
  for (std::size_t j = 0; j < d.n(); ++j)
    lam[j] = static_cast<int>(l / d.p(j));
  return MultiIndex(std::move(lam));
}

namespace {

void fill_degree(std::vector<int> &cur, std::size_t pos, int remaining,
                 std::vector<MultiIndex> &out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    fill_degree(cur, pos + 1, remaining - v, out);
  }
}

} // namespace

std::vector<MultiIndex> enumerate_basis(std::size_t n, int degree) {
  if (n == 0)
    throw DomainError("basis dimension must be positive");
  if (degree < 0)
    throw DomainError("degree bound must be nonnegative");
  std::vector<MultiIndex> out;
  out.reserve(basis_size(n, degree));
  std::vector<int> cur(n, 0);
  for (int d = 0; d <= degree; ++d)
    fill_degree(cur, 0, d, out);
  return out;
}

std::size_t basis_size(std::size_t n, int degree) {
  // C(n + N, n) computed incrementally; exact for the sizes used here.
  std::size_t c = 1;
  for (std::size_t i = 1; i <= n; ++i)
    c = c * (static_cast<std::size_t>(degree) + i) / i;
  return c;
}

} // namespace qhqr
