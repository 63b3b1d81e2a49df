#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhqr {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Raised when an input violates a documented precondition.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Exponents p of the domain {z in C^n : sum_j |z_j|^(2 p_j) < 1}.
/// p = (1,...,1) is the unit ball.
class DomainSpec {
public:
  explicit DomainSpec(std::vector<int> p);
  DomainSpec(std::initializer_list<int> p) : DomainSpec(std::vector<int>(p)) {}

  std::size_t n() const { return p_.size(); }
  int p(std::size_t j) const { return p_[j]; }
  std::span<const int> exponents() const { return p_; }

  /// sum_j 1/p_j
  double inverse_exponent_sum() const;

  bool operator==(const DomainSpec &) const = default;

private:
  std::vector<int> p_;
};

/// A multi-index in N^n. Entries are nonnegative.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries)
      : MultiIndex(std::vector<int>(entries)) {}

  static MultiIndex zeros(std::size_t n) {
    return MultiIndex(std::vector<int>(n, 0));
  }

  std::size_t size() const { return e_.size(); }
  int operator[](std::size_t j) const { return e_[j]; }
  std::span<const int> entries() const { return e_; }
  int degree() const;
  bool is_zero() const { return degree() == 0; }

  /// sum_j a_j b_j
  friend long dot(const MultiIndex &a, const MultiIndex &b);

  bool operator==(const MultiIndex &) const = default;
  /// Graded lexicographic: lower degree first; within a degree, the index
  /// with the larger leading entry comes first.
  friend bool graded_less(const MultiIndex &a, const MultiIndex &b);

  std::string to_string() const;

private:
  std::vector<int> e_;
};

struct GradedLess {
  bool operator()(const MultiIndex &a, const MultiIndex &b) const {
    return graded_less(a, b);
  }
};

/// alpha + nu - mu, or nullopt when some entry would be negative.
std::optional<MultiIndex> shifted(const MultiIndex &alpha, const MultiIndex &nu,
                                  const MultiIndex &mu);

/// Partition k of n into s consecutive blocks with offsets khat.
/// Block j (0-based) covers coordinates [khat[j], khat[j+1]).
class Partition {
public:
  explicit Partition(std::vector<int> k);
  Partition(std::initializer_list<int> k) : Partition(std::vector<int>(k)) {}

  /// The single-block partition (n).
  static Partition whole(std::size_t n) { return Partition({static_cast<int>(n)}); }

  std::size_t blocks() const { return k_.size(); }
  int size(std::size_t j) const { return k_[j]; }
  std::size_t begin(std::size_t j) const { return static_cast<std::size_t>(khat_[j]); }
  std::size_t end(std::size_t j) const { return static_cast<std::size_t>(khat_[j + 1]); }
  std::size_t total() const { return static_cast<std::size_t>(khat_.back()); }
  std::span<const int> k() const { return k_; }
  std::span<const int> khat() const { return khat_; }
  std::size_t block_of(std::size_t coordinate) const;

  /// Throws DomainError unless |k| = d.n().
  void check_compatible(const DomainSpec &d) const;

  bool operator==(const Partition &) const = default;

private:
  std::vector<int> k_;
  std::vector<int> khat_;
};

/// p-polar coordinates (r, xi) with z_j = r^(1/p_j) xi_j.
struct PPolarPoint {
  double r = 0.0;
  ComplexVector xi;
};

double p_norm(std::span<const Complex> z, const DomainSpec &d);

/// Throws DomainError("origin has no p-polar form") for z = 0.
PPolarPoint to_p_polar(std::span<const Complex> z, const DomainSpec &d);
ComplexVector from_p_polar(const PPolarPoint &pp, const DomainSpec &d);

/// r_j = ||z_(j)||_p for each block of the partition.
std::vector<double> group_radii(std::span<const Complex> z, const DomainSpec &d,
                                const Partition &part);

long lcm_p(const DomainSpec &d);
/// lcm(p) * (1/p_1, ..., 1/p_n)
MultiIndex lambda_p(const DomainSpec &d);

/// All multi-indices of length n with |alpha| <= degree, graded-lex order.
std::vector<MultiIndex> enumerate_basis(std::size_t n, int degree);
inline std::vector<MultiIndex> enumerate_basis(const DomainSpec &d, int degree) {
  return enumerate_basis(d.n(), degree);
}

/// C(n + degree, n)
std::size_t basis_size(std::size_t n, int degree);

} // namespace qhqr
