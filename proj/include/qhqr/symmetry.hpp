#pragma once

#include "qhqr/domain.hpp"
#include "qhqr/symbol.hpp"

#include <cstdint>
#include <vector>

namespace qhqr {

/// Element of the torus T^n, tau_j = exp(i angle_j), angles in [0, 2 pi).
class TorusElement {
public:
  explicit TorusElement(std::vector<double> angles);

  static TorusElement identity(std::size_t n) {
    return TorusElement(std::vector<double>(n, 0.0));
  }
  /// Uniform element drawn from the seed's counter stream.
  static TorusElement random(std::size_t n, std::uint64_t seed);

  std::size_t n() const { return angles_.size(); }
  double angle(std::size_t j) const { return angles_[j]; }
  const std::vector<double> &angles() const { return angles_; }
  Complex tau(std::size_t j) const { return std::polar(1.0, angles_[j]); }

  TorusElement operator*(const TorusElement &o) const;
  TorusElement inverse() const;

  /// (tau_1 z_1, ..., tau_n z_n)
  ComplexVector act(std::span<const Complex> z) const;

private:
  std::vector<double> angles_;
};

/// x mod 2 pi in [0, 2 pi).
double reduce_angle(double x);
/// x mod 2 pi in (-pi, pi].
double wrap_angle(double x);
/// Largest wrapped angle difference between two elements.
double angle_distance(const TorusElement &a, const TorusElement &b);

/// tau -> tau^Lambda(p)
TorusElement pi_p(const TorusElement &t, const DomainSpec &d);

/// Element whose block j has all angles equal to omega_j.
TorusElement embed_tks(std::span<const double> omega, const Partition &part);

/// max over sampled z of |phi(g z) - phi(z)|, skipping points where phi is
/// undefined. Points come from the rejection sampler with the given seed.
double invariance_max_dev(const QHQRSymbol &sym, const TorusElement &g,
                          const DomainSpec &d, const Partition &part,
                          std::uint64_t sample_count, std::uint64_t seed);

/// Largest residue |p_t1 angle_t1 - p_t2 angle_t2| (wrapped) over pairs
/// t1 < t2 in a common block. These are the product conditions for the
/// generating pairs nu = p_t1 e_t1, mu = p_t2 e_t2.
double membership_residue(const TorusElement &g, const DomainSpec &d,
                          const Partition &part);

/// membership_residue <= tol. The solution set is a closed subgroup whose
/// identity component is pi_p(T^s_k); it does not depend on h.
bool membership_tkp(const TorusElement &g, const DomainSpec &d,
                    const Partition &part, double tol = 1e-9);

} // namespace qhqr
